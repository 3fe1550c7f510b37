#include <doctest.h>

#include <numbers>

#include "geomreach/errors.hpp"
#include "geomreach/geodesics.hpp"
#include "test_support.hpp"

using namespace geomreach;
using testsupport::gaussian;

namespace {

PointCloud circle_cloud(std::size_t n, double R = 1.0) {
  Matrix pts(2, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double t = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    pts.col(static_cast<Eigen::Index>(i)) << R * std::cos(t), R * std::sin(t);
  }
  return PointCloud(pts, 1);
}

Polyline arc(double R, double angle, std::size_t m) {
  Matrix pts(2, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double t = angle * static_cast<double>(i) / static_cast<double>(m - 1);
    pts.col(static_cast<Eigen::Index>(i)) << R * std::cos(t), R * std::sin(t);
  }
  return make_polyline(pts);
}

}  // namespace

TEST_SUITE("geodesics") {

TEST_CASE("path graph on collinear points") {
  Matrix pts(2, 3);
  pts << 0, 1, 2, 0, 0, 0;
  PointCloud c(pts, 1);
  GraphParams p;
  p.k = 1;
  auto g = build_graph(c, p);
  CHECK(g.component_count() == 1);
  auto d = distances_from(g, 0);
  CHECK(d[2] == 2.0);
  auto sp = shortest_path(g, 0, 2);
  CHECK(sp.length == 2.0);
  CHECK(sp.path.nodes == std::vector<std::size_t>{0, 1, 2});
  CHECK(sp.path.arc.back() == 2.0);
}

TEST_CASE("graph parameters are validated") {
  PointCloud c = circle_cloud(8);
  GraphParams p;
  p.k = 8;
  CHECK_THROWS(build_graph(c, p));
  p.k = 0;
  CHECK_THROWS(build_graph(c, p));
  p.k = 2;
  p.radius = 0.1;
  CHECK_THROWS(build_graph(c, p));
  GraphParams r;
  r.radius = -1;
  CHECK_THROWS(build_graph(c, r));
  // Neither given: the default neighbour count.
  auto g = build_graph(c, GraphParams{});
  REQUIRE(g.params().k.has_value());
  CHECK(*g.params().k == default_knn(1));
}

TEST_CASE("cycle graph on a circle") {
  const std::size_t n = 64;
  GraphParams p;
  p.k = 2;
  auto g = build_graph(circle_cloud(n), p);
  for (std::size_t i = 0; i < n; ++i) CHECK(g.neighbors(i).size() == 2);
  double chord = 2 * std::sin(std::numbers::pi / static_cast<double>(n));
  auto d = distances_from(g, 0);
  CHECK(d[n / 2] == doctest::Approx(static_cast<double>(n / 2) * chord).epsilon(1e-13));
}

TEST_CASE("graph distance converges to arc length on a dense circle") {
  const std::size_t n = 512;
  GraphParams p;
  p.k = 2;
  auto g = build_graph(circle_cloud(n), p);
  auto d = distances_from(g, 0);
  double bound = std::pow(std::numbers::pi / static_cast<double>(n), 2) / 6;
  double worst = 0;
  for (std::size_t j = 1; j < n; ++j) {
    double steps = static_cast<double>(std::min(j, n - j));
    double arc_len = 2 * std::numbers::pi * steps / static_cast<double>(n);
    worst = std::max(worst, std::abs(d[j] - arc_len) / arc_len);
  }
  CHECK(worst <= bound * (1 + 1e-9));
  CHECK(worst <= 1e-4);
}

TEST_CASE("graph metric properties") {
  std::mt19937_64 rng(61);
  Matrix pts = gaussian(rng, 3, 200);
  PointCloud c(pts, 2);
  GraphParams p;
  p.k = 5;
  auto g = build_graph(c, p);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& e : g.neighbors(i)) {
      CHECK(std::abs(e.length - (pts.col(static_cast<Eigen::Index>(i)) - pts.col(static_cast<Eigen::Index>(e.to))).norm()) <= 1e-12);
      bool back = false;
      for (const auto& f : g.neighbors(e.to)) back = back || (f.to == i && f.length == e.length);
      CHECK(back);
    }
  std::vector<std::vector<double>> d;
  for (std::size_t s = 0; s < 20; ++s) d.push_back(distances_from(g, s));
  for (std::size_t a = 0; a < 20; ++a)
    for (std::size_t b = 0; b < 20; ++b) {
      if (g.component(a) != g.component(b)) continue;
      CHECK(d[a][b] >= (pts.col(static_cast<Eigen::Index>(a)) - pts.col(static_cast<Eigen::Index>(b))).norm() - 1e-12);
      CHECK(std::abs(d[a][b] - d[b][a]) <= 1e-12 * d[a][b]);
      for (std::size_t c2 = 0; c2 < 20; ++c2)
        if (g.component(c2) == g.component(a)) CHECK(d[a][b] <= d[a][c2] + d[c2][b] + 1e-12);
    }
}

TEST_CASE("disconnected clusters") {
  Matrix pts(2, 6);
  pts << 0, 0.1, 0.2, 10, 10.1, 10.2, 0, 0, 0, 0, 0, 0;
  GraphParams p;
  p.radius = 0.15;
  auto g = build_graph(PointCloud(pts, 1), p);
  CHECK(g.component_count() == 2);
  CHECK(distances_from(g, 0)[4] == kInf);
  auto sp = shortest_path(g, 0, 4);
  CHECK(sp.length == kInf);
  CHECK(sp.path.vertex_count() == 0);
  auto self = shortest_path(g, 1, 1);
  CHECK(self.length == 0);
  CHECK(self.path.vertex_count() == 1);
}

TEST_CASE("induced subgraph keeps only inner edges") {
  GraphParams p;
  p.k = 2;
  auto g = build_graph(circle_cloud(16), p);
  auto h = induced_subgraph(g, {0, 1, 2, 8});
  CHECK(h.size() == 4);
  CHECK(h.component_count() == 2);
  CHECK(distances_from(h, 0)[2] == doctest::Approx(distances_from(g, 0)[2]));
}

TEST_CASE("chord bound on straight and circular polylines") {
  Matrix line(2, 5);
  line << 0, 1, 2, 3, 4, 0, 0, 0, 0, 0;
  auto straight = make_polyline(line);
  for (double R : {0.7, 1.0, 10.0, kInf}) {
    auto v = chord_bound_check(straight, R);
    CHECK(v.hypothesis_holds);
    CHECK(v.bound_holds);
    CHECK(v.min_slack >= -1e-12);
  }
  CHECK_THROWS_AS(chord_bound_check(straight, 0.5), HypothesisError);

  // Quarter arcs: slack shrinks toward zero as the polyline refines.
  double prev = kInf;
  for (std::size_t m : {32, 128, 512}) {
    auto v = chord_bound_check(arc(1.0, std::numbers::pi / 2, m), 1.0);
    CHECK(v.hypothesis_holds);
    CHECK(v.consistent());
    double end_slack = std::sqrt(2.0) - 2 * std::sin(arc(1.0, std::numbers::pi / 2, m).length() / 2);
    CHECK(end_slack > 0);
    CHECK(end_slack < prev);
    prev = end_slack;
  }
  CHECK(prev < 1e-5);

  auto tight = chord_bound_check(arc(1.0, std::numbers::pi / 2, 256), 2.0);
  CHECK_FALSE(tight.hypothesis_holds);
  CHECK(tight.consistent());
}

TEST_CASE("tangent variation along polylines") {
  Matrix line(2, 4);
  line << 0, 1, 2, 3, 0, 0, 0, 0;
  std::vector<Subspace> flat(4, Subspace::coordinate(2, {0}));
  CHECK(geodesic_tangent_variation(make_polyline(line), flat).ratio == 0);
  CHECK_THROWS(geodesic_tangent_variation(make_polyline(line), std::vector<Subspace>(3, Subspace::coordinate(2, {0}))));

  const double R = 2.0;
  const std::size_t m = 200;
  auto a = arc(R, 1.0, m);
  std::vector<Subspace> tans;
  for (std::size_t i = 0; i < m; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(m - 1);
    tans.push_back(testsupport::line2(t + std::numbers::pi / 2));
  }
  auto tv = geodesic_tangent_variation(a, tans);
  CHECK(tv.ratio == doctest::Approx(1 / R).epsilon(1e-3));
}

}
