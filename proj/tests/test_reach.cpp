#include <doctest.h>

#include <numbers>

#include "geomreach/parallel.hpp"
#include "geomreach/reach.hpp"
#include "geomreach/shapes.hpp"
#include "test_support.hpp"

using namespace geomreach;
using testsupport::gaussian;

namespace {

GeneratedShape shape(ShapeKind k, std::size_t n = 0) {
  ShapeSpec s;
  s.kind = k;
  s.count = n;
  return generate(s);
}

double brute_federer(const PointCloud& c) {
  double best = kInf;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (i == j) continue;
      Vector v = c.point(j) - c.point(i);
      double dist = (v - c.tangent(i).project(v)).norm();
      if (dist <= 1e-12 * v.norm()) continue;
      best = std::min(best, v.squaredNorm() / (2 * dist));
    }
  return best;
}

double brute_global(const Matrix& pts) {
  const auto n = pts.cols();
  double best = kInf;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      Vector mid = 0.5 * (pts.col(a) + pts.col(b));
      double r = 0.5 * (pts.col(a) - pts.col(b)).norm();
      bool empty = true;
      for (Eigen::Index c = 0; c < n && empty; ++c)
        if (c != a && c != b && (pts.col(c) - mid).norm() < r) empty = false;
      if (empty) best = std::min(best, r);
    }
  return best;
}

}  // namespace

TEST_SUITE("reach") {

TEST_CASE("federer formula is exact on circles") {
  ShapeSpec s;
  s.kind = ShapeKind::circle;
  s.count = 64;
  auto g = generate(s);
  auto r = federer_reach(g.cloud);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.i != r.j);
  s.R = 3.5;
  CHECK(federer_reach(generate(s).cloud).value == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("federer formula on parallel lines") {
  const double h = 0.35;
  Matrix pts(2, 40);
  for (int i = 0; i < 20; ++i) {
    pts.col(i) << 0.1 * i, -h;
    pts.col(20 + i) << 0.1 * i + 0.05, h;
  }
  PointCloud c(pts, 1);
  c.set_tangents(std::vector<Subspace>(40, Subspace::coordinate(2, {0})));
  auto r = federer_reach(c);
  // Closest cross pair is offset by 0.05 along the lines.
  const double expect = (0.05 * 0.05 + 4 * h * h) / (4 * h);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.value == brute_federer(c));
}

TEST_CASE("federer formula against brute force on random frames") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    PointCloud c(gaussian(rng, 3, 120), 2);
    std::vector<Subspace> t;
    for (int i = 0; i < 120; ++i) t.push_back(Subspace::span(gaussian(rng, 3, 2)));
    c.set_tangents(t);
    CHECK(federer_reach(c).value == doctest::Approx(brute_federer(c)).epsilon(1e-14));
  }
}

TEST_CASE("federer formula needs tangents and two points") {
  Matrix pts(2, 3);
  pts.setRandom();
  CHECK_THROWS(federer_reach(PointCloud(pts, 1)));
  PointCloud one(Matrix::Zero(2, 1), 1);
  one.set_tangents({Subspace::coordinate(2, {0})});
  CHECK_THROWS(federer_reach(one));
}

TEST_CASE("ellipse curvature radius from the federer formula") {
  auto g = shape(ShapeKind::ellipse, 2048);
  CHECK(federer_reach(g.cloud).value == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("distortion radius") {
  CHECK(distortion_radius(2, std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distortion_radius(std::sqrt(2.0), std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(distortion_radius(1.5, 1.5) == kInf);
  CHECK_THROWS(distortion_radius(1.5, 1.4));
  auto over = distortion_radius_info(1.0, 2.0);
  CHECK(over.semicircle_exceeded);
  CHECK(over.r == 0.5);

  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double h = 0.01 + u(rng);
    double ell = h * (1 + (std::numbers::pi / 2 - 1) * u(rng) * 0.999 + 1e-9);
    double r = distortion_radius(h, ell);
    CHECK(r >= h / 2);
    CHECK(2 * r * std::asin(h / (2 * r)) == doctest::Approx(ell).epsilon(1e-10));
  }
}

TEST_CASE("distortion reach on circles") {
  const std::size_t n = 512;
  ShapeSpec s;
  s.kind = ShapeKind::circle;
  s.count = n;
  auto g = generate(s);
  REQUIRE(g.intrinsic_distance.has_value());
  auto exact = distortion_reach(g.cloud, *g.intrinsic_distance);
  CHECK(std::abs(exact.value - 1.0) <= 1e-6);
  GraphParams p;
  p.k = 2;
  auto graph = distortion_reach(g.cloud, build_graph(g.cloud, p));
  CHECK(std::abs(graph.value - 1.0) <= 1e-3);
  CHECK(graph.value >= exact.value - 1e-12);
}

TEST_CASE("segments impose no distortion or bottleneck constraint") {
  auto g = shape(ShapeKind::segment, 128);
  CHECK(distortion_reach(g.cloud, build_graph(g.cloud, {})).value == kInf);
  CHECK(global_reach(g.cloud, default_global_options(sample_spacing(g.cloud))).value == kInf);
  CHECK(federer_reach(g.cloud).value == kInf);
}

TEST_CASE("global reach against brute force on random planar clouds") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix pts = gaussian(rng, 2, 60);
    PointCloud c(pts, 1);
    auto r = global_reach(c, GlobalReachOptions{});
    CHECK(r.value == doctest::Approx(brute_global(pts)).epsilon(1e-15));
    REQUIRE_FALSE(r.bottlenecks.empty());
    auto [a, b] = r.bottlenecks.front();
    CHECK(0.5 * (pts.col(static_cast<Eigen::Index>(a)) - pts.col(static_cast<Eigen::Index>(b))).norm() == r.value);
  }
}

TEST_CASE("global reach of circle and two spheres") {
  auto c = shape(ShapeKind::circle, 256);
  double h = sample_spacing(c.cloud);
  CHECK(global_reach(c.cloud, default_global_options(h)).value == doctest::Approx(1.0).epsilon(1e-3));

  auto ts = shape(ShapeKind::two_spheres, 1024);
  auto r = global_reach(ts.cloud, default_global_options(sample_spacing(ts.cloud)));
  CHECK(r.value == doctest::Approx(0.3).epsilon(0.03));
  REQUIRE_FALSE(r.bottlenecks.empty());
  auto [a, b] = r.bottlenecks.front();
  // One end on each sphere.
  CHECK((a < 1024) != (b < 1024));
}

TEST_CASE("local reach") {
  auto c = shape(ShapeKind::circle, 256);
  auto g = build_graph(c.cloud, {});
  auto opts = default_local_options(c.cloud, sample_spacing(c.cloud));
  auto curve = local_reach_at(c.cloud, 17, g, opts);
  for (std::size_t k = 0; k < curve.rho.size(); ++k)
    if (curve.usable[k]) CHECK(curve.value[k] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(curve.monotone);

  auto ts = shape(ShapeKind::two_spheres, 1024);
  auto tg = build_graph(ts.cloud, {});
  auto lr = local_reach(ts.cloud, tg, default_local_options(ts.cloud, sample_spacing(ts.cloud)));
  CHECK(lr.value == doctest::Approx(1.0).epsilon(0.03));

  auto f = shape(ShapeKind::fillet_profile, 2048);
  auto fg = build_graph(f.cloud, {});
  auto fo = default_local_options(f.cloud, sample_spacing(f.cloud));
  auto fl = local_reach(f.cloud, fg, fo);
  CHECK(fl.value == doctest::Approx(0.4).epsilon(0.05));
  // Mid-arc sample: nearest to (rho, rho) - rho (1, 1) / sqrt 2.
  Vector mid(2);
  mid << 0.4 * (1 - 1 / std::sqrt(2.0)), 0.4 * (1 - 1 / std::sqrt(2.0));
  std::size_t best = 0;
  for (std::size_t i = 0; i < f.cloud.size(); ++i)
    if ((f.cloud.point(i) - mid).norm() < (f.cloud.point(best) - mid).norm()) best = i;
  CHECK(local_reach_at(f.cloud, best, fg, fo).estimate == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("local reach rejects sparse balls") {
  auto c = shape(ShapeKind::circle, 64);
  auto g = build_graph(c.cloud, {});
  LocalReachOptions o;
  o.rho_grid = {1e-3, 1e-4};
  CHECK_THROWS(local_reach_at(c.cloud, 0, g, o));
}

TEST_CASE("decomposition residual") {
  CHECK(decomposition_residual(0.5, 1.0, 0.5) == 0);
  CHECK(decomposition_residual(0.51, 1.0, 0.5) == doctest::Approx(0.02));
  CHECK(decomposition_residual(kInf, kInf, kInf) == 0);
  CHECK(decomposition_residual(kInf, 1.0, kInf) == kInf);
}

TEST_CASE("tangent variation") {
  ShapeSpec s;
  s.kind = ShapeKind::sphere;
  s.R = 2;
  s.count = 2048;
  auto g = generate(s);
  auto tv = tangent_variation_sup(g.cloud, build_graph(g.cloud, {}));
  CHECK(tv.value == doctest::Approx(0.5).epsilon(0.05));

  auto p = shape(ShapeKind::plane_patch, 256);
  CHECK(tangent_variation_sup(p.cloud, build_graph(p.cloud, {})).value == 0);
}

TEST_CASE("tangent angle fast paths agree with principal angles") {
  std::mt19937_64 rng(83);
  for (int d : {2, 3, 4}) {
    for (int n : {1, d - 1}) {
      PointCloud c(gaussian(rng, d, 30), n);
      std::vector<Subspace> t;
      for (int i = 0; i < 30; ++i) t.push_back(Subspace::span(gaussian(rng, d, n)));
      c.set_tangents(t);
      TangentAngles ta(c);
      for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j) CHECK(ta(i, j) == doctest::Approx(grassmann_angle(t[i], t[j])).epsilon(1e-9).scale(1));
    }
  }
}

TEST_CASE("chord angle check") {
  auto c = shape(ShapeKind::circle, 256);
  auto r = chord_angle_check(c.cloud, 1.0);
  CHECK(r.max_abs_gap <= 1e-9);
  CHECK(r.pairs > 0);
  auto p = shape(ShapeKind::plane_patch, 256);
  CHECK(chord_angle_check(p.cloud, 1.0).max_excess <= 1e-15);
  // A wrong, larger reach is caught.
  CHECK(chord_angle_check(c.cloud, 1.5).max_excess > 0.1);
}

TEST_CASE("results do not depend on the thread count") {
  auto g = shape(ShapeKind::torus, 2048);
  set_thread_count(1);
  auto a = federer_reach(g.cloud);
  auto ga = global_reach(g.cloud, default_global_options(sample_spacing(g.cloud)));
  set_thread_count(3);
  auto b = federer_reach(g.cloud);
  auto gb = global_reach(g.cloud, default_global_options(sample_spacing(g.cloud)));
  set_thread_count(0);
  CHECK(a.value == b.value);
  CHECK(a.i == b.i);
  CHECK(a.j == b.j);
  CHECK(ga.value == gb.value);
  CHECK(ga.bottlenecks == gb.bottlenecks);
}

}
