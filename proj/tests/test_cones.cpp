#include <doctest.h>

#include <numbers>

#include "geomreach/cones.hpp"
#include "test_support.hpp"

using namespace geomreach;
using testsupport::gaussian;
using testsupport::vec;

namespace {

PolyhedralCone cone(int d, std::initializer_list<std::initializer_list<double>> gens) {
  std::vector<Vector> g;
  for (auto& x : gens) g.push_back(vec(x));
  return PolyhedralCone(d, g);
}

bool same_set(const PolyhedralCone& a, const PolyhedralCone& b, double tol) {
  for (int i = 0; i < a.generator_count(); ++i)
    if (!cone_contains(b, a.generator(i), tol)) return false;
  for (int i = 0; i < b.generator_count(); ++i)
    if (!cone_contains(a, b.generator(i), tol)) return false;
  return true;
}

// Random cone: sometimes a subspace, sometimes pointed, sometimes mixed.
PolyhedralCone random_cone(std::mt19937_64& rng, int d) {
  int kind = static_cast<int>(rng() % 3);
  int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(d + 2));
  Matrix g = gaussian(rng, d, m);
  if (kind == 0) {
    Matrix both(d, 2 * m);
    both << g, -g;
    return PolyhedralCone(both);
  }
  if (kind == 1) {
    Matrix both(d, m + 1);
    both << g, -g.col(0);
    return PolyhedralCone(both);
  }
  return PolyhedralCone(g);
}

// Angle from v to the planar sector spanned by unit a and b (angle < pi).
double sector_angle(const Vector& a, const Vector& b, const Vector& v) {
  auto ang = [](const Vector& x) { return std::atan2(x(1), x(0)); };
  auto wrap = [](double t) {
    while (t < 0) t += 2 * std::numbers::pi;
    while (t >= 2 * std::numbers::pi) t -= 2 * std::numbers::pi;
    return t;
  };
  double ta = ang(a), tb = ang(b), tv = ang(v);
  double width = wrap(tb - ta);
  if (width > std::numbers::pi) {
    std::swap(ta, tb);
    width = wrap(tb - ta);
  }
  double off = wrap(tv - ta);
  if (off <= width) return 0;
  double to_a = std::min(off, 2 * std::numbers::pi - off);
  double to_b = std::min(wrap(tv - tb), 2 * std::numbers::pi - wrap(tv - tb));
  return std::min({to_a, to_b, std::numbers::pi});
}

}  // namespace

TEST_SUITE("cones") {

TEST_CASE("membership") {
  auto q = cone(2, {{1, 0}, {0, 1}});
  CHECK(cone_contains(q, vec({1, 1})));
  CHECK_FALSE(cone_contains(q, vec({-1, 0})));
  CHECK(cone_contains(cone(2, {{1, 0}}), vec({0, 0})));
  CHECK_THROWS(cone(2, {{0, 0}}));
}

TEST_CASE("nnls matches a hand-solved problem") {
  Matrix g(2, 2);
  g << 1, 0, 0, 1;
  auto r = nnls(g, vec({2, -3}));
  CHECK(r.lambda(0) == doctest::Approx(2.0));
  CHECK(r.lambda(1) == doctest::Approx(0.0));
  CHECK(r.residual == doctest::Approx(3.0));
}

TEST_CASE("dual of simple cones") {
  CHECK(same_set(dual_cone(cone(2, {{1, 0}, {0, 1}})), cone(2, {{-1, 0}, {0, -1}}), 1e-12));
  CHECK(same_set(dual_cone(cone(2, {{1, 0}, {-1, 0}})), cone(2, {{0, 1}, {0, -1}}), 1e-12));
  CHECK(same_set(dual_cone(cone(2, {{1, 0}})), cone(2, {{-1, 0}, {0, 1}, {0, -1}}), 1e-12));
  // {0} and the whole space are dual to each other.
  CHECK(dual_cone(PolyhedralCone(3)).generator_count() > 0);
  CHECK(is_vector_space(dual_cone(PolyhedralCone(3))).dimension == 3);
  CHECK(dual_cone(cone(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}})).generator_count() == 0);
  CHECK_THROWS(dual_cone(PolyhedralCone(9)));
}

TEST_CASE("dual membership agrees with the defining inequalities") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + static_cast<int>(rng() % 4);
    PolyhedralCone c = random_cone(rng, d);
    PolyhedralCone dc = dual_cone(c);
    for (int s = 0; s < 20; ++s) {
      Vector x = gaussian(rng, d, 1).col(0).normalized();
      double worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < c.generator_count(); ++i) worst = std::max(worst, c.generator(i).dot(x));
      if (std::abs(worst) < 1e-6) continue;
      CHECK(cone_contains(dc, x, 1e-8) == (worst < 0));
    }
  }
}

TEST_CASE("dual of dual, containment reversal, subspace duality") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + static_cast<int>(rng() % 5);
    PolyhedralCone c = random_cone(rng, d);
    PolyhedralCone dc = dual_cone(c);
    CHECK(same_set(dual_cone(dc), c, 1e-8));

    // C is inside C + extra, so the duals reverse.
    Matrix extra(d, c.generator_count() + 1);
    extra << c.generators(), gaussian(rng, d, 1);
    PolyhedralCone bigger(extra);
    PolyhedralCone dbig = dual_cone(bigger);
    for (int i = 0; i < dbig.generator_count(); ++i) CHECK(cone_contains(dc, dbig.generator(i), 1e-8));

    auto vs = is_vector_space(c);
    auto dvs = is_vector_space(dc);
    CHECK(vs.is_vector_space == dvs.is_vector_space);
    if (vs.is_vector_space) CHECK(dvs.dimension == d - vs.dimension);
  }
}

TEST_CASE("vector space detection") {
  CHECK_FALSE(is_vector_space(cone(2, {{1, 0}})).is_vector_space);
  auto line = is_vector_space(cone(2, {{1, 0}, {-1, 0}}));
  CHECK(line.is_vector_space);
  CHECK(line.dimension == 1);
  auto plane = is_vector_space(cone(2, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
  CHECK(plane.is_vector_space);
  CHECK(plane.dimension == 2);
  // Three directions at 120 degrees span the plane as a cone.
  auto tri = is_vector_space(cone(2, {{1, 0}, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2}}));
  CHECK(tri.is_vector_space);
  CHECK(tri.dimension == 2);
}

TEST_CASE("thickening on small cases") {
  auto ray = cone(2, {{1, 0}});
  CHECK(thickened_contains(ray, 1e-9, vec({3, 0})));
  CHECK_FALSE(thickened_contains(ray, std::numbers::pi / 4, vec({0, 1})));
  CHECK(thickened_contains(ray, std::numbers::pi / 2 + 0.01, vec({0, 1})));
  CHECK(thickened_contains(ray, std::numbers::pi / 4 + 1e-6, vec({1, 1})));
  CHECK_FALSE(thickened_contains(ray, std::numbers::pi / 4 - 1e-6, vec({1, 1})));
  CHECK_THROWS(thickened_contains(ray, 0.1, vec({0, 0})));
  CHECK(angle_to_cone(PolyhedralCone(2), vec({1, 0})) == doctest::Approx(std::numbers::pi));
  CHECK(angle_to_cone(ray, vec({-1, 0})) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("angle to a planar sector against direct geometry") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 500; ++trial) {
    Vector a = gaussian(rng, 2, 1).col(0).normalized();
    Vector b = gaussian(rng, 2, 1).col(0).normalized();
    if (std::abs(a.dot(b)) > 0.999) continue;
    Vector v = gaussian(rng, 2, 1).col(0);
    PolyhedralCone c(2, {a, b});
    CHECK(angle_to_cone(c, v) == doctest::Approx(sector_angle(a, b, v)).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("containment angle bounds sampled angles and matches thickening duality") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> eps_dist(1e-3, std::numbers::pi / 2 - 1e-3);
  int compared = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int d = 2 + static_cast<int>(rng() % 3);
    PolyhedralCone x = random_cone(rng, d), y = random_cone(rng, d);
    double ca = containment_angle(x, y);
    CHECK(ca >= 0);
    CHECK(ca <= std::numbers::pi / 2 + 1e-12);
    // Lower bound from sampled unit vectors of X.
    for (int s = 0; s < 30; ++s) {
      Vector w = Vector::Zero(d);
      for (int i = 0; i < x.generator_count(); ++i) w += std::abs(gaussian(rng, 1, 1)(0, 0)) * x.generator(i);
      if (w.norm() < 1e-9) continue;
      CHECK(std::min(angle_to_cone(y, w), std::numbers::pi / 2) <= ca + 1e-7);
    }
    PolyhedralCone dx = dual_cone(x), dy = dual_cone(y);
    for (int s = 0; s < 5; ++s) {
      double eps = eps_dist(rng);
      if (std::abs(ca - eps) < 1e-7) continue;
      double dual_ca = containment_angle(dy, dx);
      if (std::abs(dual_ca - eps) < 1e-7) continue;
      CHECK(cone_in_thickening(x, y, eps) == cone_in_thickening(dy, dx, eps));
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("faces of a quadrant") {
  auto faces = cone_faces(cone(2, {{1, 0}, {0, 1}}));
  // {}, {0}, {1}, {0, 1}
  CHECK(faces.size() == 4);
}

}
