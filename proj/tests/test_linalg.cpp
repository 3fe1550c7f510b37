#include <doctest.h>

#include <numbers>

#include "geomreach/linalg.hpp"
#include "test_support.hpp"

using namespace geomreach;
using testsupport::gaussian;
using testsupport::line2;
using testsupport::vec;

TEST_SUITE("linalg") {

TEST_CASE("span orthonormalizes and rejects dependent input") {
  Matrix m(3, 2);
  m << 1, 1, 0, 1, 0, 0;
  Subspace s = Subspace::span(m);
  CHECK(s.dim() == 2);
  Matrix gram = s.basis().transpose() * s.basis();
  CHECK((gram - Matrix::Identity(2, 2)).norm() < 1e-12);
  Matrix p = s.projector();
  CHECK((p * p - p).norm() < 1e-12);

  Matrix dep(3, 2);
  dep << 1, 2, 1, 2, 1, 2 + 1e-12;
  CHECK_THROWS(Subspace::span(dep));
  Matrix bad(2, 1);
  bad << std::nan(""), 1;
  CHECK_THROWS(Subspace::span(bad));
}

TEST_CASE("from_orthonormal checks its input") {
  Matrix b(2, 1);
  b << 1, 1;
  CHECK_THROWS(Subspace::from_orthonormal(b));
  b << 0.6, 0.8;
  CHECK_NOTHROW(Subspace::from_orthonormal(b));
}

TEST_CASE("principal angles on small cases") {
  auto e1 = Subspace::coordinate(2, {0});
  auto a = principal_angles(e1, e1);
  REQUIRE(a.size() == 1);
  CHECK(std::abs(a[0]) < 1e-15);

  auto rot = line2(std::numbers::pi / 4);
  CHECK(principal_angles(e1, rot)[0] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));

  auto xy = Subspace::coordinate(3, {0, 1});
  auto xz = Subspace::coordinate(3, {0, 2});
  auto pa = principal_angles(xy, xz);
  REQUIRE(pa.size() == 2);
  CHECK(std::abs(pa[0]) < 1e-15);
  CHECK(pa[1] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(grassmann_angle(xy, xz) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("principal angles need matching nonzero dimensions") {
  auto e1 = Subspace::coordinate(3, {0});
  auto xy = Subspace::coordinate(3, {0, 1});
  CHECK_THROWS(principal_angles(e1, xy));
  CHECK_THROWS(principal_angles(Subspace(3), Subspace(3)));
  CHECK_THROWS(principal_angles(Subspace::coordinate(2, {0}), e1));
}

TEST_CASE("grassmann angle between lines matches the planar angle") {
  for (double t : {0.0, 1e-9, 1e-5, 0.3, 1.0, std::numbers::pi / 2 - 1e-9, std::numbers::pi / 2}) {
    CHECK(grassmann_angle(line2(0.0), line2(t)) == doctest::Approx(t).epsilon(1e-12));
    CHECK(grassmann_angle(line2(0.2), line2(0.2 + t)) == doctest::Approx(t).epsilon(1e-9).scale(1));
  }
  // Lines through opposite directions are the same line.
  CHECK(grassmann_angle(line2(0.1), line2(0.1 + std::numbers::pi)) < 1e-14);
}

TEST_CASE("hyperplane angle equals the angle between normals") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vector n1 = gaussian(rng, 4, 1).col(0).normalized();
    Vector n2 = gaussian(rng, 4, 1).col(0).normalized();
    Subspace h1 = Subspace::span(n1).orthogonal_complement();
    Subspace h2 = Subspace::span(n2).orthogonal_complement();
    double normal_angle = std::acos(std::min(1.0, std::abs(n1.dot(n2))));
    CHECK(grassmann_angle(h1, h2) == doctest::Approx(normal_angle).epsilon(1e-9));
  }
}

TEST_CASE("sine distance agrees with both routes") {
  CHECK(grassmann_sine_distance(line2(0), line2(std::numbers::pi / 6)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(grassmann_sine_distance(line2(0), line2(std::numbers::pi / 2)) == doctest::Approx(1.0));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 2 + static_cast<int>(rng() % 5);
    int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
    Subspace a = Subspace::span(gaussian(rng, d, k));
    Subspace b = Subspace::span(gaussian(rng, d, k));
    double s = grassmann_sine_distance(a, b);
    CHECK(s == doctest::Approx(std::sin(grassmann_angle(a, b))).epsilon(1e-10).scale(1));
    CHECK(s == doctest::Approx(projector_distance(a, b)).epsilon(1e-10).scale(1));
  }
}

TEST_CASE("max angle is a metric on random triples") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    int d = 3 + static_cast<int>(rng() % 4);
    int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
    Subspace a = Subspace::span(gaussian(rng, d, k));
    Subspace b = Subspace::span(gaussian(rng, d, k));
    Subspace c = Subspace::span(gaussian(rng, d, k));
    double ab = grassmann_angle(a, b), ba = grassmann_angle(b, a);
    CHECK(std::abs(ab - ba) < 1e-10);
    CHECK(ab <= grassmann_angle(a, c) + grassmann_angle(c, b) + 1e-9);
    auto pab = principal_angles(a, b), pba = principal_angles(b, a);
    for (std::size_t i = 0; i < pab.size(); ++i) CHECK(std::abs(pab[i] - pba[i]) < 1e-10);
  }
}

TEST_CASE("principal angles against an independent cosine route") {
  // Singular values of Q_a^T Q_b via a fresh Gram-Schmidt basis.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix ga = gaussian(rng, 5, 2), gb = gaussian(rng, 5, 2);
    Eigen::HouseholderQR<Matrix> qa(ga), qb(gb);
    Matrix A = qa.householderQ() * Matrix::Identity(5, 2);
    Matrix B = qb.householderQ() * Matrix::Identity(5, 2);
    Eigen::JacobiSVD<Matrix> svd(A.transpose() * B);
    Vector sv = svd.singularValues();
    auto angles = principal_angles(Subspace::span(ga), Subspace::span(gb));
    // ascending angles pair with descending cosines
    for (int i = 0; i < 2; ++i) {
      double cosv = std::min(1.0, sv(i));
      if (cosv < 0.99) CHECK(angles[static_cast<std::size_t>(i)] == doctest::Approx(std::acos(cosv)).epsilon(1e-9));
    }
  }
}

TEST_CASE("distance to an affine flat") {
  CHECK(dist_to_affine(vec({1, 1}), vec({0, 0}), Subspace::coordinate(2, {0})) == doctest::Approx(1.0));
  CHECK(dist_to_affine(vec({3, 1}), vec({1, 1}), Subspace::coordinate(2, {0})) < 1e-15);
  CHECK(dist_to_affine(vec({3, 4}), vec({0, 0}), Subspace(2)) == doctest::Approx(5.0));
  CHECK_THROWS(dist_to_affine(vec({3, 4, 0}), vec({0, 0}), Subspace(2)));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    Subspace t = Subspace::span(gaussian(rng, 4, 2));
    Vector p = gaussian(rng, 4, 1).col(0), q = gaussian(rng, 4, 1).col(0);
    double dist = dist_to_affine(q, p, t);
    double along = t.project(q - p).norm();
    CHECK(dist * dist + along * along == doctest::Approx((q - p).squaredNorm()).epsilon(1e-10));
  }
}

TEST_CASE("angle from a vector to a subspace") {
  auto e1 = Subspace::coordinate(2, {0});
  CHECK(angle_vector_to_subspace(vec({2, 0}), e1) == doctest::Approx(0.0));
  CHECK(angle_vector_to_subspace(vec({0, 3}), e1) == doctest::Approx(std::numbers::pi / 2));
  CHECK(angle_vector_to_subspace(vec({1, 1}), e1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK_THROWS(angle_vector_to_subspace(vec({0, 0}), e1));
}

TEST_CASE("operator norm is the largest singular value") {
  Matrix m(2, 2);
  m << 3, 0, 0, -4;
  CHECK(operator_norm(m) == doctest::Approx(4.0));
  CHECK(operator_norm(Matrix::Zero(3, 2)) == 0.0);
}

}
