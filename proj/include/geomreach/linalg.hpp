#pragma once

#include <Eigen/Dense>
#include <vector>

namespace geomreach {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Matrix with n columns (domain) and m rows (codomain).
using LinearMap = Eigen::MatrixXd;

inline constexpr double kOrthoTol = 1e-12;
inline constexpr double kMaxCondition = 1e8;

// Linear subspace of R^d stored as a d x k matrix with orthonormal columns.
class Subspace {
 public:
  explicit Subspace(int ambient_dim = 0);

  // Orthonormalizes the columns. Throws if they are nearly dependent
  // (condition number above max_condition) or contain non-finite entries.
  static Subspace span(const Matrix& vectors, double max_condition = kMaxCondition);
  // Takes the columns as they are after checking orthonormality to kOrthoTol.
  static Subspace from_orthonormal(const Matrix& basis);
  static Subspace coordinate(int ambient_dim, const std::vector<int>& axes);

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Vector project(const Vector& v) const;
  Matrix projector() const;
  Subspace orthogonal_complement() const;

 private:
  int ambient_;
  Matrix basis_;
};

// Largest singular value.
double operator_norm(const Matrix& m);

// Principal angles in ascending order. Small angles come from sines and
// large ones from cosines so both ends stay accurate.
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);
// Largest principal angle between equal-dimensional subspaces.
double grassmann_angle(const Subspace& a, const Subspace& b);
double grassmann_sine_distance(const Subspace& a, const Subspace& b);
// ||P_A - P_B||_2, the second route to the sine distance.
double projector_distance(const Subspace& a, const Subspace& b);

double dist_to_affine(const Vector& q, const Vector& base, const Subspace& t);
double angle_vector_to_subspace(const Vector& v, const Subspace& t);

}  // namespace geomreach
