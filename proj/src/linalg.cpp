#include "geomreach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geomreach/errors.hpp"

namespace geomreach {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw DimensionError("subspaces live in R^" + std::to_string(a.ambient_dim()) + " and R^" +
                         std::to_string(b.ambient_dim()));
}

void require_equal_dims(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  if (a.dim() != b.dim())
    throw DimensionError("max-angle metric needs equal dimensions, got " + std::to_string(a.dim()) +
                         " and " + std::to_string(b.dim()));
  if (a.dim() == 0) throw DimensionError("zero-dimensional subspace has no principal angles");
}

}  // namespace

Subspace::Subspace(int ambient_dim) : ambient_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw DimensionError("negative ambient dimension");
}

Subspace Subspace::span(const Matrix& vectors, double max_condition) {
  const int d = static_cast<int>(vectors.rows());
  Subspace s(d);
  if (vectors.cols() == 0) return s;
  if (!vectors.allFinite()) throw std::invalid_argument("spanning vectors contain non-finite entries");
  if (vectors.cols() > d) throw DimensionError("more spanning vectors than the ambient dimension");
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smax > max_condition * smin)
    throw std::invalid_argument("spanning vectors are nearly dependent (condition beyond " +
                                std::to_string(max_condition) + ")");
  // Householder QR keeps the column order of the input, which makes frames
  // built from parametrizations predictable.
  Eigen::HouseholderQR<Matrix> qr(vectors);
  Matrix q = qr.householderQ() * Matrix::Identity(d, vectors.cols());
  Matrix r = qr.matrixQR().topRows(vectors.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  s.basis_ = q;
  return s;
}

Subspace Subspace::from_orthonormal(const Matrix& basis) {
  const int d = static_cast<int>(basis.rows());
  if (basis.cols() > d) throw DimensionError("more basis vectors than the ambient dimension");
  if (!basis.allFinite()) throw std::invalid_argument("basis contains non-finite entries");
  Matrix g = basis.transpose() * basis;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      // Norm within tolerance of 1 means squared norm within about twice that.
      double tol = i == j ? 2.0 * kOrthoTol + kOrthoTol * kOrthoTol : kOrthoTol;
      if (std::abs(g(i, j) - want) > tol)
        throw std::invalid_argument("basis is not orthonormal to 1e-12");
    }
  Subspace s(d);
  s.basis_ = basis;
  return s;
}

Subspace Subspace::coordinate(int ambient_dim, const std::vector<int>& axes) {
  Matrix b = Matrix::Zero(ambient_dim, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= ambient_dim) throw DimensionError("axis out of range");
    b(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return from_orthonormal(b);
}

Vector Subspace::project(const Vector& v) const {
  if (v.size() != ambient_) throw DimensionError("vector length does not match ambient dimension");
  if (dim() == 0) return Vector::Zero(ambient_);
  return basis_ * (basis_.transpose() * v);
}

Matrix Subspace::projector() const {
  if (dim() == 0) return Matrix::Zero(ambient_, ambient_);
  return basis_ * basis_.transpose();
}

Subspace Subspace::orthogonal_complement() const {
  Subspace c(ambient_);
  if (dim() == ambient_) return c;
  if (dim() == 0) {
    c.basis_ = Matrix::Identity(ambient_, ambient_);
    return c;
  }
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ();
  c.basis_ = q.rightCols(ambient_ - dim());
  return c;
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  require_equal_dims(a, b);
  const Matrix& qa = a.basis();
  const Matrix& qb = b.basis();
  const int k = a.dim();

  Eigen::JacobiSVD<Matrix> cos_svd(qa.transpose() * qb);
  // Singular values of (I - P_A) Q_B are the sines of the same angles.
  Eigen::JacobiSVD<Matrix> sin_svd(qb - qa * (qa.transpose() * qb));
  const Vector& c = cos_svd.singularValues();  // descending -> angles ascending
  const Vector& s = sin_svd.singularValues();  // descending -> angles descending

  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) {
    double ci = clamp_unit(c(i));
    double si = clamp_unit(s(k - 1 - i));
    out[i] = ci * ci >= 0.5 ? std::asin(si) : std::acos(ci);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double grassmann_angle(const Subspace& a, const Subspace& b) {
  require_equal_dims(a, b);
  if (a.dim() == a.ambient_dim()) return 0.0;
  return principal_angles(a, b).back();
}

double grassmann_sine_distance(const Subspace& a, const Subspace& b) {
  return std::sin(grassmann_angle(a, b));
}

double projector_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  return operator_norm(a.projector() - b.projector());
}

double dist_to_affine(const Vector& q, const Vector& base, const Subspace& t) {
  if (q.size() != t.ambient_dim() || base.size() != t.ambient_dim())
    throw DimensionError("point and subspace dimensions differ");
  Vector v = q - base;
  return (v - t.project(v)).norm();
}

double angle_vector_to_subspace(const Vector& v, const Subspace& t) {
  if (v.size() != t.ambient_dim()) throw DimensionError("vector and subspace dimensions differ");
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("angle to a subspace is undefined for the zero vector");
  Vector u = v / n;
  Vector pu = t.project(u);
  double sine = clamp_unit((u - pu).norm());
  double cosine = clamp_unit(pu.norm());
  return cosine * cosine >= 0.5 ? std::asin(sine) : std::acos(cosine);
}

}  // namespace geomreach
