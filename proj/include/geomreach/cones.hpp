#pragma once

#include <utility>
#include <vector>

#include "geomreach/linalg.hpp"

namespace geomreach {

inline constexpr double kConeTol = 1e-9;
inline constexpr int kMaxDualDim = 8;

// Conic hull of finitely many nonzero generators, stored unit-normalized as
// the columns of a d x m matrix. No generators means the cone {0}.
class PolyhedralCone {
 public:
  explicit PolyhedralCone(int ambient_dim = 0);
  PolyhedralCone(const Matrix& generators);
  PolyhedralCone(int ambient_dim, const std::vector<Vector>& generators);

  int ambient_dim() const { return d_; }
  int generator_count() const { return static_cast<int>(gens_.cols()); }
  const Matrix& generators() const { return gens_; }
  Vector generator(int i) const { return gens_.col(i); }

 private:
  int d_;
  Matrix gens_;
};

struct NnlsResult {
  Vector lambda;
  Vector projection;  // G * lambda
  double residual = 0;
};

// Lawson-Hanson non-negative least squares: min ||G l - v||, l >= 0.
NnlsResult nnls(const Matrix& g, const Vector& v);

bool cone_contains(const PolyhedralCone& c, const Vector& v, double tol = kConeTol);
// Polar cone {x : <a, x> <= 0 for all a in C}. Throws for d > 8.
PolyhedralCone dual_cone(const PolyhedralCone& c);

struct VectorSpaceTest {
  bool is_vector_space = false;
  int dimension = 0;  // rank of the generators
};
VectorSpaceTest is_vector_space(const PolyhedralCone& c, double tol = kConeTol);

// Smallest angle between v and a unit vector of C; pi when C = {0}.
double angle_to_cone(const PolyhedralCone& c, const Vector& v);
// v lies in the angular eps-thickening of C.
bool thickened_contains(const PolyhedralCone& c, double eps, const Vector& v);

// Largest angle from a unit vector of X to the cone Y, capped at pi/2.
// X is inside the eps-thickening of Y, for eps in (0, pi/2], exactly when
// this value is below eps.
double containment_angle(const PolyhedralCone& x, const PolyhedralCone& y);
bool cone_in_thickening(const PolyhedralCone& x, const PolyhedralCone& y, double eps);

// Index sets of the generators lying on each face of C, including C itself
// and the minimal face. Needs d <= 8.
std::vector<std::vector<int>> cone_faces(const PolyhedralCone& c);

}  // namespace geomreach
