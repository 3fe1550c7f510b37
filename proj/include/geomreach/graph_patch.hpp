#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "geomreach/linalg.hpp"
#include "geomreach/point_cloud.hpp"

namespace geomreach {

// Samples near p written as q = p + x + phi(x) with x in the tangent space
// and phi(x) in the normal space, both in orthonormal frame coordinates.
struct GraphPatch {
  std::size_t base_index = 0;
  Vector base;
  Subspace tangent;
  Subspace normal;
  std::vector<std::size_t> indices;  // cloud indices; the base comes first
  Matrix x;                          // n x m tangent coordinates
  Matrix phi;                        // (d-n) x m normal coordinates
  double radius_R = 0;
  double epsilon = 0;
  double alpha = 0;
  double spacing = 0;  // largest nearest-neighbour gap in tangent coordinates
  // Selected samples whose normal part exceeds R.
  std::vector<std::size_t> pythagoras_violations;

  std::vector<LinearMap> derivatives;  // one (d-n) x n map per sample once fitted
  double fit_residual = 0;             // largest absolute residual of the local fits
  double fit_tolerance = 0;            // derivative error scale of the fits
  double base_derivative_norm = 0;     // ||Dphi(0)||

  std::size_t size() const { return indices.size(); }
  int tangent_dim() const { return static_cast<int>(x.rows()); }
  int normal_dim() const { return static_cast<int>(phi.rows()); }
};

// Selects |q-p| < sqrt(2) R with tangent part of norm < R. Throws
// InjectivityError when two samples with (nearly) the same tangent
// coordinates sit on different sheets.
GraphPatch extract_patch(const PointCloud& cloud, std::size_t p, double R);

// Least-squares quadratic fit of phi over the nearest tangent-coordinate
// neighbours of each sample; 0 selects twice the term count plus one.
// Throws on rank deficiency.
void fit_derivatives(GraphPatch& patch, int neighborhood_size = 0);
// Derivatives read off the cloud's tangents: Dphi = (N^T T_q)(T^T T_q)^{-1}.
void derivatives_from_tangents(GraphPatch& patch, const PointCloud& cloud);

struct LipschitzResult {
  double constant = 0;
  std::size_t i = 0, j = 0;  // patch positions
  double bound = 0;          // 1 / (rch_loc - eps)
  double tolerance = 0;      // relative, from the fit
  std::size_t samples = 0;
  bool pass = false;
};
// max ||Dphi(y2) - Dphi(y1)|| / |y2 - y1| over samples with |y| < alpha.
LipschitzResult lipschitz_derivative_constant(const GraphPatch& patch, double rch_loc);

// sqrt(eps R); throws HypothesisError when eps/R > 1/2.
double alpha_bound(double epsilon, double R);
// Radius on which a sphere of radius R keeps the derivative Lipschitz
// constant at 1/(R - eps): R sqrt(1 - (1 - eps/R)^(2/3)).
double alpha_sphere_exact(double epsilon, double R);

struct ConvexityVerdict {
  Vector direction;  // normal coordinates
  double slack = 0;
  double midpoint_defect = 0;     // worst g(mid) - (g(y) + g(y'))/2
  double first_order_defect = 0;  // worst g(y) + grad.(y'-y) - g(y')
  std::size_t mid_i = 0, mid_j = 0;
  std::size_t fo_i = 0, fo_j = 0;
  bool midpoint_pass = true;
  bool first_order_pass = true;
  bool pass() const { return midpoint_pass && first_order_pass; }
};

struct SemiconvexityOptions {
  std::size_t max_pairs = 20000;  // all pairs when the ball holds <= 200 samples
  std::uint64_t seed = 0;
};

// Discrete convexity of g(x) = |x|^2/2 - r <v, phi(x)> on |x| < alpha.
std::vector<ConvexityVerdict> semiconvexity_check(const GraphPatch& patch, double r,
                                                  const std::vector<Vector>& directions,
                                                  const SemiconvexityOptions& opts = {});
// Normal basis vectors plus 2(d-n) seeded random unit combinations.
std::vector<Vector> default_normal_directions(const GraphPatch& patch, std::uint64_t seed = 0);

struct OperatorNormAngle {
  double lhs = 0;  // 2 sin(angle/2) between the graphs
  double rhs = 0;  // ||F2 - F1||
  bool pass = false;
};
OperatorNormAngle operator_norm_angle_bound(const LinearMap& f1, const LinearMap& f2);

}  // namespace geomreach
