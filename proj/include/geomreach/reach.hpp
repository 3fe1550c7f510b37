#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "geomreach/geodesics.hpp"
#include "geomreach/kdtree.hpp"
#include "geomreach/point_cloud.hpp"

namespace geomreach {

// Extremal value of a pairwise sweep with the pair attaining it. Ties go to
// the lexicographically smallest (i, j).
struct PairExtremum {
  double value = kInf;
  std::size_t i = kNoIndex;
  std::size_t j = kNoIndex;
};

// Largest nearest-neighbour distance.
double sample_spacing(const PointCloud& cloud);

// inf over ordered pairs of |p-q|^2 / (2 d(q, p + T_p)). A pair whose
// distance to the flat is below 1e-12 |p-q| imposes no constraint.
PairExtremum federer_reach(const PointCloud& cloud);

struct DistortionRadius {
  double r = kInf;
  bool semicircle_exceeded = false;
};
// Solves ell = 2 r arcsin(h / 2r) for r >= h/2. ell == h gives infinity;
// ell > pi h / 2 gives h/2 with the semicircle flag.
DistortionRadius distortion_radius_info(double h, double ell);
double distortion_radius(double h, double ell);

// min over connected pairs of distortion_radius(|a-b|, d_G(a, b)).
PairExtremum distortion_reach(const PointCloud& cloud, const GeodesicGraph& graph);
// Same with a caller-supplied intrinsic distance (kInf for "unrelated").
PairExtremum distortion_reach(const PointCloud& cloud, const std::function<double(std::size_t, std::size_t)>& intrinsic);

struct GlobalReachOptions {
  double emptiness_tol = 0.0;
  // Pairs with |a-b|/2 below this are not examined: their midpoint balls are
  // too small to be resolved by the sample.
  double resolution = 0.0;
};
struct GlobalReachResult {
  double value = kInf;
  std::vector<std::pair<std::size_t, std::size_t>> bottlenecks;  // within 1% of value, by (half-length, i, j)
};
GlobalReachResult global_reach(const PointCloud& cloud, const GlobalReachOptions& opts);
// Spacing-relative defaults for the options above.
GlobalReachOptions default_global_options(double spacing);

struct LocalReachOptions {
  std::vector<double> rho_grid;  // strictly decreasing
  bool use_federer = true;
  bool use_distortion = true;
  double monotone_slack = 0.01;
};
// Default grid {8, 4, 2} * spacing.
std::vector<double> default_rho_grid(double spacing);
// Federer needs tangents; distortion is left out on surfaces with known
// tangents, where k-NN paths zigzag and bias it low.
LocalReachOptions default_local_options(const PointCloud& cloud, double spacing);

struct LocalReachCurve {
  std::size_t point = 0;
  std::vector<double> rho;
  std::vector<std::size_t> count;
  std::vector<bool> usable;
  std::vector<double> value;  // kInf where no pair constrains, NaN where unusable
  double estimate = kInf;     // value at the smallest usable rho
  double estimate_rho = 0;
  bool monotone = true;
};
LocalReachCurve local_reach_at(const PointCloud& cloud, std::size_t p, const GeodesicGraph& graph,
                               const LocalReachOptions& opts);

struct LocalReachResult {
  double value = kInf;
  std::size_t argmin = kNoIndex;
  std::vector<double> per_point;
  std::vector<double> per_point_rho;
};
LocalReachResult local_reach(const PointCloud& cloud, const GeodesicGraph& graph, const LocalReachOptions& opts);

// |rch - min(glob, loc)| / min(glob, loc), with 0 when both sides are
// infinite and infinity when only one is.
double decomposition_residual(double rch, double rch_global, double rch_local);

// sup over connected pairs of grassmann_angle(T_p, T_q) / d_G(p, q).
PairExtremum tangent_variation_sup(const PointCloud& cloud, const GeodesicGraph& graph);

// grassmann_angle between the tangents of two samples, with fast paths for
// curves and hypersurfaces.
class TangentAngles {
 public:
  explicit TangentAngles(const PointCloud& cloud);
  double operator()(std::size_t i, std::size_t j) const;

 private:
  const PointCloud* cloud_;
  int d_ = 0;
  bool lines_ = false;  // compare one unit direction per point
  std::vector<double> dirs_;
};

struct ChordAngleResult {
  double max_excess = -kInf;  // max of sin(angle) - |p-q|/(2 rch)
  std::size_t i = kNoIndex, j = kNoIndex;
  double max_abs_gap = 0;     // max of |sin(angle) - |p-q|/(2 rch)|
  std::size_t pairs = 0;
};
ChordAngleResult chord_angle_check(const PointCloud& cloud, double rch_value);

}  // namespace geomreach
