#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomreach/geodesics.hpp"
#include "geomreach/io.hpp"
#include "geomreach/point_cloud.hpp"
#include "geomreach/reach.hpp"

namespace geomreach {

// Check names, in report order.
const std::vector<std::string>& check_names();
// Checks run when none are requested explicitly (lemma_6_10 is opt-in).
const std::vector<std::string>& default_checks();
double default_tolerance(const std::string& check);

struct AnalysisConfig {
  GraphParams graph;                    // neither set: k = default_knn(n)
  std::vector<double> rho_grid;         // empty: {8, 4, 2} * spacing
  std::optional<double> emptiness_tol;  // default 0.5 * spacing
  std::optional<double> epsilon;        // default 0.1 * rch_loc at the patch base
  std::optional<double> alpha;          // default from epsilon, see lemma checks
  std::map<std::string, double> tolerances;
  bool estimate_tangents = false;       // replace given tangents by local PCA
  std::optional<double> rch_override;   // reach the statements are checked against
  std::vector<std::string> checks;      // empty: default_checks()
  std::size_t sweep_count = 200;        // random map pairs for lemma_6_8
  std::size_t patch_bases = 10;         // random base points for curves and patches
  std::uint64_t seed = 0;
  std::size_t report_bottlenecks = 1000;  // cap on the list in the JSON report
  // Exact intrinsic distance; replaces graph distances in the distortion
  // estimate when set.
  std::optional<std::function<double(std::size_t, std::size_t)>> intrinsic_distance;

  double tolerance(const std::string& check) const;
  void validate() const;
};

struct CheckResult {
  bool skipped = false;
  bool pass = true;
  double value = 0;
  double bound = 0;
  std::optional<Json> witness;
  std::string note;
};

struct ReachReport {
  std::size_t count = 0;
  int d = 0;
  int n = -1;
  double spacing = 0;

  double rch_federer = kInf;
  double rch_distortion = kInf;
  double rch = kInf;
  double rch_local = kInf;
  double rch_global = kInf;
  double tangent_variation_sup = 0;
  double decomposition_residual = 0;

  PairExtremum federer_pair, distortion_pair, tv_pair;
  std::size_t local_argmin = kNoIndex;
  std::vector<double> local_per_point;
  std::vector<std::pair<std::size_t, std::size_t>> bottlenecks;
  std::vector<double> bottleneck_half_lengths;
  std::size_t report_bottlenecks = 1000;
  std::vector<LocalReachCurve> curves;  // random bases, then the argmin point

  std::map<std::string, CheckResult> checks;
  Json params;
  std::vector<std::string> warnings;

  // Distortion profile from one source: (j, chord, intrinsic, radius).
  struct DistortionRow {
    std::size_t j;
    double chord, intrinsic, radius;
  };
  std::size_t distortion_source = kNoIndex;
  std::vector<DistortionRow> distortion_curve;

  bool all_pass() const;
};

// Throws std::invalid_argument when the cloud has neither tangents nor a
// declared intrinsic dimension.
ReachReport analyze(PointCloud cloud, const AnalysisConfig& config);

Json report_to_json(const ReachReport& report);
// distortion_curve.csv, local_reach_curves.csv, bottlenecks.csv
void write_plot_data(const ReachReport& report, const std::string& dir);

// Random pairs of linear maps with n, m <= max_dim.
CheckResult operator_norm_sweep(std::size_t count, std::uint64_t seed, int max_dim = 5);

}  // namespace geomreach
