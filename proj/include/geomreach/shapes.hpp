#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geomreach/point_cloud.hpp"

namespace geomreach {

enum class ShapeKind { circle, sphere, ellipse, torus, two_spheres, fillet_profile, segment, plane_patch };

ShapeKind parse_shape_kind(const std::string& name);  // accepts "fillet" and "plane" too
std::string to_string(ShapeKind kind);
bool is_curve(ShapeKind kind);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  double R = 1.0;       // circle, sphere, two_spheres radius; torus major radius
  double r = 0.5;       // torus tube radius
  double a = 2.0;       // ellipse semi-axes, a >= b
  double b = 1.0;
  double g = 0.3;       // two_spheres: half the gap between the spheres
  double rho = 0.4;     // fillet arc radius
  double length = 2.0;  // fillet leg length, segment length, plane side
  double width = 0.0;   // fillet extrusion width; 0 keeps the planar profile
  std::size_t count = 0;  // 0 means default_count(kind); per sphere for two_spheres
  std::uint64_t seed = 0;
};

std::size_t default_count(ShapeKind kind);
void validate(const ShapeSpec& spec);

struct GeneratedShape {
  PointCloud cloud;
  // Exact intrinsic distance where a closed form exists; kInf across
  // components.
  std::optional<std::function<double(std::size_t, std::size_t)>> intrinsic_distance;
};

GeneratedShape generate(const ShapeSpec& spec);

struct GroundTruth {
  double rch = 0;
  double rch_loc = 0;
  double rch_glob = 0;
  double tangent_variation_sup = 0;
};
GroundTruth analytic_ground_truth(const ShapeSpec& spec);

struct OracleOptions {
  std::vector<double> multipliers;  // empty: {2, 4, 8} for curves, {0.5, 1, 2} for surfaces
};

struct OracleReport {
  GroundTruth certified;
  GroundTruth slack;
  std::vector<std::size_t> counts;
  std::map<std::string, std::vector<double>> sequences;
};

// Brute-force estimates at three densities. Throws std::runtime_error when
// a sequence does not settle.
OracleReport ground_truth_oracle(const ShapeSpec& spec, const OracleOptions& opts = {});

}  // namespace geomreach
