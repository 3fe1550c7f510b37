#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "geomreach/point_cloud.hpp"
#include "geomreach/shapes.hpp"

namespace geomreach {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, '.' decimal separator whatever the locale.
std::string format_double(double v);
double parse_double(const std::string& s);

// Finite values as numbers, infinity as the string "inf".
Json real_to_json(double v);
double real_from_json(const Json& j);

// Header x0..x{d-1} then t{j}_{i}: coordinate i of tangent basis vector j.
void write_points_csv(std::ostream& os, const PointCloud& cloud);
void write_points_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_points_csv(std::istream& is);
PointCloud read_points_csv(const std::string& path);

struct Manifest {
  int d = 0;
  int n = -1;
  std::size_t count = 0;
  bool has_tangents = false;
  std::optional<ShapeSpec> shape;
  std::optional<GroundTruth> ground_truth;
};

Json shape_to_json(const ShapeSpec& s);
ShapeSpec shape_from_json(const Json& j);
Json ground_truth_to_json(const GroundTruth& g);
GroundTruth ground_truth_from_json(const Json& j);
Json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const Json& j);

// points.csv -> points.manifest.json / points.ground_truth.json
std::string sibling_path(const std::string& csv_path, const std::string& suffix);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geomreach
