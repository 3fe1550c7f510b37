#include "geomreach/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "geomreach/geodesics.hpp"

namespace geomreach {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) throw IoError("empty numeric field");
  const char* first = s.data() + b;
  const char* last = s.data() + e + 1;
  if (*first == '+') ++first;
  double v = 0;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw IoError("not a number: '" + s + "'");
  return v;
}

Json real_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw IoError("unexpected string for a real: " + s);
  }
  if (!j.is_number()) throw IoError("expected a number");
  return j.get<double>();
}

void write_points_csv(std::ostream& os, const PointCloud& cloud) {
  const int d = cloud.ambient_dim();
  const int n = cloud.has_tangents() ? cloud.intrinsic_dim() : 0;
  for (int i = 0; i < d; ++i) os << (i ? "," : "") << 'x' << i;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) os << ",t" << j << '_' << i;
  os << '\n';
  for (std::size_t r = 0; r < cloud.size(); ++r) {
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << format_double(cloud.point(r)(i));
    if (n > 0) {
      const Matrix& b = cloud.tangent(r).basis();
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) os << ',' << format_double(b(i, j));
    }
    os << '\n';
  }
}

void write_points_csv(const std::string& path, const PointCloud& cloud) {
  std::ostringstream os;
  write_points_csv(os, cloud);
  write_text_file(path, os.str());
}

namespace {
std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}
}  // namespace

PointCloud read_points_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split(line);
  int d = 0;
  while (d < static_cast<int>(header.size()) && header[static_cast<std::size_t>(d)] == "x" + std::to_string(d)) ++d;
  if (d == 0) throw IoError("CSV header must start with x0");
  const int rest = static_cast<int>(header.size()) - d;
  if (rest % d != 0) throw IoError("tangent columns are not a multiple of d");
  const int n = rest / d;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i)
      if (header[static_cast<std::size_t>(d + j * d + i)] != "t" + std::to_string(j) + "_" + std::to_string(i))
        throw IoError("unexpected tangent column name " + header[static_cast<std::size_t>(d + j * d + i)]);

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != header.size()) throw IoError("line " + std::to_string(lineno) + ": wrong field count");
    std::vector<double> row;
    for (const auto& s : f) row.push_back(parse_double(s));
    rows.push_back(std::move(row));
  }
  Matrix pts(d, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int i = 0; i < d; ++i) pts(i, static_cast<Eigen::Index>(r)) = rows[r][static_cast<std::size_t>(i)];
  PointCloud cloud(pts, n > 0 ? n : -1);
  if (n > 0) {
    std::vector<Subspace> tans;
    for (const auto& row : rows) {
      Matrix b(d, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) b(i, j) = row[static_cast<std::size_t>(d + j * d + i)];
      try {
        tans.push_back(Subspace::from_orthonormal(b));
      } catch (const std::invalid_argument&) {
        tans.push_back(Subspace::span(b));
      }
    }
    cloud.set_tangents(std::move(tans));
  }
  return cloud;
}

PointCloud read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_points_csv(in);
}

Json shape_to_json(const ShapeSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  switch (s.kind) {
    case ShapeKind::circle:
    case ShapeKind::sphere: j["R"] = s.R; break;
    case ShapeKind::ellipse:
      j["a"] = s.a;
      j["b"] = s.b;
      break;
    case ShapeKind::torus:
      j["R"] = s.R;
      j["r"] = s.r;
      break;
    case ShapeKind::two_spheres:
      j["R"] = s.R;
      j["g"] = s.g;
      break;
    case ShapeKind::fillet_profile:
      j["rho"] = s.rho;
      j["length"] = s.length;
      j["width"] = s.width;
      break;
    case ShapeKind::segment:
    case ShapeKind::plane_patch: j["length"] = s.length; break;
  }
  j["count"] = s.count == 0 ? default_count(s.kind) : s.count;
  j["seed"] = s.seed;
  return j;
}

ShapeSpec shape_from_json(const Json& j) {
  ShapeSpec s;
  s.kind = parse_shape_kind(j.at("kind").get<std::string>());
  s.R = j.value("R", s.R);
  s.r = j.value("r", s.r);
  s.a = j.value("a", s.a);
  s.b = j.value("b", s.b);
  s.g = j.value("g", s.g);
  s.rho = j.value("rho", s.rho);
  s.length = j.value("length", s.length);
  s.width = j.value("width", s.width);
  s.count = j.value("count", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

Json ground_truth_to_json(const GroundTruth& g) {
  Json j;
  j["rch"] = real_to_json(g.rch);
  j["rch_loc"] = real_to_json(g.rch_loc);
  j["rch_glob"] = real_to_json(g.rch_glob);
  j["tangent_variation_sup"] = real_to_json(g.tangent_variation_sup);
  return j;
}

GroundTruth ground_truth_from_json(const Json& j) {
  GroundTruth g;
  g.rch = real_from_json(j.at("rch"));
  g.rch_loc = real_from_json(j.at("rch_loc"));
  g.rch_glob = real_from_json(j.at("rch_glob"));
  g.tangent_variation_sup = real_from_json(j.at("tangent_variation_sup"));
  return g;
}

Json manifest_to_json(const Manifest& m) {
  Json j;
  j["d"] = m.d;
  j["n"] = m.n;
  j["count"] = m.count;
  j["has_tangents"] = m.has_tangents;
  if (m.shape) j["shape"] = shape_to_json(*m.shape);
  if (m.ground_truth) j["ground_truth"] = ground_truth_to_json(*m.ground_truth);
  return j;
}

Manifest manifest_from_json(const Json& j) {
  Manifest m;
  try {
    m.d = j.at("d").get<int>();
    m.n = j.value("n", -1);
    m.count = j.at("count").get<std::size_t>();
    m.has_tangents = j.value("has_tangents", false);
    if (j.contains("shape")) m.shape = shape_from_json(j["shape"]);
    if (j.contains("ground_truth")) m.ground_truth = ground_truth_from_json(j["ground_truth"]);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string sibling_path(const std::string& csv_path, const std::string& suffix) {
  std::string stem = csv_path;
  if (stem.size() >= 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return stem + suffix;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace geomreach
