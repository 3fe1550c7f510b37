// geomreach: generate shapes, analyse point clouds, verify reach statements.
// Exit codes: 0 pass, 1 verification failure, 2 usage or I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geomreach/analysis.hpp"
#include "geomreach/errors.hpp"
#include "geomreach/io.hpp"
#include "geomreach/shapes.hpp"

using namespace geomreach;

namespace {

struct ShapeArgs {
  std::string shape;
  ShapeSpec spec;
  std::string out;
  bool certify = false;
};

struct AnalyzeArgs {
  std::string input;
  int intrinsic_dim = -1;
  std::optional<int> knn;
  std::optional<double> radius;
  std::vector<double> rho_grid;
  std::optional<double> emptiness_tol, epsilon, alpha, rch;
  std::map<std::string, double> tol;
  std::string report;
  std::string plots_dir;
  bool estimate_tangents = false;
  std::vector<std::string> checks;
  std::optional<std::size_t> sweep;
  std::uint64_t seed = 0;
};

void add_shape_options(CLI::App* cmd, ShapeArgs& a) {
  cmd->add_option("--shape", a.shape, "circle, sphere, ellipse, torus, two_spheres, fillet, segment, plane")->required();
  cmd->add_option("--R", a.spec.R, "radius; torus major radius");
  cmd->add_option("--r", a.spec.r, "torus tube radius");
  cmd->add_option("--a", a.spec.a, "ellipse semi-major axis");
  cmd->add_option("--b", a.spec.b, "ellipse semi-minor axis");
  cmd->add_option("--g", a.spec.g, "two_spheres half gap");
  cmd->add_option("--rho", a.spec.rho, "fillet arc radius");
  cmd->add_option("--length", a.spec.length, "fillet leg, segment or plane side length");
  cmd->add_option("--width", a.spec.width, "fillet extrusion width (0: planar profile)");
  cmd->add_option("--n", a.spec.count, "sample count (per sphere for two_spheres)");
  cmd->add_option("--seed", a.spec.seed, "sampling seed");
  cmd->add_option("-o,--output", a.out, "points CSV path (default <shape>.csv)");
  cmd->add_flag("--certify", a.certify, "run the brute-force oracle and write <stem>.ground_truth.json");
}

void add_analysis_options(CLI::App* cmd, AnalyzeArgs& a) {
  cmd->add_option("input", a.input, "points CSV");
  cmd->add_option("--intrinsic-dim", a.intrinsic_dim, "intrinsic dimension when no manifest is present");
  auto* k = cmd->add_option("--knn", a.knn, "k-NN graph");
  auto* r = cmd->add_option("--radius", a.radius, "radius graph");
  k->excludes(r);
  cmd->add_option("--rho-grid", a.rho_grid, "strictly decreasing ball radii")->delimiter(',');
  cmd->add_option("--emptiness-tol", a.emptiness_tol, "bottleneck emptiness tolerance");
  cmd->add_option("--epsilon", a.epsilon, "epsilon for the patch checks");
  cmd->add_option("--alpha", a.alpha, "tangent radius for the patch checks");
  cmd->add_option("--rch", a.rch, "reach the statements are checked against (default: estimate)");
  for (const char* name : {"lemma_2_2", "theorem_2", "theorem_3", "lemma_7_5", "lemma_6_8"}) {
    std::string flag = std::string("--tol-") + name;
    std::replace(flag.begin() + 6, flag.end(), '_', '-');
    std::string key = name;
    cmd->add_option_function<double>(flag, [&a, key](double v) { a.tol[key] = v; }, "tolerance for " + key);
  }
  cmd->add_option("--report", a.report, "report JSON path (default stdout)");
  cmd->add_option("--plots-dir", a.plots_dir, "directory for plot CSVs");
  cmd->add_flag("--estimate-tangents", a.estimate_tangents, "estimate tangents by local PCA");
  cmd->add_option("--check", a.checks, "checks to run (repeatable)");
  cmd->add_option("--sweep", a.sweep, "random map pairs for the operator-norm check");
  cmd->add_option("--seed", a.seed, "seed for random bases and sweeps");
}

int cmd_gen(const ShapeArgs& a) {
  ShapeSpec spec = a.spec;
  spec.kind = parse_shape_kind(a.shape);
  validate(spec);
  std::string out = a.out.empty() ? to_string(spec.kind) + ".csv" : a.out;
  GeneratedShape g = generate(spec);
  write_points_csv(out, g.cloud);

  Manifest m;
  m.d = g.cloud.ambient_dim();
  m.n = g.cloud.intrinsic_dim();
  m.count = g.cloud.size();
  m.has_tangents = g.cloud.has_tangents();
  m.shape = spec;
  m.ground_truth = analytic_ground_truth(spec);
  if (a.certify) {
    OracleReport rep;
    try {
      rep = ground_truth_oracle(spec);
    } catch (const std::runtime_error& e) {
      std::cerr << "certification refused: " << e.what() << '\n';
      write_text_file(sibling_path(out, ".manifest.json"), manifest_to_json(m).dump(2) + "\n");
      return 1;
    }
    m.ground_truth = rep.certified;
    Json gt;
    gt["certified"] = ground_truth_to_json(rep.certified);
    gt["slack"] = ground_truth_to_json(rep.slack);
    gt["analytic"] = ground_truth_to_json(analytic_ground_truth(spec));
    gt["counts"] = rep.counts;
    Json seq;
    for (const auto& [k, v] : rep.sequences) {
      Json s = Json::array();
      for (double x : v) s.push_back(real_to_json(x));
      seq[k] = s;
    }
    gt["sequences"] = seq;
    write_text_file(sibling_path(out, ".ground_truth.json"), gt.dump(2) + "\n");
  }
  write_text_file(sibling_path(out, ".manifest.json"), manifest_to_json(m).dump(2) + "\n");
  return 0;
}

AnalysisConfig make_config(const AnalyzeArgs& a) {
  AnalysisConfig c;
  if (a.knn) c.graph.k = *a.knn;
  if (a.radius) c.graph.radius = *a.radius;
  c.rho_grid = a.rho_grid;
  c.emptiness_tol = a.emptiness_tol;
  c.epsilon = a.epsilon;
  c.alpha = a.alpha;
  c.rch_override = a.rch;
  c.tolerances = a.tol;
  c.estimate_tangents = a.estimate_tangents;
  c.checks = a.checks;
  if (a.sweep) c.sweep_count = *a.sweep;
  c.seed = a.seed;
  return c;
}

PointCloud load_input(const AnalyzeArgs& a) {
  if (a.input.empty()) throw CLI::ValidationError("input", "a points CSV is required");
  PointCloud cloud = read_points_csv(a.input);
  std::string mpath = sibling_path(a.input, ".manifest.json");
  if (std::filesystem::exists(mpath)) {
    Manifest m = manifest_from_json(read_json_file(mpath));
    if (m.d != cloud.ambient_dim() || m.count != cloud.size())
      throw IoError("manifest " + mpath + " does not match the CSV");
    if (m.n > 0) cloud.set_intrinsic_dim(m.n);
  }
  if (a.intrinsic_dim > 0) cloud.set_intrinsic_dim(a.intrinsic_dim);
  return cloud;
}

void emit(const std::string& path, const Json& j) {
  if (path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_text_file(path, j.dump(2) + "\n");
}

int cmd_analyze(const AnalyzeArgs& a) {
  PointCloud cloud = load_input(a);
  ReachReport rep = analyze(std::move(cloud), make_config(a));
  emit(a.report, report_to_json(rep));
  if (!a.plots_dir.empty()) write_plot_data(rep, a.plots_dir);
  return 0;
}

std::string cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int cmd_verify(const AnalyzeArgs& a) {
  // Sweep-only mode: no input needed.
  if (a.input.empty() && a.sweep) {
    CheckResult c = operator_norm_sweep(*a.sweep, a.seed);
    std::printf("%-24s %-5s value=%s bound=%s  %s\n", "lemma_6_8", c.pass ? "PASS" : "FAIL", cell(c.value).c_str(),
                cell(c.bound).c_str(), c.note.c_str());
    Json j;
    j["checks"]["lemma_6_8"] = Json{{"pass", c.pass}, {"value", real_to_json(c.value)}, {"bound", c.bound}, {"note", c.note}};
    if (c.witness) j["checks"]["lemma_6_8"]["witness"] = *c.witness;
    j["pass"] = c.pass;
    if (!a.report.empty()) write_text_file(a.report, j.dump(2) + "\n");
    return c.pass ? 0 : 1;
  }
  PointCloud cloud = load_input(a);
  ReachReport rep = analyze(std::move(cloud), make_config(a));
  for (const auto& name : check_names()) {
    auto it = rep.checks.find(name);
    if (it == rep.checks.end()) continue;
    const CheckResult& c = it->second;
    if (c.skipped) {
      std::printf("%-24s SKIP  %s\n", name.c_str(), c.note.c_str());
      continue;
    }
    std::printf("%-24s %-5s value=%s bound=%s", name.c_str(), c.pass ? "PASS" : "FAIL", cell(c.value).c_str(),
                cell(c.bound).c_str());
    if (!c.pass && c.witness) std::printf("  witness=%s", c.witness->dump().c_str());
    std::printf("\n");
  }
  Json j = report_to_json(rep);
  j["pass"] = rep.all_pass();
  if (!a.report.empty()) write_text_file(a.report, j.dump(2) + "\n");
  if (!a.plots_dir.empty()) write_plot_data(rep, a.plots_dir);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reach estimation and verification for point clouds"};
  app.require_subcommand(1);
  ShapeArgs gen_args;
  AnalyzeArgs an_args, ver_args;
  auto* gen = app.add_subcommand("gen", "generate a shape sample");
  add_shape_options(gen, gen_args);
  auto* an = app.add_subcommand("analyze", "estimate reach quantities");
  add_analysis_options(an, an_args);
  auto* ver = app.add_subcommand("verify", "check reach statements; exit 1 on failure");
  add_analysis_options(ver, ver_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_args);
    if (an->parsed()) return cmd_analyze(an_args);
    return cmd_verify(ver_args);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
