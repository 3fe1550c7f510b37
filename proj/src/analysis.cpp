#include "geomreach/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "geomreach/errors.hpp"
#include "geomreach/graph_patch.hpp"
#include "geomreach/tangent_estimation.hpp"

namespace geomreach {

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"lemma_2_2", "theorem_2",  "theorem_3",  "lemma_7_5", "theorem_1_injectivity",
                                                 "lemma_6_6", "lemma_6_7", "lemma_6_8", "lemma_6_10"};
  return names;
}

const std::vector<std::string>& default_checks() {
  static const std::vector<std::string> names(check_names().begin(), check_names().end() - 1);
  return names;
}

double default_tolerance(const std::string& check) {
  static const std::map<std::string, double> tol = {
      {"lemma_2_2", 1e-6}, {"theorem_2", 0.05}, {"theorem_3", 0.03}, {"lemma_7_5", 1e-6}, {"lemma_6_8", 1e-12}};
  auto it = tol.find(check);
  if (it == tol.end()) throw std::invalid_argument("check '" + check + "' takes no tolerance");
  return it->second;
}

double AnalysisConfig::tolerance(const std::string& check) const {
  auto it = tolerances.find(check);
  return it == tolerances.end() ? default_tolerance(check) : it->second;
}

void AnalysisConfig::validate() const {
  for (const auto& [name, v] : tolerances) {
    default_tolerance(name);
    if (!(v > 0)) throw std::invalid_argument("tolerance for " + name + " must be positive");
  }
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0)) throw std::invalid_argument("rho grid entries must be positive");
    if (i > 0 && !(rho_grid[i] < rho_grid[i - 1])) throw std::invalid_argument("rho grid must be strictly decreasing");
  }
  if (emptiness_tol && !(*emptiness_tol >= 0)) throw std::invalid_argument("emptiness tolerance must be >= 0");
  if (epsilon && !(*epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (alpha && !(*alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (rch_override && !(*rch_override > 0)) throw std::invalid_argument("reach override must be positive");
  for (const auto& c : checks)
    if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
      throw std::invalid_argument("unknown check '" + c + "'");
}

bool ReachReport::all_pass() const {
  for (const auto& [name, c] : checks)
    if (!c.skipped && !c.pass) return false;
  return true;
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double bbox_diagonal(const PointCloud& cloud) {
  if (cloud.size() == 0) return 0;
  Vector lo = cloud.points().rowwise().minCoeff();
  Vector hi = cloud.points().rowwise().maxCoeff();
  return (hi - lo).norm();
}

Json pair_json(std::size_t i, std::size_t j) {
  if (i == kNoIndex || j == kNoIndex) return nullptr;
  return Json::array({i, j});
}

CheckResult skipped(const std::string& why) {
  CheckResult c;
  c.skipped = true;
  c.note = why;
  return c;
}

std::vector<std::size_t> pick_bases(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> out;
  count = std::min(count, n);
  while (out.size() < count) {
    std::size_t i = static_cast<std::size_t>(rng() % n);
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

// Everything the patch checks share: one patch at the worst local point.
struct PatchSetup {
  bool ok = false;
  std::string why;
  GraphPatch patch;
  double rch_loc = 0;
  double epsilon = 0;
  double alpha = 0;
};

PatchSetup make_patch_setup(const PointCloud& cloud, const ReachReport& rep, const AnalysisConfig& cfg,
                            double rch_check, bool given_tangents) {
  PatchSetup s;
  if (rep.n < 1 || rep.n >= rep.d) {
    s.why = "patch checks need 1 <= n < d";
    return s;
  }
  const std::size_t p = rep.local_argmin == kNoIndex ? 0 : rep.local_argmin;
  double R = rep.local_per_point.empty() ? kInf : rep.local_per_point[p];
  // Flat neighbourhoods: the cloud's extent stands in for the infinite scale.
  if (!std::isfinite(R)) R = bbox_diagonal(cloud);
  s.rch_loc = R;
  s.epsilon = cfg.epsilon.value_or(0.1 * R);
  if (!(s.epsilon < R)) {
    s.why = "epsilon must be below the local reach at the patch base";
    return s;
  }
  s.alpha = cfg.alpha.value_or(alpha_sphere_exact(s.epsilon, R));
  const double extract_R = std::min(R, rch_check);
  s.patch = extract_patch(cloud, p, extract_R);
  s.patch.epsilon = s.epsilon;
  s.patch.alpha = std::min(s.alpha, extract_R);
  if (given_tangents)
    derivatives_from_tangents(s.patch, cloud);
  else
    fit_derivatives(s.patch);
  s.ok = true;
  return s;
}

}  // namespace

CheckResult operator_norm_sweep(std::size_t count, std::uint64_t seed, int max_dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CheckResult c;
  c.value = -kInf;
  c.bound = 1e-12;
  std::size_t failures = 0;
  for (std::size_t t = 0; t < count; ++t) {
    int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim));
    int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_dim));
    LinearMap f1(m, n), f2(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) f1(i, j) = normal(rng);
    // A quarter of the pairs are near-equal, where both sides are small.
    double scale = (t % 4 == 0) ? 1e-6 * unit_uniform(rng) : 1.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) f2(i, j) = f1(i, j) + scale * normal(rng);
    auto r = operator_norm_angle_bound(f1, f2);
    double gap = r.lhs - r.rhs;
    if (gap > c.value) {
      c.value = gap;
      c.witness = Json{{"trial", t}, {"n", n}, {"m", m}, {"lhs", r.lhs}, {"rhs", r.rhs}};
    }
    if (!r.pass) ++failures;
  }
  c.pass = failures == 0;
  c.note = std::to_string(failures) + " failures in " + std::to_string(count) + " random pairs";
  return c;
}

ReachReport analyze(PointCloud cloud, const AnalysisConfig& cfg) {
  cfg.validate();
  ReachReport rep;
  rep.count = cloud.size();
  rep.d = cloud.ambient_dim();
  if (cloud.size() < 2) throw std::invalid_argument("need at least two points");

  const bool had_tangents = cloud.has_tangents();
  if (!had_tangents && cloud.intrinsic_dim() < 1)
    throw std::invalid_argument("cloud has no tangents and no declared intrinsic dimension");
  bool estimated = false;
  if (cfg.estimate_tangents || !had_tangents) {
    if (cloud.intrinsic_dim() < 1) throw std::invalid_argument("tangent estimation needs the intrinsic dimension");
    cloud.set_tangents(estimate_tangents(cloud, cloud.intrinsic_dim()));
    estimated = true;
    rep.warnings.push_back("tangents estimated by local PCA; tangent-dependent quantities are estimated-frame");
  }
  rep.n = cloud.intrinsic_dim();
  const bool given_tangents = !estimated;

  rep.spacing = sample_spacing(cloud);
  GeodesicGraph graph = build_graph(cloud, cfg.graph);
  if (graph.component_count() > 1)
    rep.warnings.push_back("neighbourhood graph has " + std::to_string(graph.component_count()) +
                           " components; distortion is analysed per component and capped by the global reach");

  rep.federer_pair = federer_reach(cloud);
  rep.rch_federer = rep.federer_pair.value;

  rep.distortion_pair = cfg.intrinsic_distance ? distortion_reach(cloud, *cfg.intrinsic_distance)
                                               : distortion_reach(cloud, graph);

  GlobalReachOptions gopt = default_global_options(rep.spacing);
  if (cfg.emptiness_tol) gopt.emptiness_tol = *cfg.emptiness_tol;
  GlobalReachResult glob = global_reach(cloud, gopt);
  rep.rch_global = glob.value;
  rep.bottlenecks = glob.bottlenecks;
  for (const auto& [i, j] : rep.bottlenecks) rep.bottleneck_half_lengths.push_back(0.5 * (cloud.point(i) - cloud.point(j)).norm());
  rep.report_bottlenecks = cfg.report_bottlenecks;

  rep.rch_distortion = rep.distortion_pair.value;
  if (graph.component_count() > 1) rep.rch_distortion = std::min(rep.rch_distortion, rep.rch_global);

  LocalReachOptions lopt = default_local_options(cloud, rep.spacing);
  if (!cfg.rho_grid.empty()) lopt.rho_grid = cfg.rho_grid;
  if (cfg.intrinsic_distance) lopt.use_distortion = lopt.use_distortion || rep.n <= 1;
  LocalReachResult loc = local_reach(cloud, graph, lopt);
  rep.rch_local = loc.value;
  rep.local_argmin = loc.argmin;
  rep.local_per_point = loc.per_point;

  const bool distortion_in_rch = rep.n <= 1 || !given_tangents || cfg.intrinsic_distance.has_value();
  rep.rch = distortion_in_rch ? std::min(rep.rch_federer, rep.rch_distortion) : rep.rch_federer;
  if (!distortion_in_rch && rep.rch_distortion < rep.rch_federer)
    rep.warnings.push_back("rch_distortion is left out of rch: graph paths on surfaces zigzag and bias it low");
  rep.decomposition_residual = decomposition_residual(rep.rch, rep.rch_global, rep.rch_local);
  if (std::isfinite(rep.rch) && rep.rch_local * 1.01 < rep.rch)
    rep.warnings.push_back("rch_local is below rch by more than 1%");

  rep.tv_pair = tangent_variation_sup(cloud, graph);
  rep.tangent_variation_sup = rep.tv_pair.value;

  // Local reach curves at random bases and at the worst point.
  std::vector<std::size_t> bases = pick_bases(cloud.size(), cfg.patch_bases, cfg.seed);
  std::vector<std::size_t> curve_points = bases;
  if (loc.argmin != kNoIndex && std::find(bases.begin(), bases.end(), loc.argmin) == bases.end())
    curve_points.push_back(loc.argmin);
  for (auto p : curve_points) {
    rep.curves.push_back(local_reach_at(cloud, p, graph, lopt));
    if (!rep.curves.back().monotone)
      rep.warnings.push_back("local reach curve at point " + std::to_string(p) + " is not monotone within " +
                             format_double(lopt.monotone_slack * 100) + "%");
  }

  // Distortion profile from the worst pair's first point.
  rep.distortion_source = rep.distortion_pair.i != kNoIndex ? rep.distortion_pair.i : 0;
  {
    const std::size_t src = rep.distortion_source;
    std::vector<double> ell(cloud.size(), kInf);
    if (cfg.intrinsic_distance) {
      for (std::size_t j = 0; j < cloud.size(); ++j) ell[j] = (*cfg.intrinsic_distance)(src, j);
    } else {
      ell = distances_from(graph, src);
    }
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      if (j == src || !std::isfinite(ell[j])) continue;
      double h = (cloud.point(j) - cloud.point(src)).norm();
      double r = std::numeric_limits<double>::quiet_NaN();
      try {
        r = distortion_radius_info(h, ell[j]).r;
      } catch (const std::exception&) {
      }
      rep.distortion_curve.push_back({j, h, ell[j], r});
    }
  }

  // Checks.
  const double rch_check = cfg.rch_override.value_or(rep.rch);
  std::vector<std::string> wanted = cfg.checks.empty() ? default_checks() : cfg.checks;
  auto want = [&](const std::string& name) { return std::find(wanted.begin(), wanted.end(), name) != wanted.end(); };

  if (want("lemma_2_2")) {
    CheckResult c;
    auto r = chord_angle_check(cloud, rch_check);
    c.value = r.pairs ? r.max_excess : 0.0;
    c.bound = cfg.tolerance("lemma_2_2");
    c.pass = c.value <= c.bound;
    if (r.pairs) c.witness = Json{{"pair", pair_json(r.i, r.j)}, {"pairs_checked", r.pairs}, {"max_abs_gap", r.max_abs_gap}};
    rep.checks["lemma_2_2"] = c;
  }

  if (want("theorem_2")) {
    CheckResult c;
    const double tol = cfg.tolerance("theorem_2");
    if (std::isfinite(rep.rch_local)) {
      c.value = rep.tangent_variation_sup * rep.rch_local;
      c.bound = 1.0;
      c.pass = std::abs(c.value - 1.0) <= tol;
      c.note = "tangent_variation_sup * rch_local within tolerance of 1";
    } else {
      c.value = rep.tangent_variation_sup * bbox_diagonal(cloud);
      c.bound = tol;
      c.pass = c.value <= tol;
      c.note = "rch_local infinite: tangent_variation_sup * extent must vanish";
    }
    c.witness = Json{{"pair", pair_json(rep.tv_pair.i, rep.tv_pair.j)}, {"tolerance", tol}};
    rep.checks["theorem_2"] = c;
  }

  if (want("theorem_3")) {
    CheckResult c;
    c.value = rep.decomposition_residual;
    c.bound = cfg.tolerance("theorem_3");
    c.pass = c.value <= c.bound;
    rep.checks["theorem_3"] = c;
  }

  if (want("lemma_7_5")) {
    CheckResult c;
    const double tol = cfg.tolerance("lemma_7_5");
    const std::size_t src = loc.argmin == kNoIndex ? 0 : loc.argmin;
    const double cutoff = std::numbers::pi * rch_check;
    std::vector<double> dist = distances_from(graph, src, cutoff);
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < dist.size(); ++j)
      if (j != src && dist[j] <= cutoff) targets.push_back(j);
    const std::size_t max_targets = 32;
    if (targets.size() > max_targets) {
      std::vector<std::size_t> thin;
      for (std::size_t k = 0; k < max_targets; ++k) thin.push_back(targets[k * targets.size() / max_targets]);
      targets = thin;
    }
    std::size_t held = 0;
    c.value = kInf;
    c.bound = -tol;
    for (auto t : targets) {
      auto path = shortest_path(graph, src, t);
      if (path.path.vertex_count() < 2) continue;
      ChordBoundVerdict v;
      try {
        v = chord_bound_check(path.path, rch_check, {1e-3, tol});
      } catch (const HypothesisError&) {
        continue;
      }
      if (!v.hypothesis_holds) continue;
      ++held;
      if (v.min_slack < c.value) {
        c.value = v.min_slack;
        c.witness = Json{{"source", src}, {"target", t},
                         {"pair", pair_json(path.path.nodes[v.slack_i], path.path.nodes[v.slack_j])}};
      }
      if (!v.consistent()) c.pass = false;
    }
    c.note = std::to_string(held) + " of " + std::to_string(targets.size()) + " geodesics satisfy the curvature hypothesis";
    // Nothing tested: report that rather than a vacuous pass.
    if (held == 0) c = skipped(c.note);
    rep.checks["lemma_7_5"] = c;
  }

  if (want("theorem_1_injectivity")) {
    CheckResult c;
    if (rep.n < 1 || rep.n >= rep.d) {
      c = skipped("injectivity needs 1 <= n < d");
    } else {
      std::vector<std::size_t> pts = curve_points;
      std::size_t violations = 0;
      for (auto p : pts) {
        double R = std::min(rch_check, rep.local_per_point[p]);
        if (!std::isfinite(R)) R = bbox_diagonal(cloud);
        try {
          GraphPatch patch = extract_patch(cloud, p, R);
          if (!patch.pythagoras_violations.empty()) {
            violations += patch.pythagoras_violations.size();
            if (!c.witness)
              c.witness = Json{{"base", p}, {"pythagoras", patch.indices[patch.pythagoras_violations.front()]}};
          }
        } catch (const InjectivityError& e) {
          ++violations;
          if (!c.witness) c.witness = Json{{"base", p}, {"pair", pair_json(e.first, e.second)}, {"message", e.what()}};
        }
      }
      c.value = static_cast<double>(violations);
      c.bound = 0;
      c.pass = violations == 0;
      c.note = std::to_string(pts.size()) + " base points";
    }
    rep.checks["theorem_1_injectivity"] = c;
  }

  const bool need_patch = want("lemma_6_6") || want("lemma_6_7") || want("lemma_6_8") || want("lemma_6_10");
  PatchSetup ps;
  if (need_patch) {
    try {
      ps = make_patch_setup(cloud, rep, cfg, rch_check, given_tangents);
    } catch (const std::exception& e) {
      ps.ok = false;
      ps.why = e.what();
    }
  }

  if (want("lemma_6_6")) {
    if (!ps.ok) {
      rep.checks["lemma_6_6"] = skipped(ps.why);
    } else {
      CheckResult c;
      SemiconvexityOptions so;
      so.seed = cfg.seed;
      auto verdicts = semiconvexity_check(ps.patch, ps.rch_loc - ps.epsilon, default_normal_directions(ps.patch, cfg.seed), so);
      c.value = -kInf;
      for (const auto& v : verdicts) {
        double excess = std::max(v.midpoint_defect, v.first_order_defect) - v.slack;
        if (excess > c.value) {
          c.value = excess;
          c.witness = Json{{"base", ps.patch.base_index},
                           {"midpoint_pair", pair_json(ps.patch.indices[v.mid_i], ps.patch.indices[v.mid_j])},
                           {"first_order_pair", pair_json(ps.patch.indices[v.fo_i], ps.patch.indices[v.fo_j])},
                           {"midpoint_defect", v.midpoint_defect},
                           {"first_order_defect", v.first_order_defect},
                           {"slack", v.slack}};
        }
        if (!v.pass()) c.pass = false;
      }
      c.bound = 0;
      c.note = "worst defect minus slack over " + std::to_string(verdicts.size()) + " normal directions";
      rep.checks["lemma_6_6"] = c;
    }
  }

  auto lipschitz_check = [&](double alpha) {
    CheckResult c;
    GraphPatch patch = ps.patch;
    patch.alpha = alpha;
    try {
      auto r = lipschitz_derivative_constant(patch, ps.rch_loc);
      c.value = r.constant;
      c.bound = r.bound;
      c.pass = r.pass;
      c.witness = Json{{"base", patch.base_index},
                       {"pair", pair_json(patch.indices[r.i], patch.indices[r.j])},
                       {"alpha", alpha},
                       {"samples", r.samples},
                       {"relative_tolerance", r.tolerance}};
    } catch (const std::exception& e) {
      c = skipped(e.what());
    }
    return c;
  };

  if (want("lemma_6_7")) rep.checks["lemma_6_7"] = ps.ok ? lipschitz_check(ps.patch.alpha) : skipped(ps.why);

  if (want("lemma_6_10")) {
    if (!ps.ok) {
      rep.checks["lemma_6_10"] = skipped(ps.why);
    } else {
      try {
        double a = alpha_bound(ps.epsilon, ps.rch_loc);
        rep.checks["lemma_6_10"] = lipschitz_check(a);
      } catch (const HypothesisError& e) {
        rep.checks["lemma_6_10"] = skipped(e.what());
      }
    }
  }

  if (want("lemma_6_8")) {
    CheckResult c = operator_norm_sweep(cfg.sweep_count, cfg.seed);
    c.bound = cfg.tolerance("lemma_6_8");
    std::size_t failures = c.pass ? 0 : 1;
    if (ps.ok) {
      const std::size_t m = std::min<std::size_t>(ps.patch.derivatives.size(), 64);
      std::size_t pairs = 0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
          auto r = operator_norm_angle_bound(ps.patch.derivatives[i], ps.patch.derivatives[j]);
          ++pairs;
          if (r.lhs - r.rhs > c.value) {
            c.value = r.lhs - r.rhs;
            c.witness = Json{{"patch_pair", pair_json(ps.patch.indices[i], ps.patch.indices[j])}, {"lhs", r.lhs}, {"rhs", r.rhs}};
          }
          if (!(r.lhs <= r.rhs + c.bound)) ++failures;
        }
      c.note += "; " + std::to_string(pairs) + " patch derivative pairs";
    }
    c.pass = failures == 0 && c.value <= c.bound;
    rep.checks["lemma_6_8"] = c;
  }

  // Settings.
  Json& P = rep.params;
  P["count"] = rep.count;
  P["d"] = rep.d;
  P["n"] = rep.n;
  Json g;
  if (graph.params().k) g["k"] = *graph.params().k;
  if (graph.params().radius) g["radius"] = *graph.params().radius;
  g["components"] = graph.component_count();
  P["graph"] = g;
  P["spacing"] = rep.spacing;
  P["rho_grid"] = lopt.rho_grid;
  P["local_uses_federer"] = lopt.use_federer;
  P["local_uses_distortion"] = lopt.use_distortion;
  P["monotone_slack"] = lopt.monotone_slack;
  P["emptiness_tol"] = gopt.emptiness_tol;
  P["bottleneck_resolution"] = gopt.resolution;
  P["bottleneck_count"] = rep.bottlenecks.size();
  P["tangent_frames"] = estimated ? "estimated-frame" : "given";
  P["distortion_distances"] = cfg.intrinsic_distance ? "intrinsic" : "graph";
  P["distortion_in_rch"] = distortion_in_rch;
  P["rch_checked"] = real_to_json(rch_check);
  P["local_argmin"] = loc.argmin == kNoIndex ? Json(nullptr) : Json(loc.argmin);
  if (ps.ok) {
    P["patch"] = Json{{"base", ps.patch.base_index},
                      {"rch_local", ps.rch_loc},
                      {"epsilon", ps.epsilon},
                      {"alpha", ps.patch.alpha},
                      {"radius", ps.patch.radius_R},
                      {"samples", ps.patch.size()},
                      {"derivatives", given_tangents ? "tangents" : "least-squares"}};
  }
  Json tols;
  for (const auto& name : check_names())
    if (name == "lemma_2_2" || name == "theorem_2" || name == "theorem_3" || name == "lemma_7_5" || name == "lemma_6_8")
      tols[name] = cfg.tolerance(name);
  P["tolerances"] = tols;
  P["checks"] = wanted;
  P["lemma_6_8_sweep"] = cfg.sweep_count;
  P["seed"] = cfg.seed;
  return rep;
}

Json report_to_json(const ReachReport& r) {
  Json j;
  j["rch_federer"] = real_to_json(r.rch_federer);
  j["rch_distortion"] = real_to_json(r.rch_distortion);
  j["rch"] = real_to_json(r.rch);
  j["rch_local"] = real_to_json(r.rch_local);
  j["rch_global"] = real_to_json(r.rch_global);
  Json b = Json::array();
  for (std::size_t k = 0; k < r.bottlenecks.size() && k < r.report_bottlenecks; ++k)
    b.push_back(Json::array({r.bottlenecks[k].first, r.bottlenecks[k].second}));
  j["bottlenecks"] = b;
  j["tangent_variation_sup"] = real_to_json(r.tangent_variation_sup);
  j["decomposition_residual"] = real_to_json(r.decomposition_residual);
  j["witness_pairs"] = Json{{"federer", pair_json(r.federer_pair.i, r.federer_pair.j)},
                            {"distortion", pair_json(r.distortion_pair.i, r.distortion_pair.j)},
                            {"tangent_variation", pair_json(r.tv_pair.i, r.tv_pair.j)}};
  Json per = Json::array();
  for (double v : r.local_per_point) per.push_back(real_to_json(v));
  j["rch_local_per_point"] = per;
  Json checks = Json::object();
  for (const auto& name : check_names()) {
    auto it = r.checks.find(name);
    if (it == r.checks.end()) continue;
    const CheckResult& c = it->second;
    Json cj;
    if (c.skipped) {
      cj["pass"] = nullptr;
      cj["skipped"] = true;
    } else {
      cj["pass"] = c.pass;
      cj["value"] = real_to_json(c.value);
      cj["bound"] = real_to_json(c.bound);
      if (c.witness) cj["witness"] = *c.witness;
    }
    if (!c.note.empty()) cj["note"] = c.note;
    checks[name] = cj;
  }
  j["checks"] = checks;
  j["params"] = r.params;
  j["warnings"] = r.warnings;
  return j;
}

void write_plot_data(const ReachReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::isnan(v) ? std::string("nan") : std::string(v > 0 ? "inf" : "-inf"); };
  {
    std::ostringstream os;
    os << "source,j,chord,intrinsic,radius\n";
    for (const auto& row : r.distortion_curve)
      os << r.distortion_source << ',' << row.j << ',' << num(row.chord) << ',' << num(row.intrinsic) << ','
         << num(row.radius) << '\n';
    write_text_file(dir + "/distortion_curve.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "point,rho,count,usable,value\n";
    for (const auto& c : r.curves)
      for (std::size_t k = 0; k < c.rho.size(); ++k)
        os << c.point << ',' << num(c.rho[k]) << ',' << c.count[k] << ',' << (c.usable[k] ? 1 : 0) << ','
           << num(c.value[k]) << '\n';
    write_text_file(dir + "/local_reach_curves.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "i,j,half_length\n";
    for (std::size_t k = 0; k < r.bottlenecks.size(); ++k)
      os << r.bottlenecks[k].first << ',' << r.bottlenecks[k].second << ',' << num(r.bottleneck_half_lengths[k]) << '\n';
    write_text_file(dir + "/bottlenecks.csv", os.str());
  }
}

}  // namespace geomreach
