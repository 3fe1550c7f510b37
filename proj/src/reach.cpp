#include "geomreach/reach.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "geomreach/errors.hpp"
#include "geomreach/parallel.hpp"

namespace geomreach {

namespace {

constexpr double kFlatRel = 1e-12;

bool pair_less(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
  return i1 < i2 || (i1 == i2 && j1 < j2);
}

void offer_min(PairExtremum& e, double v, std::size_t i, std::size_t j) {
  if (v < e.value || (v == e.value && v < kInf && pair_less(i, j, e.i, e.j))) e = {v, i, j};
}

PairExtremum min_of(const PairExtremum& a, const PairExtremum& b) {
  PairExtremum r = a;
  offer_min(r, b.value, b.i, b.j);
  return r;
}

void offer_max(PairExtremum& e, double v, std::size_t i, std::size_t j) {
  if (v > e.value || (v == e.value && pair_less(i, j, e.i, e.j))) e = {v, i, j};
}

void atomic_min(std::atomic<double>& a, double v) {
  double cur = a.load();
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

void atomic_max(std::atomic<double>& a, double v) {
  double cur = a.load();
  while (v > cur && !a.compare_exchange_weak(cur, v)) {
  }
}

const double* col(const Matrix& m, std::size_t i) { return m.data() + i * static_cast<std::size_t>(m.rows()); }

double dist2(const double* a, const double* b, int d) {
  double s = 0;
  for (int c = 0; c < d; ++c) {
    double t = a[c] - b[c];
    s += t * t;
  }
  return s;
}

// Squared norm of the component of v normal to the frame (n vectors of d).
double normal_part2(const double* v, const double* frame, int n, int d, double* work) {
  for (int c = 0; c < d; ++c) work[c] = v[c];
  for (int k = 0; k < n; ++k) {
    const double* t = frame + k * d;
    double dot = 0;
    for (int c = 0; c < d; ++c) dot += v[c] * t[c];
    for (int c = 0; c < d; ++c) work[c] -= dot * t[c];
  }
  double s = 0;
  for (int c = 0; c < d; ++c) s += work[c] * work[c];
  return s;
}

// arcsin(u)/u - 1, accurate for small u.
double asin_ratio_m1(double u) {
  if (u < 1e-3) {
    double u2 = u * u;
    return u2 / 6 + 3 * u2 * u2 / 40 + 5 * u2 * u2 * u2 / 112;
  }
  return std::asin(u) / u - 1;
}

// Whether the pair (h, ell) can give a distortion radius <= bound.
bool distortion_may_beat(double h, double ell, double bound) {
  if (!(bound < kInf)) return true;
  double u0 = h / (2 * bound);
  if (u0 > 1) return false;
  return asin_ratio_m1(u0) <= (ell - h) / h;
}

}  // namespace

double sample_spacing(const PointCloud& cloud) {
  if (cloud.size() < 2) return 0.0;
  KdTree tree(cloud.points());
  std::vector<double> nn(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    nn[i] = tree.knn(col(cloud.points(), i), 1, i).front().first;
  });
  return *std::max_element(nn.begin(), nn.end());
}

PairExtremum federer_reach(const PointCloud& cloud) {
  const std::size_t N = cloud.size();
  if (N < 2) throw std::invalid_argument("federer reach needs at least two points");
  const PackedFrames frames = pack_tangents(cloud);
  const int d = frames.d, n = frames.n;
  const Matrix& X = cloud.points();
  return parallel_reduce(
      N, PairExtremum{},
      [&](std::size_t b, std::size_t e) {
        PairExtremum best;
        std::vector<double> v(static_cast<std::size_t>(d)), work(static_cast<std::size_t>(d));
        for (std::size_t p = b; p < e; ++p) {
          const double* P = col(X, p);
          const double* T = frames.frame(p);
          for (std::size_t q = 0; q < N; ++q) {
            if (q == p) continue;
            const double* Q = col(X, q);
            double vv = 0;
            for (int c = 0; c < d; ++c) {
              v[c] = Q[c] - P[c];
              vv += v[c] * v[c];
            }
            if (vv == 0) continue;
            double rr = normal_part2(v.data(), T, n, d, work.data());
            if (rr <= kFlatRel * kFlatRel * vv) continue;
            offer_min(best, vv / (2 * std::sqrt(rr)), p, q);
          }
        }
        return best;
      },
      min_of);
}

DistortionRadius distortion_radius_info(double h, double ell) {
  if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("chord length must be positive and finite");
  if (std::isnan(ell)) throw std::invalid_argument("intrinsic length is NaN");
  if (ell < h * (1 - 1e-12))
    throw std::invalid_argument("intrinsic length shorter than the chord violates the metric axioms");
  if (ell <= h * (1 + 1e-12)) return {kInf, false};
  const double half_pi_h = std::numbers::pi / 2 * h;
  if (ell > half_pi_h) return {h / 2, true};
  if (ell == half_pi_h) return {h / 2, false};
  const double target = (ell - h) / h;
  double lo = 0, hi = 1;  // asin(u)/u - 1 is increasing on (0, 1]
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (asin_ratio_m1(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return {h / (lo + hi), false};
}

double distortion_radius(double h, double ell) { return distortion_radius_info(h, ell).r; }

PairExtremum distortion_reach(const PointCloud& cloud, const GeodesicGraph& graph) {
  const std::size_t N = cloud.size();
  if (graph.size() != N) throw DimensionError("graph and cloud sizes differ");
  const Matrix& X = cloud.points();
  const int d = cloud.ambient_dim();
  std::atomic<double> bound{kInf};
  return parallel_reduce(
      N, PairExtremum{},
      [&](std::size_t b, std::size_t e) {
        PairExtremum best;
        for (std::size_t i = b; i < e; ++i) {
          const double B = bound.load();
          // Beyond pi*B of graph distance, any pair with h/2 <= B is past a
          // semicircle and its radius is exactly h/2.
          const auto dist = distances_from(graph, i, std::numbers::pi * B);
          const double* P = col(X, i);
          for (std::size_t j = i + 1; j < N; ++j) {
            if (graph.component(i) != graph.component(j)) continue;
            double h = std::sqrt(dist2(P, col(X, j), d));
            if (!(h > 0)) continue;
            double cur = std::min(B, best.value);
            if (h / 2 > cur) continue;
            double r;
            if (dist[j] == kInf) {
              if (h / 2 > B) continue;
              r = h / 2;
            } else {
              if (!distortion_may_beat(h, dist[j], cur)) continue;
              r = distortion_radius(h, std::max(dist[j], h));
            }
            offer_min(best, r, i, j);
          }
          atomic_min(bound, best.value);
        }
        return best;
      },
      min_of);
}

PairExtremum distortion_reach(const PointCloud& cloud, const std::function<double(std::size_t, std::size_t)>& intrinsic) {
  const std::size_t N = cloud.size();
  const Matrix& X = cloud.points();
  const int d = cloud.ambient_dim();
  return parallel_reduce(
      N, PairExtremum{},
      [&](std::size_t b, std::size_t e) {
        PairExtremum best;
        for (std::size_t i = b; i < e; ++i)
          for (std::size_t j = i + 1; j < N; ++j) {
            double ell = intrinsic(i, j);
            if (!(ell < kInf)) continue;
            double h = std::sqrt(dist2(col(X, i), col(X, j), d));
            if (!(h > 0)) continue;
            offer_min(best, distortion_radius(h, std::max(ell, h)), i, j);
          }
        return best;
      },
      min_of);
}

GlobalReachOptions default_global_options(double spacing) {
  GlobalReachOptions o;
  o.emptiness_tol = 0.5 * spacing;
  o.resolution = 2.0 * spacing;
  return o;
}

GlobalReachResult global_reach(const PointCloud& cloud, const GlobalReachOptions& opts) {
  const std::size_t N = cloud.size();
  if (N < 2) throw std::invalid_argument("global reach needs at least two points");
  if (!(opts.emptiness_tol >= 0)) throw std::invalid_argument("emptiness tolerance must be nonnegative");
  const Matrix& X = cloud.points();
  const int d = cloud.ambient_dim();
  KdTree tree(X);
  const std::size_t kq = std::min<std::size_t>(8, N - 1);
  std::vector<std::vector<std::size_t>> nbr(N);
  parallel_for(N, [&](std::size_t i) {
    for (auto& [dd, j] : tree.knn(col(X, i), kq, i)) nbr[i].push_back(j);
  });

  struct Cand {
    double half;
    std::size_t i, j;
  };
  std::atomic<double> bound{kInf};
  std::vector<std::vector<Cand>> found(default_chunk_count(N));
  run_chunks(N, found.size(), [&](std::size_t c, std::size_t b, std::size_t e) {
    std::vector<double> m(static_cast<std::size_t>(d));
    for (std::size_t i = b; i < e; ++i) {
      const double* A = col(X, i);
      for (std::size_t j = i + 1; j < N; ++j) {
        const double* Bp = col(X, j);
        double half = 0.5 * std::sqrt(dist2(A, Bp, d));
        double r = half - opts.emptiness_tol;
        if (half < opts.resolution || !(r > 0)) continue;
        if (half > 1.01 * bound.load()) continue;
        for (int k = 0; k < d; ++k) m[k] = 0.5 * (A[k] + Bp[k]);
        const double r2 = r * r;
        bool occupied = false;
        for (auto t : nbr[i])
          if (t != j && dist2(col(X, t), m.data(), d) < r2) {
            occupied = true;
            break;
          }
        if (!occupied)
          for (auto t : nbr[j])
            if (t != i && dist2(col(X, t), m.data(), d) < r2) {
              occupied = true;
              break;
            }
        if (occupied || tree.any_in_open_ball(m.data(), r, i, j)) continue;
        found[c].push_back({half, i, j});
        atomic_min(bound, half);
      }
    }
  });

  GlobalReachResult out;
  for (const auto& f : found)
    for (const auto& c : f) out.value = std::min(out.value, c.half);
  if (!(out.value < kInf)) return out;
  std::vector<Cand> keep;
  for (const auto& f : found)
    for (const auto& c : f)
      if (c.half <= 1.01 * out.value) keep.push_back(c);
  std::sort(keep.begin(), keep.end(), [](const Cand& a, const Cand& b) {
    if (a.half != b.half) return a.half < b.half;
    return pair_less(a.i, a.j, b.i, b.j);
  });
  for (const auto& c : keep) out.bottlenecks.emplace_back(c.i, c.j);
  return out;
}

std::vector<double> default_rho_grid(double spacing) { return {8 * spacing, 4 * spacing, 2 * spacing}; }

LocalReachOptions default_local_options(const PointCloud& cloud, double spacing) {
  LocalReachOptions o;
  o.rho_grid = default_rho_grid(spacing);
  o.use_federer = cloud.has_tangents();
  o.use_distortion = !cloud.has_tangents() || cloud.intrinsic_dim() <= 1;
  return o;
}

namespace {

void validate_local(const PointCloud& cloud, const GeodesicGraph& graph, const LocalReachOptions& opts) {
  if (cloud.intrinsic_dim() < 0) throw std::invalid_argument("local reach needs the intrinsic dimension");
  if (graph.size() != cloud.size()) throw DimensionError("graph and cloud sizes differ");
  if (opts.rho_grid.empty()) throw std::invalid_argument("rho grid is empty");
  for (std::size_t k = 0; k < opts.rho_grid.size(); ++k) {
    if (!(opts.rho_grid[k] > 0)) throw std::invalid_argument("rho grid entries must be positive");
    if (k > 0 && !(opts.rho_grid[k] < opts.rho_grid[k - 1]))
      throw std::invalid_argument("rho grid must be strictly decreasing");
  }
  if (!opts.use_federer && !opts.use_distortion) throw std::invalid_argument("no reach characterization selected");
  if (opts.use_federer && !cloud.has_tangents()) throw std::invalid_argument("federer branch needs tangents");
}

// Reach of the sample restricted to the given nodes.
double restricted_reach(const PointCloud& cloud, const PackedFrames* frames, const GeodesicGraph& graph,
                        const std::vector<std::size_t>& ball, const LocalReachOptions& opts) {
  const Matrix& X = cloud.points();
  const int d = cloud.ambient_dim();
  double best = kInf;
  if (opts.use_federer) {
    std::vector<double> v(static_cast<std::size_t>(d)), work(static_cast<std::size_t>(d));
    for (auto p : ball) {
      const double* P = col(X, p);
      for (auto q : ball) {
        if (q == p) continue;
        const double* Q = col(X, q);
        double vv = 0;
        for (int c = 0; c < d; ++c) {
          v[c] = Q[c] - P[c];
          vv += v[c] * v[c];
        }
        if (vv == 0) continue;
        double rr = normal_part2(v.data(), frames->frame(p), frames->n, d, work.data());
        if (rr <= kFlatRel * kFlatRel * vv) continue;
        best = std::min(best, vv / (2 * std::sqrt(rr)));
      }
    }
  }
  if (opts.use_distortion) {
    GeodesicGraph sub = induced_subgraph(graph, ball);
    for (std::size_t a = 0; a < ball.size(); ++a) {
      auto dist = distances_from(sub, a);
      for (std::size_t b = a + 1; b < ball.size(); ++b) {
        if (!(dist[b] < kInf)) continue;
        double h = std::sqrt(dist2(col(X, ball[a]), col(X, ball[b]), d));
        if (!(h > 0) || h / 2 > best || !distortion_may_beat(h, dist[b], best)) continue;
        best = std::min(best, distortion_radius(h, std::max(dist[b], h)));
      }
    }
  }
  return best;
}

double min_usable_rho(const KdTree& tree, const Matrix& X, std::size_t p, int n) {
  auto nn = tree.knn(col(X, p), static_cast<std::size_t>(n + 1), p);
  return nn.empty() ? kInf : nn.back().first;
}

}  // namespace

LocalReachCurve local_reach_at(const PointCloud& cloud, std::size_t p, const GeodesicGraph& graph,
                               const LocalReachOptions& opts) {
  validate_local(cloud, graph, opts);
  if (p >= cloud.size()) throw std::out_of_range("base point index out of range");
  const Matrix& X = cloud.points();
  KdTree tree(X);
  std::optional<PackedFrames> frames;
  if (opts.use_federer) frames = pack_tangents(cloud);
  const std::size_t need = static_cast<std::size_t>(cloud.intrinsic_dim() + 2);

  LocalReachCurve c;
  c.point = p;
  c.rho = opts.rho_grid;
  for (double rho : opts.rho_grid) {
    auto ball = tree.radius(col(X, p), rho);
    c.count.push_back(ball.size());
    bool ok = ball.size() >= need;
    c.usable.push_back(ok);
    c.value.push_back(ok ? restricted_reach(cloud, frames ? &*frames : nullptr, graph, ball, opts)
                         : std::numeric_limits<double>::quiet_NaN());
  }
  int last = -1;
  for (std::size_t k = 0; k < c.rho.size(); ++k)
    if (c.usable[k]) last = static_cast<int>(k);
  if (last < 0) {
    double m = min_usable_rho(tree, X, p, cloud.intrinsic_dim());
    throw SparseBallError("every ball around point " + std::to_string(p) + " holds fewer than " +
                              std::to_string(need) + " samples; minimum usable rho is " + std::to_string(m),
                          m);
  }
  c.estimate = c.value[static_cast<std::size_t>(last)];
  c.estimate_rho = c.rho[static_cast<std::size_t>(last)];
  double prev = -1;
  for (std::size_t k = 0; k < c.rho.size(); ++k) {
    if (!c.usable[k]) continue;
    if (prev >= 0 && prev < kInf && c.value[k] < prev * (1 - opts.monotone_slack)) c.monotone = false;
    if (prev == kInf && c.value[k] < kInf) c.monotone = false;
    prev = c.value[k];
  }
  return c;
}

LocalReachResult local_reach(const PointCloud& cloud, const GeodesicGraph& graph, const LocalReachOptions& opts) {
  validate_local(cloud, graph, opts);
  const std::size_t N = cloud.size();
  const Matrix& X = cloud.points();
  KdTree tree(X);
  std::optional<PackedFrames> frames;
  if (opts.use_federer) frames = pack_tangents(cloud);
  const std::size_t need = static_cast<std::size_t>(cloud.intrinsic_dim() + 2);

  LocalReachResult out;
  out.per_point.assign(N, kInf);
  out.per_point_rho.assign(N, 0);
  // Only the smallest usable radius decides each point's estimate.
  parallel_for(N, [&](std::size_t p) {
    for (auto it = opts.rho_grid.rbegin(); it != opts.rho_grid.rend(); ++it) {
      auto ball = tree.radius(col(X, p), *it);
      if (ball.size() < need) continue;
      out.per_point[p] = restricted_reach(cloud, frames ? &*frames : nullptr, graph, ball, opts);
      out.per_point_rho[p] = *it;
      return;
    }
    double m = min_usable_rho(tree, X, p, cloud.intrinsic_dim());
    throw SparseBallError("every ball around point " + std::to_string(p) + " holds fewer than " +
                              std::to_string(need) + " samples; minimum usable rho is " + std::to_string(m),
                          m);
  });
  for (std::size_t p = 0; p < N; ++p)
    if (out.per_point[p] < out.value) {
      out.value = out.per_point[p];
      out.argmin = p;
    }
  return out;
}

double decomposition_residual(double rch, double rch_global, double rch_local) {
  double rhs = std::min(rch_global, rch_local);
  if (rch == kInf && rhs == kInf) return 0.0;
  if (rch == kInf || rhs == kInf) return kInf;
  if (rhs == 0) return rch == 0 ? 0.0 : kInf;
  return std::abs(rch - rhs) / rhs;
}

TangentAngles::TangentAngles(const PointCloud& cloud) : cloud_(&cloud), d_(cloud.ambient_dim()) {
  if (!cloud.has_tangents()) throw std::invalid_argument("tangent subspace required at every point");
  const int n = cloud.intrinsic_dim();
  const std::size_t N = cloud.size();
  if (n == 1 || (n == d_ - 1 && d_ >= 2)) {
    lines_ = true;
    dirs_.resize(N * static_cast<std::size_t>(d_));
    for (std::size_t i = 0; i < N; ++i) {
      Vector u = n == 1 ? Vector(cloud.tangent(i).basis().col(0))
                        : Vector(cloud.tangent(i).orthogonal_complement().basis().col(0));
      for (int c = 0; c < d_; ++c) dirs_[i * static_cast<std::size_t>(d_) + static_cast<std::size_t>(c)] = u(c);
    }
  }
}

double TangentAngles::operator()(std::size_t i, std::size_t j) const {
  if (!lines_) return grassmann_angle(cloud_->tangent(i), cloud_->tangent(j));
  const double* a = dirs_.data() + i * static_cast<std::size_t>(d_);
  const double* b = dirs_.data() + j * static_cast<std::size_t>(d_);
  double dot = 0;
  for (int c = 0; c < d_; ++c) dot += a[c] * b[c];
  const double s = dot < 0 ? -1.0 : 1.0;
  double diff = 0;
  for (int c = 0; c < d_; ++c) {
    double t = a[c] - s * b[c];
    diff += t * t;
  }
  return 2 * std::asin(std::min(1.0, std::sqrt(diff) / 2));
}

PairExtremum tangent_variation_sup(const PointCloud& cloud, const GeodesicGraph& graph) {
  const std::size_t N = cloud.size();
  if (graph.size() != N) throw DimensionError("graph and cloud sizes differ");
  TangentAngles angle(cloud);
  // Neighbouring pairs give a first lower bound for pruning.
  std::atomic<double> bound{0.0};
  for (std::size_t i = 0; i < N; ++i)
    for (const auto& e : graph.neighbors(i))
      if (e.length > 0) atomic_max(bound, angle(i, e.to) / e.length);
  PairExtremum none{0.0, kNoIndex, kNoIndex};
  auto max_of = [](const PairExtremum& a, const PairExtremum& b) {
    PairExtremum r = a;
    if (b.i != kNoIndex) offer_max(r, b.value, b.i, b.j);
    return r;
  };
  return parallel_reduce(
      N, none,
      [&](std::size_t b, std::size_t e) {
        PairExtremum best = none;
        for (std::size_t i = b; i < e; ++i) {
          const double B = std::max(bound.load(), best.value);
          // Angles never exceed pi/2, so farther pairs cannot reach B.
          const double cutoff = B > 0 ? std::numbers::pi / 2 / B : kInf;
          auto dist = distances_from(graph, i, cutoff);
          for (std::size_t j = i + 1; j < N; ++j) {
            if (!(dist[j] < kInf) || !(dist[j] > 0)) continue;
            if (std::numbers::pi / 2 / dist[j] < best.value) continue;
            double r = angle(i, j) / dist[j];
            if (best.i == kNoIndex || r > best.value || (r == best.value && pair_less(i, j, best.i, best.j)))
              best = {r, i, j};
          }
          atomic_max(bound, best.value);
        }
        return best;
      },
      max_of);
}

ChordAngleResult chord_angle_check(const PointCloud& cloud, double rch_value) {
  if (!(rch_value > 0)) throw std::invalid_argument("reach value must be positive");
  const std::size_t N = cloud.size();
  const PackedFrames frames = pack_tangents(cloud);
  const int d = frames.d, n = frames.n;
  const Matrix& X = cloud.points();
  const double lim2 = rch_value == kInf ? kInf : rch_value * rch_value;
  struct Acc {
    ChordAngleResult r;
  };
  auto merge = [](const Acc& a, const Acc& b) {
    Acc out = a;
    const auto& x = b.r;
    if (x.i != kNoIndex &&
        (out.r.i == kNoIndex || x.max_excess > out.r.max_excess ||
         (x.max_excess == out.r.max_excess && pair_less(x.i, x.j, out.r.i, out.r.j)))) {
      out.r.max_excess = x.max_excess;
      out.r.i = x.i;
      out.r.j = x.j;
    }
    out.r.max_abs_gap = std::max(out.r.max_abs_gap, x.max_abs_gap);
    out.r.pairs += x.pairs;
    return out;
  };
  Acc res = parallel_reduce(
      N, Acc{},
      [&](std::size_t b, std::size_t e) {
        Acc a;
        std::vector<double> v(static_cast<std::size_t>(d)), work(static_cast<std::size_t>(d));
        for (std::size_t p = b; p < e; ++p) {
          const double* P = col(X, p);
          for (std::size_t q = 0; q < N; ++q) {
            if (q == p) continue;
            const double* Q = col(X, q);
            double vv = 0;
            for (int c = 0; c < d; ++c) {
              v[c] = Q[c] - P[c];
              vv += v[c] * v[c];
            }
            if (!(vv < lim2) || vv == 0) continue;
            double len = std::sqrt(vv);
            double sine = std::sqrt(normal_part2(v.data(), frames.frame(p), n, d, work.data())) / len;
            double rhs = rch_value == kInf ? 0.0 : len / (2 * rch_value);
            double ex = sine - rhs;
            ++a.r.pairs;
            a.r.max_abs_gap = std::max(a.r.max_abs_gap, std::abs(ex));
            if (a.r.i == kNoIndex || ex > a.r.max_excess) {
              a.r.max_excess = ex;
              a.r.i = p;
              a.r.j = q;
            }
          }
        }
        return a;
      },
      merge);
  return res.r;
}

}  // namespace geomreach
