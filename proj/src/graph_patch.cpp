#include "geomreach/graph_patch.hpp"
#include "geomreach/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "geomreach/errors.hpp"
#include "geomreach/kdtree.hpp"

namespace geomreach {

namespace {

double map_norm(const Matrix& m) {
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  return operator_norm(m);
}

double max_nn_gap(const Matrix& pts) {
  if (pts.cols() < 2) return 0.0;
  KdTree tree(pts);
  double gap = 0;
  for (Eigen::Index i = 0; i < pts.cols(); ++i)
    gap = std::max(gap, tree.knn(pts.col(i).data(), 1, static_cast<std::size_t>(i)).front().first);
  return gap;
}

}  // namespace

GraphPatch extract_patch(const PointCloud& cloud, std::size_t p, double R) {
  if (!(R > 0)) throw std::invalid_argument("patch radius must be positive");
  if (p >= cloud.size()) throw std::out_of_range("base point index out of range");
  const Subspace& t = cloud.tangent(p);
  if (t.dim() < 1 || t.dim() >= cloud.ambient_dim())
    throw DimensionError("patch needs 1 <= n < d");

  GraphPatch patch;
  patch.base_index = p;
  patch.base = cloud.point(p);
  patch.tangent = t;
  patch.normal = t.orthogonal_complement();
  patch.radius_R = R;
  const Matrix& tb = patch.tangent.basis();
  const Matrix& nb = patch.normal.basis();

  KdTree tree(cloud.points());
  const double reach_ball = std::sqrt(2.0) * R;
  std::vector<std::size_t> cand = R < kInf ? tree.radius(patch.base.data(), reach_ball)
                                           : [&] {
                                               std::vector<std::size_t> all(cloud.size());
                                               for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                                               return all;
                                             }();
  std::vector<Vector> xs, ph;
  std::vector<double> dist;
  auto take = [&](std::size_t q) {
    Vector v = cloud.point(q) - patch.base;
    if (!(v.norm() < reach_ball) && q != p) return;
    Vector x = tb.transpose() * v;
    if (!(x.norm() < R)) return;
    Vector f = nb.transpose() * v;
    Vector back = patch.base + tb * x + nb * f;
    if ((back - cloud.point(q)).norm() > 1e-12 * std::max(1.0, cloud.point(q).norm()))
      throw std::logic_error("patch reconstruction error above 1e-12");
    if (f.norm() > R) patch.pythagoras_violations.push_back(q);
    patch.indices.push_back(q);
    xs.push_back(x);
    ph.push_back(f);
    dist.push_back(v.norm());
  };
  take(p);
  for (auto q : cand)
    if (q != p) take(q);

  const Eigen::Index m = static_cast<Eigen::Index>(patch.indices.size());
  patch.x.resize(t.dim(), m);
  patch.phi.resize(nb.cols(), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    patch.x.col(k) = xs[static_cast<std::size_t>(k)];
    patch.phi.col(k) = ph[static_cast<std::size_t>(k)];
  }
  patch.spacing = max_nn_gap(patch.x);

  // Two samples over (almost) the same tangent point must agree in their
  // normal part up to the slope a reach-R set allows there.
  if (m >= 2) {
    KdTree xtree(patch.x);
    const double tau = 1e-9 * (R < kInf ? R : 1.0);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (auto b : xtree.radius(patch.x.col(a).data(), patch.spacing)) {
        if (static_cast<Eigen::Index>(b) <= a) continue;
        double dx = (patch.x.col(static_cast<Eigen::Index>(b)) - patch.x.col(a)).norm();
        double dphi = (patch.phi.col(static_cast<Eigen::Index>(b)) - patch.phi.col(a)).norm();
        double far = std::max(dist[static_cast<std::size_t>(a)], dist[b]);
        double angle = R < kInf ? 2 * std::asin(std::min(1.0, far / (2 * R))) : 0.0;
        if (angle >= std::numbers::pi / 2 * (1 - 1e-12)) continue;
        double slope = std::tan(angle);
        if (dphi > 2 * slope * dx + tau)
          throw InjectivityError(patch.indices[static_cast<std::size_t>(a)], patch.indices[b]);
      }
    }
  }
  return patch;
}

void fit_derivatives(GraphPatch& patch, int neighborhood_size) {
  const int n = patch.tangent_dim();
  const int c = patch.normal_dim();
  const std::size_t m = patch.size();
  const int terms = 1 + n + n * (n + 1) / 2;
  const int k = neighborhood_size > 0 ? neighborhood_size : 2 * terms + 1;
  if (static_cast<std::size_t>(k) > m || k < terms)
    throw std::invalid_argument("derivative fit needs between " + std::to_string(terms) +
                                " and the patch size neighbours (k=" + std::to_string(k) + ", patch size " +
                                std::to_string(m) + ")");
  KdTree xtree(patch.x);
  patch.derivatives.assign(m, LinearMap::Zero(c, n));
  patch.fit_residual = 0;
  patch.fit_tolerance = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vector xi = patch.x.col(static_cast<Eigen::Index>(i));
    auto nb = xtree.knn(xi.data(), static_cast<std::size_t>(k));
    double h = 0;
    for (const auto& [dist, j] : nb) h = std::max(h, dist);
    if (!(h > 0)) throw std::runtime_error("rank-deficient neighbourhood at patch sample " + std::to_string(i));
    // Quadratic model in coordinates scaled to the neighbourhood radius.
    Matrix design(k, terms);
    Matrix rhs(k, c);
    for (int r = 0; r < k; ++r) {
      const auto j = static_cast<Eigen::Index>(nb[static_cast<std::size_t>(r)].second);
      Vector u = (patch.x.col(j) - xi) / h;
      design(r, 0) = 1.0;
      design.block(r, 1, 1, n) = u.transpose();
      int col = 1 + n;
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) design(r, col++) = u(a) * u(b);
      rhs.row(r) = patch.phi.col(j).transpose();
    }
    Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-8 * s(0)))
      throw std::runtime_error("rank-deficient neighbourhood at patch sample " + std::to_string(i));
    Matrix coef = svd.solve(rhs);  // terms x c
    patch.derivatives[i] = coef.middleRows(1, n).transpose() / h;
    Matrix res = design * coef - rhs;
    patch.fit_residual = std::max(patch.fit_residual, res.cwiseAbs().maxCoeff());
    double rms = std::sqrt(res.squaredNorm() / k);
    patch.fit_tolerance = std::max(patch.fit_tolerance, 2 * rms / h);
  }
  patch.base_derivative_norm = map_norm(patch.derivatives.front());
}

void derivatives_from_tangents(GraphPatch& patch, const PointCloud& cloud) {
  const Matrix& tb = patch.tangent.basis();
  const Matrix& nb = patch.normal.basis();
  patch.derivatives.clear();
  for (auto q : patch.indices) {
    const Matrix& tq = cloud.tangent(q).basis();
    Matrix a = tb.transpose() * tq;
    Matrix b = nb.transpose() * tq;
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw std::runtime_error("tangent at sample " + std::to_string(q) + " is vertical over T_p");
    patch.derivatives.push_back(b * lu.inverse());
  }
  patch.fit_residual = 0;
  patch.fit_tolerance = 1e-9;
  patch.base_derivative_norm = map_norm(patch.derivatives.front());
}

LipschitzResult lipschitz_derivative_constant(const GraphPatch& patch, double rch_loc) {
  if (patch.derivatives.size() != patch.size()) throw std::invalid_argument("derivatives not fitted");
  if (!(patch.alpha > 0)) throw std::invalid_argument("patch alpha must be set");
  std::vector<std::size_t> ball;
  for (std::size_t i = 0; i < patch.size(); ++i)
    if (patch.x.col(static_cast<Eigen::Index>(i)).norm() < patch.alpha) ball.push_back(i);
  if (ball.size() < 2) throw std::invalid_argument("fewer than 2 samples in the alpha ball");
  LipschitzResult out;
  out.samples = ball.size();
  for (std::size_t a = 0; a < ball.size(); ++a)
    for (std::size_t b = a + 1; b < ball.size(); ++b) {
      const auto i = ball[a], j = ball[b];
      double dx = (patch.x.col(static_cast<Eigen::Index>(j)) - patch.x.col(static_cast<Eigen::Index>(i))).norm();
      if (!(dx > 0)) continue;
      double v = map_norm(patch.derivatives[j] - patch.derivatives[i]) / dx;
      if (v > out.constant) {
        out.constant = v;
        out.i = i;
        out.j = j;
      }
    }
  const double r = rch_loc - patch.epsilon;
  out.bound = r > 0 ? 1.0 / r : kInf;
  out.tolerance = patch.fit_tolerance;
  out.pass = out.constant <= out.bound * (1 + out.tolerance);
  return out;
}

double alpha_bound(double epsilon, double R) {
  if (!(epsilon > 0) || !(R > 0)) throw std::invalid_argument("epsilon and R must be positive");
  if (epsilon / R > 0.5) throw HypothesisError("outside lemma hypothesis: epsilon/R > 1/2");
  return std::sqrt(epsilon * R);
}

double alpha_sphere_exact(double epsilon, double R) {
  if (!(epsilon > 0) || !(R > epsilon)) throw std::invalid_argument("need 0 < epsilon < R");
  return R * std::sqrt(1 - std::cbrt((1 - epsilon / R) * (1 - epsilon / R)));
}

std::vector<ConvexityVerdict> semiconvexity_check(const GraphPatch& patch, double r,
                                                  const std::vector<Vector>& directions,
                                                  const SemiconvexityOptions& opts) {
  if (patch.derivatives.size() != patch.size()) throw std::invalid_argument("derivatives not fitted");
  if (!(patch.alpha > 0)) throw std::invalid_argument("patch alpha must be set");
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  for (const auto& v : directions) {
    if (v.size() != patch.normal_dim()) throw std::invalid_argument("direction is not a normal-space vector");
    if (std::abs(v.norm() - 1) > 1e-9) throw std::invalid_argument("direction is not a unit vector");
  }
  std::vector<std::size_t> ball;
  for (std::size_t i = 0; i < patch.size(); ++i)
    if (patch.x.col(static_cast<Eigen::Index>(i)).norm() < patch.alpha) ball.push_back(i);
  if (ball.size() < 3) throw std::invalid_argument("fewer than 3 samples in the alpha ball");
  const int n = patch.tangent_dim();
  Matrix bx(n, static_cast<Eigen::Index>(ball.size()));
  for (std::size_t k = 0; k < ball.size(); ++k) bx.col(static_cast<Eigen::Index>(k)) = patch.x.col(static_cast<Eigen::Index>(ball[k]));
  KdTree btree(bx);
  const double spacing = std::max(max_nn_gap(bx), patch.spacing);
  const double r_eff = r - patch.epsilon > 0 ? r - patch.epsilon : r;
  const double slack = 2 * patch.fit_residual + spacing * spacing / (2 * r_eff);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (ball.size() <= 200) {
    for (std::size_t a = 0; a < ball.size(); ++a)
      for (std::size_t b = a + 1; b < ball.size(); ++b) pairs.emplace_back(a, b);
  } else {
    std::mt19937_64 rng(opts.seed);
    for (std::size_t t = 0; t < opts.max_pairs; ++t) {
      std::size_t a = rng() % ball.size(), b = rng() % ball.size();
      if (a != b) pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  }

  std::vector<ConvexityVerdict> out;
  for (const auto& v : directions) {
    ConvexityVerdict cv;
    cv.direction = v;
    cv.slack = slack;
    cv.midpoint_defect = -kInf;
    cv.first_order_defect = -kInf;
    std::vector<double> g(ball.size());
    Matrix grad(n, static_cast<Eigen::Index>(ball.size()));
    for (std::size_t k = 0; k < ball.size(); ++k) {
      const auto i = static_cast<Eigen::Index>(ball[k]);
      g[k] = 0.5 * patch.x.col(i).squaredNorm() - r * v.dot(patch.phi.col(i));
      grad.col(static_cast<Eigen::Index>(k)) = patch.x.col(i) - r * patch.derivatives[ball[k]].transpose() * v;
    }
    for (const auto& [a, b] : pairs) {
      const Vector ya = bx.col(static_cast<Eigen::Index>(a)), yb = bx.col(static_cast<Eigen::Index>(b));
      Vector mid = 0.5 * (ya + yb);
      auto near = btree.knn(mid.data(), 1).front().second;
      double gm = g[near] + grad.col(static_cast<Eigen::Index>(near)).dot(mid - bx.col(static_cast<Eigen::Index>(near)));
      double md = gm - 0.5 * (g[a] + g[b]);
      if (md > cv.midpoint_defect) {
        cv.midpoint_defect = md;
        cv.mid_i = ball[a];
        cv.mid_j = ball[b];
      }
      // First-order form in both directions; the fitted gradient carries an
      // error of about r * fit_tolerance per unit length.
      const double fit_err = r * patch.fit_tolerance * (yb - ya).norm();
      double f1 = g[a] + grad.col(static_cast<Eigen::Index>(a)).dot(yb - ya) - g[b] - fit_err;
      double f2 = g[b] + grad.col(static_cast<Eigen::Index>(b)).dot(ya - yb) - g[a] - fit_err;
      if (f1 > cv.first_order_defect) {
        cv.first_order_defect = f1;
        cv.fo_i = ball[a];
        cv.fo_j = ball[b];
      }
      if (f2 > cv.first_order_defect) {
        cv.first_order_defect = f2;
        cv.fo_i = ball[b];
        cv.fo_j = ball[a];
      }
    }
    cv.midpoint_pass = cv.midpoint_defect <= slack;
    cv.first_order_pass = cv.first_order_defect <= slack;
    out.push_back(cv);
  }
  return out;
}

std::vector<Vector> default_normal_directions(const GraphPatch& patch, std::uint64_t seed) {
  const int c = patch.normal_dim();
  std::vector<Vector> dirs;
  for (int k = 0; k < c; ++k) dirs.push_back(Vector::Unit(c, k));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 2 * c; ++k) {
    Vector v(c);
    for (int t = 0; t < c; ++t) v(t) = gauss(rng);
    dirs.push_back(v.normalized());
  }
  return dirs;
}

OperatorNormAngle operator_norm_angle_bound(const LinearMap& f1, const LinearMap& f2) {
  if (f1.rows() != f2.rows() || f1.cols() != f2.cols())
    throw DimensionError("linear maps have different shapes");
  if (f1.rows() < 1 || f1.cols() < 1) throw DimensionError("linear maps must be at least 1 x 1");
  const Eigen::Index n = f1.cols(), m = f1.rows();
  auto graph = [&](const LinearMap& f) {
    Matrix g(n + m, n);
    g.topRows(n) = Matrix::Identity(n, n);
    g.bottomRows(m) = f;
    return Subspace::span(g, 1e300);
  };
  OperatorNormAngle out;
  out.lhs = 2 * std::sin(grassmann_angle(graph(f1), graph(f2)) / 2);
  out.rhs = operator_norm(f2 - f1);
  out.pass = out.lhs <= out.rhs + 1e-12;
  return out;
}

}  // namespace geomreach
