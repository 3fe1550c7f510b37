#include "geomreach/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "geomreach/errors.hpp"

namespace geomreach {

namespace {

constexpr double kZeroTol = 1e-10;

Matrix columns(const std::vector<Vector>& v, int d) {
  Matrix m(d, static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = v[j];
  return m;
}

// Orthonormal basis of the column span, rank decided at a relative 1e-10.
Matrix span_basis(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

PolyhedralCone::PolyhedralCone(int ambient_dim) : d_(ambient_dim), gens_(ambient_dim, 0) {}

PolyhedralCone::PolyhedralCone(const Matrix& generators) : d_(static_cast<int>(generators.rows())), gens_(generators) {
  if (!gens_.allFinite()) throw std::invalid_argument("cone generators must be finite");
  for (Eigen::Index j = 0; j < gens_.cols(); ++j) {
    double n = gens_.col(j).norm();
    if (!(n > 0.0)) throw std::invalid_argument("cone generators must be nonzero");
    gens_.col(j) /= n;
  }
}

PolyhedralCone::PolyhedralCone(int ambient_dim, const std::vector<Vector>& generators)
    : PolyhedralCone([&] {
        for (const auto& g : generators)
          if (g.size() != ambient_dim) throw DimensionError("generator length differs from ambient dimension");
        return columns(generators, ambient_dim);
      }()) {}

NnlsResult nnls(const Matrix& g, const Vector& v) {
  const Eigen::Index m = g.cols();
  NnlsResult out;
  out.lambda = Vector::Zero(m);
  out.projection = Vector::Zero(g.rows());
  if (m == 0) {
    out.residual = v.norm();
    return out;
  }
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  Vector x = Vector::Zero(m);
  const double scale = std::max(1.0, v.norm()) * std::max(1.0, g.norm());
  const double wtol = 1e-13 * scale;

  auto solve_passive = [&](Vector& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < m; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Matrix gp(g.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) gp.col(static_cast<Eigen::Index>(k)) = g.col(idx[k]);
    Vector sp = gp.completeOrthogonalDecomposition().solve(v);
    s = Vector::Zero(m);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
  };

  const int max_outer = static_cast<int>(3 * m + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    Vector w = g.transpose() * (v - g * x);
    Eigen::Index t = -1;
    double best = wtol;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    for (int inner = 0; inner < max_outer; ++inner) {
      Vector s;
      solve_passive(s);
      bool feasible = true;
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0) feasible = false;
      if (feasible) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < m; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15 * scale) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0;
        }
    }
  }
  out.lambda = x.cwiseMax(0.0);
  out.projection = g * out.lambda;
  out.residual = (out.projection - v).norm();
  return out;
}

bool cone_contains(const PolyhedralCone& c, const Vector& v, double tol) {
  if (v.size() != c.ambient_dim()) throw DimensionError("vector length differs from cone ambient dimension");
  return nnls(c.generators(), v).residual <= tol;
}

PolyhedralCone dual_cone(const PolyhedralCone& c) {
  const int d = c.ambient_dim();
  if (d > kMaxDualDim)
    throw DimensionError("dual cone enumeration is limited to d <= " + std::to_string(kMaxDualDim) +
                         "; use membership and thickening queries instead");
  // Double description of {x : <a_j, x> <= 0}: lineality basis plus rays.
  std::vector<Vector> lin;
  for (int i = 0; i < d; ++i) lin.push_back(Vector::Unit(d, i));
  std::vector<Vector> rays;
  std::vector<Vector> done;

  auto zero_set = [&](const Vector& r) {
    std::vector<int> z;
    for (std::size_t j = 0; j < done.size(); ++j)
      if (std::abs(done[j].dot(r)) <= kZeroTol) z.push_back(static_cast<int>(j));
    return z;
  };

  for (int j = 0; j < c.generator_count(); ++j) {
    const Vector a = c.generator(j);
    std::size_t pivot = lin.size();
    double best = kZeroTol;
    for (std::size_t k = 0; k < lin.size(); ++k)
      if (std::abs(a.dot(lin[k])) > best) {
        best = std::abs(a.dot(lin[k]));
        pivot = k;
      }
    if (pivot < lin.size()) {
      Vector l = lin[pivot];
      if (a.dot(l) > 0) l = -l;
      const double al = a.dot(l);
      lin.erase(lin.begin() + static_cast<std::ptrdiff_t>(pivot));
      for (auto& v : lin) v -= (a.dot(v) / al) * l;
      for (auto& r : rays) {
        r -= (a.dot(r) / al) * l;
        r.normalize();
      }
      // Keep the lineality basis well conditioned.
      if (!lin.empty()) {
        Matrix q = span_basis(columns(lin, d));
        lin.clear();
        for (Eigen::Index k = 0; k < q.cols(); ++k) lin.push_back(q.col(k));
      }
      rays.push_back(l.normalized());
      done.push_back(a);
      continue;
    }

    std::vector<double> s(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Vector> next;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      s[k] = a.dot(rays[k]);
      if (s[k] > kZeroTol)
        pos.push_back(k);
      else {
        if (s[k] < -kZeroTol) neg.push_back(k);
        next.push_back(rays[k]);
      }
    }
    std::vector<std::vector<int>> zs(rays.size());
    for (std::size_t k = 0; k < rays.size(); ++k) zs[k] = zero_set(rays[k]);
    for (auto p : pos)
      for (auto n : neg) {
        std::vector<int> common;
        std::set_intersection(zs[p].begin(), zs[p].end(), zs[n].begin(), zs[n].end(), std::back_inserter(common));
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (k == p || k == n) continue;
          if (std::includes(zs[k].begin(), zs[k].end(), common.begin(), common.end())) adjacent = false;
        }
        if (!adjacent) continue;
        Vector x = s[p] * rays[n] - s[n] * rays[p];
        if (x.norm() > kZeroTol) next.push_back(x.normalized());
      }
    rays = std::move(next);
    done.push_back(a);
  }

  std::vector<Vector> gens;
  for (const auto& l : lin) {
    gens.push_back(l.normalized());
    gens.push_back(-l.normalized());
  }
  // Drop duplicate and redundant rays.
  std::vector<Vector> kept;
  for (const auto& r : rays) {
    bool dup = false;
    for (const auto& k : kept)
      if ((k - r).norm() <= 1e-9) dup = true;
    if (!dup) kept.push_back(r);
  }
  for (std::size_t k = 0; k < kept.size();) {
    std::vector<Vector> others = gens;
    for (std::size_t t = 0; t < kept.size(); ++t)
      if (t != k) others.push_back(kept[t]);
    if (!others.empty() && nnls(columns(others, d), kept[k]).residual <= kConeTol)
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
    else
      ++k;
  }
  for (auto& k : kept) gens.push_back(k);
  return PolyhedralCone(d, gens);
}

VectorSpaceTest is_vector_space(const PolyhedralCone& c, double tol) {
  VectorSpaceTest out;
  out.is_vector_space = true;
  for (int j = 0; j < c.generator_count(); ++j)
    if (!cone_contains(c, -c.generator(j), tol)) {
      out.is_vector_space = false;
      break;
    }
  out.dimension = static_cast<int>(span_basis(c.generators()).cols());
  return out;
}

double angle_to_cone(const PolyhedralCone& c, const Vector& v) {
  if (v.size() != c.ambient_dim()) throw DimensionError("vector length differs from cone ambient dimension");
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("angle to a cone is undefined for the zero vector");
  if (c.generator_count() == 0) return std::numbers::pi;
  const Vector u = v / n;
  NnlsResult r = nnls(c.generators(), u);
  const double pn = r.projection.norm();
  if (pn > 1e-12) return std::atan2(r.residual, pn);
  double best = -1.0;
  for (int j = 0; j < c.generator_count(); ++j) best = std::max(best, u.dot(c.generator(j)));
  return std::acos(std::clamp(best, -1.0, 1.0));
}

bool thickened_contains(const PolyhedralCone& c, double eps, const Vector& v) {
  if (!(eps >= 0.0 && eps <= std::numbers::pi)) throw std::invalid_argument("eps must lie in [0, pi]");
  return angle_to_cone(c, v) < eps;
}

std::vector<std::vector<int>> cone_faces(const PolyhedralCone& c) {
  const int m = c.generator_count();
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
  std::set<std::vector<int>> faces{all};
  if (m == 0) return {all};
  PolyhedralCone dual = dual_cone(c);
  std::vector<std::vector<int>> exposed;
  for (int k = 0; k < dual.generator_count(); ++k) {
    std::vector<int> z;
    for (int j = 0; j < m; ++j)
      if (std::abs(dual.generator(k).dot(c.generator(j))) <= 1e-9) z.push_back(j);
    exposed.push_back(z);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<int>> current(faces.begin(), faces.end());
    for (const auto& f : current)
      for (const auto& z : exposed) {
        std::vector<int> meet;
        std::set_intersection(f.begin(), f.end(), z.begin(), z.end(), std::back_inserter(meet));
        if (faces.insert(meet).second) grew = true;
      }
  }
  return {faces.begin(), faces.end()};
}

double containment_angle(const PolyhedralCone& x, const PolyhedralCone& y) {
  if (x.ambient_dim() != y.ambient_dim()) throw DimensionError("cones live in different ambient spaces");
  const double cap = std::numbers::pi / 2;
  if (x.generator_count() == 0) return 0.0;
  if (y.generator_count() == 0) return cap;
  const int d = x.ambient_dim();

  // X meets the polar of Y in a nonzero vector iff the polar of X^polar + Y
  // is nontrivial; such a vector is at angle >= pi/2 from Y.
  PolyhedralCone xd = dual_cone(x);
  std::vector<Vector> sum_gens;
  for (int j = 0; j < xd.generator_count(); ++j) sum_gens.push_back(xd.generator(j));
  for (int j = 0; j < y.generator_count(); ++j) sum_gens.push_back(y.generator(j));
  if (dual_cone(PolyhedralCone(d, sum_gens)).generator_count() > 0) return cap;

  // Otherwise the angle to Y is smooth on X and its maximum sits at a
  // principal vector between the span of a face of X and the span of the
  // face of Y receiving the projection.
  double best = 0.0;
  for (int j = 0; j < x.generator_count(); ++j) best = std::max(best, angle_to_cone(y, x.generator(j)));
  auto face_spans = [](const PolyhedralCone& c) {
    std::vector<Matrix> spans;
    for (const auto& f : cone_faces(c)) {
      if (f.empty()) continue;
      Matrix g(c.ambient_dim(), static_cast<Eigen::Index>(f.size()));
      for (std::size_t k = 0; k < f.size(); ++k) g.col(static_cast<Eigen::Index>(k)) = c.generator(f[k]);
      Matrix b = span_basis(g);
      if (b.cols() > 0) spans.push_back(b);
    }
    return spans;
  };
  const auto xs = face_spans(x);
  const auto ys = face_spans(y);
  for (const auto& qf : xs)
    for (const auto& qg : ys) {
      Eigen::JacobiSVD<Matrix> svd(qf.transpose() * qg, Eigen::ComputeThinU);
      const Matrix u = qf * svd.matrixU();
      for (Eigen::Index k = 0; k < u.cols(); ++k)
        for (double sign : {1.0, -1.0}) {
          Vector cand = sign * u.col(k);
          if (nnls(x.generators(), cand).residual > 1e-9) continue;
          best = std::max(best, angle_to_cone(y, cand));
        }
    }
  return std::min(best, cap);
}

bool cone_in_thickening(const PolyhedralCone& x, const PolyhedralCone& y, double eps) {
  return containment_angle(x, y) < eps;
}

}  // namespace geomreach
