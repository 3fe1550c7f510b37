#include "geomreach/shapes.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "geomreach/geodesics.hpp"
#include "geomreach/reach.hpp"

namespace geomreach {

namespace {

constexpr double kPi = std::numbers::pi;

// SplitMix64 finalizer; gives each sample index its own jitter stream so the
// output does not depend on generation order.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_jitter(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::uint64_t h = mix(mix(mix(seed) ^ index) ^ (stream * 0x632be59bd9b4e019ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Subspace frame(const Matrix& cols) { return Subspace::span(cols); }

Matrix vec2(double x, double y) {
  Matrix m(2, 1);
  m << x, y;
  return m;
}

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// Jittered Fibonacci sphere: z stratified in N equal-area bands.
void sphere_samples(double R, const Vector& center, std::size_t N, std::uint64_t seed, std::uint64_t stream,
                    Matrix& pts, std::vector<Subspace>& tans, Eigen::Index offset) {
  for (std::size_t i = 0; i < N; ++i) {
    double u = unit_jitter(seed, i, 2 * stream);
    double w = unit_jitter(seed, i, 2 * stream + 1);
    double z = 1.0 - 2.0 * (static_cast<double>(i) + u) / static_cast<double>(N);
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double t = static_cast<double>(i) * kGolden + (w - 0.5) / std::sqrt(static_cast<double>(N));
    double phi = 2 * kPi * (t - std::floor(t));
    Vector p(3);
    p << rad * std::cos(phi), rad * std::sin(phi), z;
    pts.col(offset + static_cast<Eigen::Index>(i)) = center + R * p;
    Matrix tb(3, 2);
    tb.col(0) << -std::sin(phi), std::cos(phi), 0;
    tb.col(1) << z * std::cos(phi), z * std::sin(phi), -rad;
    tans.push_back(Subspace::from_orthonormal(tb));
  }
}

double ellipse_speed(double a, double b, double t) {
  return std::hypot(a * std::sin(t), b * std::cos(t));
}

// Points of the planar fillet profile at arc length s, with unit tangent.
struct FilletPoint {
  double x, y, tx, ty;
};
FilletPoint fillet_at(double rho, double leg, double s) {
  const double arc = kPi * rho / 2;
  if (s <= leg) return {rho + leg - s, 0.0, -1.0, 0.0};
  if (s <= leg + arc) {
    double t = 1.5 * kPi - (s - leg) / rho;  // from 3pi/2 down to pi
    return {rho + rho * std::cos(t), rho + rho * std::sin(t), std::sin(t), -std::cos(t)};
  }
  return {0.0, rho + (s - leg - arc), 0.0, 1.0};
}

}  // namespace

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "circle") return ShapeKind::circle;
  if (name == "sphere") return ShapeKind::sphere;
  if (name == "ellipse") return ShapeKind::ellipse;
  if (name == "torus") return ShapeKind::torus;
  if (name == "two_spheres") return ShapeKind::two_spheres;
  if (name == "fillet" || name == "fillet_profile") return ShapeKind::fillet_profile;
  if (name == "segment") return ShapeKind::segment;
  if (name == "plane" || name == "plane_patch") return ShapeKind::plane_patch;
  throw std::invalid_argument("unknown shape '" + name + "'");
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::circle: return "circle";
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::ellipse: return "ellipse";
    case ShapeKind::torus: return "torus";
    case ShapeKind::two_spheres: return "two_spheres";
    case ShapeKind::fillet_profile: return "fillet_profile";
    case ShapeKind::segment: return "segment";
    case ShapeKind::plane_patch: return "plane_patch";
  }
  return "unknown";
}

bool is_curve(ShapeKind kind) {
  return kind == ShapeKind::circle || kind == ShapeKind::ellipse || kind == ShapeKind::fillet_profile ||
         kind == ShapeKind::segment;
}

std::size_t default_count(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::circle: return 256;
    case ShapeKind::sphere: return 4096;
    case ShapeKind::ellipse: return 2048;
    case ShapeKind::torus: return 8192;
    case ShapeKind::two_spheres: return 2048;
    case ShapeKind::fillet_profile: return 2048;
    case ShapeKind::segment: return 256;
    case ShapeKind::plane_patch: return 1024;
  }
  return 0;
}

void validate(const ShapeSpec& s) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  std::size_t n = s.count == 0 ? default_count(s.kind) : s.count;
  if (n < 3) throw std::invalid_argument("sample count must be at least 3");
  switch (s.kind) {
    case ShapeKind::circle:
    case ShapeKind::sphere: positive(s.R, "R"); break;
    case ShapeKind::ellipse:
      positive(s.b, "b");
      if (!(s.a >= s.b)) throw std::invalid_argument("ellipse needs a >= b > 0");
      break;
    case ShapeKind::torus:
      positive(s.r, "r");
      if (!(s.R > s.r)) throw std::invalid_argument("torus needs R > r > 0");
      break;
    case ShapeKind::two_spheres:
      positive(s.R, "R");
      positive(s.g, "g");
      break;
    case ShapeKind::fillet_profile:
      positive(s.rho, "rho");
      positive(s.length, "leg length");
      if (s.width < 0 || !std::isfinite(s.width)) throw std::invalid_argument("extrusion width must be >= 0");
      break;
    case ShapeKind::segment:
    case ShapeKind::plane_patch: positive(s.length, "length"); break;
  }
}

GeneratedShape generate(const ShapeSpec& spec) {
  validate(spec);
  const std::size_t N = spec.count == 0 ? default_count(spec.kind) : spec.count;
  const double dN = static_cast<double>(N);
  GeneratedShape out;
  std::vector<Subspace> tans;

  switch (spec.kind) {
    case ShapeKind::circle: {
      Matrix pts(2, static_cast<Eigen::Index>(N));
      for (std::size_t i = 0; i < N; ++i) {
        double t = 2 * kPi * static_cast<double>(i) / dN;
        pts.col(static_cast<Eigen::Index>(i)) << spec.R * std::cos(t), spec.R * std::sin(t);
        tans.push_back(frame(vec2(-std::sin(t), std::cos(t))));
      }
      out.cloud = PointCloud(pts, 1);
      const double R = spec.R;
      Matrix P = pts;
      out.intrinsic_distance = [P, R](std::size_t i, std::size_t j) {
        double h = (P.col(static_cast<Eigen::Index>(i)) - P.col(static_cast<Eigen::Index>(j))).norm();
        return 2 * R * std::asin(std::min(1.0, h / (2 * R)));
      };
      break;
    }
    case ShapeKind::ellipse: {
      const double a = spec.a, b = spec.b;
      auto speed = [a, b](double t) { return ellipse_speed(a, b, t); };
      using Quad = boost::math::quadrature::gauss<double, 20>;
      // Cumulative arc length on a fine panel grid, then Newton inside a panel.
      const std::size_t panels = 4096;
      std::vector<double> cum(panels + 1, 0.0);
      for (std::size_t k = 0; k < panels; ++k)
        cum[k + 1] = cum[k] + Quad::integrate(speed, 2 * kPi * static_cast<double>(k) / panels,
                                              2 * kPi * static_cast<double>(k + 1) / panels);
      const double total = cum[panels];
      Matrix pts(2, static_cast<Eigen::Index>(N));
      for (std::size_t i = 0; i < N; ++i) {
        double s = total * static_cast<double>(i) / dN;
        std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
        k = std::min(std::max<std::size_t>(k, 1), panels) - 1;
        double t0 = 2 * kPi * static_cast<double>(k) / panels;
        double t1 = 2 * kPi * static_cast<double>(k + 1) / panels;
        double t = t0;
        if (s > cum[k]) {
          auto f = [&](double t) {
            return std::make_pair(cum[k] + Quad::integrate(speed, t0, t) - s, speed(t));
          };
          t = boost::math::tools::newton_raphson_iterate(f, t0 + (t1 - t0) * (s - cum[k]) / (cum[k + 1] - cum[k]),
                                                         t0, t1, 50);
        }
        pts.col(static_cast<Eigen::Index>(i)) << a * std::cos(t), b * std::sin(t);
        tans.push_back(frame(vec2(-a * std::sin(t), b * std::cos(t))));
      }
      out.cloud = PointCloud(pts, 1);
      break;
    }
    case ShapeKind::sphere: {
      Matrix pts(3, static_cast<Eigen::Index>(N));
      sphere_samples(spec.R, Vector::Zero(3), N, spec.seed, 0, pts, tans, 0);
      out.cloud = PointCloud(pts, 2);
      const double R = spec.R;
      Matrix P = pts;
      out.intrinsic_distance = [P, R](std::size_t i, std::size_t j) {
        double h = (P.col(static_cast<Eigen::Index>(i)) - P.col(static_cast<Eigen::Index>(j))).norm();
        return 2 * R * std::asin(std::min(1.0, h / (2 * R)));
      };
      break;
    }
    case ShapeKind::two_spheres: {
      Matrix pts(3, static_cast<Eigen::Index>(2 * N));
      Vector c(3);
      c << spec.R + spec.g, 0, 0;
      sphere_samples(spec.R, -c, N, spec.seed, 0, pts, tans, 0);
      sphere_samples(spec.R, c, N, spec.seed, 1, pts, tans, static_cast<Eigen::Index>(N));
      out.cloud = PointCloud(pts, 2);
      const double R = spec.R;
      Matrix P = pts;
      out.intrinsic_distance = [P, R, N](std::size_t i, std::size_t j) {
        if ((i < N) != (j < N)) return kInf;
        double h = (P.col(static_cast<Eigen::Index>(i)) - P.col(static_cast<Eigen::Index>(j))).norm();
        return 2 * R * std::asin(std::min(1.0, h / (2 * R)));
      };
      break;
    }
    case ShapeKind::torus: {
      const double R = spec.R, r = spec.r;
      Matrix pts(3, static_cast<Eigen::Index>(N));
      for (std::size_t i = 0; i < N; ++i) {
        double jv = unit_jitter(spec.seed, i, 0);
        double ju = unit_jitter(spec.seed, i, 1);
        // Tube angle v has density proportional to R + r cos v.
        double target = 2 * kPi * (static_cast<double>(i) + jv) / dN;
        auto f = [&](double v) { return std::make_pair(v + (r / R) * std::sin(v) - target, 1 + (r / R) * std::cos(v)); };
        double v = boost::math::tools::newton_raphson_iterate(f, target, 0.0, 2 * kPi, 50);
        double t = static_cast<double>(i) * kGolden + (ju - 0.5) / std::sqrt(dN);
        double u = 2 * kPi * (t - std::floor(t));
        double w = R + r * std::cos(v);
        pts.col(static_cast<Eigen::Index>(i)) << w * std::cos(u), w * std::sin(u), r * std::sin(v);
        Matrix tb(3, 2);
        tb.col(0) << -std::sin(u), std::cos(u), 0;
        tb.col(1) << -std::sin(v) * std::cos(u), -std::sin(v) * std::sin(u), std::cos(v);
        tans.push_back(Subspace::from_orthonormal(tb));
      }
      out.cloud = PointCloud(pts, 2);
      break;
    }
    case ShapeKind::fillet_profile: {
      const double rho = spec.rho, leg = spec.length;
      const double total = 2 * leg + kPi * rho / 2;
      if (spec.width == 0) {
        Matrix pts(2, static_cast<Eigen::Index>(N));
        for (std::size_t i = 0; i < N; ++i) {
          auto fp = fillet_at(rho, leg, total * static_cast<double>(i) / (dN - 1));
          pts.col(static_cast<Eigen::Index>(i)) << fp.x, fp.y;
          tans.push_back(frame(vec2(fp.tx, fp.ty)));
        }
        out.cloud = PointCloud(pts, 1);
      } else {
        // Product with [0, width] on a near-square grid of N points or fewer.
        const double h = std::sqrt(total * spec.width / dN);
        std::size_t nc = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(total / h)) + 1);
        std::size_t nw = std::max<std::size_t>(2, N / nc);
        Matrix pts(3, static_cast<Eigen::Index>(nc * nw));
        for (std::size_t a = 0; a < nc; ++a) {
          auto fp = fillet_at(rho, leg, total * static_cast<double>(a) / static_cast<double>(nc - 1));
          for (std::size_t b = 0; b < nw; ++b) {
            double z = spec.width * static_cast<double>(b) / static_cast<double>(nw - 1);
            pts.col(static_cast<Eigen::Index>(a * nw + b)) << fp.x, fp.y, z;
            Matrix tb(3, 2);
            tb.col(0) << fp.tx, fp.ty, 0;
            tb.col(1) << 0, 0, 1;
            tans.push_back(frame(tb));
          }
        }
        out.cloud = PointCloud(pts, 2);
      }
      break;
    }
    case ShapeKind::segment: {
      Matrix pts(2, static_cast<Eigen::Index>(N));
      for (std::size_t i = 0; i < N; ++i) {
        pts.col(static_cast<Eigen::Index>(i)) << spec.length * (static_cast<double>(i) / (dN - 1) - 0.5), 0.0;
        tans.push_back(Subspace::coordinate(2, {0}));
      }
      out.cloud = PointCloud(pts, 1);
      Matrix P = pts;
      out.intrinsic_distance = [P](std::size_t i, std::size_t j) {
        return (P.col(static_cast<Eigen::Index>(i)) - P.col(static_cast<Eigen::Index>(j))).norm();
      };
      break;
    }
    case ShapeKind::plane_patch: {
      Matrix pts(3, static_cast<Eigen::Index>(N));
      for (std::size_t i = 0; i < N; ++i) {
        double jx = unit_jitter(spec.seed, i, 0);
        double jy = unit_jitter(spec.seed, i, 1);
        double x = (static_cast<double>(i) + jx) / dN;
        double t = static_cast<double>(i) * kGolden + (jy - 0.5) / std::sqrt(dN);
        double y = t - std::floor(t);
        pts.col(static_cast<Eigen::Index>(i)) << spec.length * (x - 0.5), spec.length * (y - 0.5), 0.0;
        tans.push_back(Subspace::coordinate(3, {0, 1}));
      }
      out.cloud = PointCloud(pts, 2);
      Matrix P = pts;
      out.intrinsic_distance = [P](std::size_t i, std::size_t j) {
        return (P.col(static_cast<Eigen::Index>(i)) - P.col(static_cast<Eigen::Index>(j))).norm();
      };
      break;
    }
  }
  out.cloud.set_tangents(std::move(tans));
  return out;
}

GroundTruth analytic_ground_truth(const ShapeSpec& s) {
  validate(s);
  GroundTruth gt;
  switch (s.kind) {
    case ShapeKind::circle:
    case ShapeKind::sphere: gt.rch_loc = gt.rch_glob = s.R; break;
    case ShapeKind::ellipse:
      gt.rch_loc = s.b * s.b / s.a;
      gt.rch_glob = s.b;
      break;
    case ShapeKind::torus:
      // Tube curvature 1/r everywhere and 1/(R - r) along the inner
      // equator; diametric pairs across the tube are bottlenecks of
      // half-length r, inner-equator antipodes of half-length R - r.
      gt.rch_loc = std::min(s.r, s.R - s.r);
      gt.rch_glob = std::min(s.r, s.R - s.r);
      break;
    case ShapeKind::two_spheres:
      gt.rch_loc = s.R;
      gt.rch_glob = std::min(s.R, s.g);
      break;
    case ShapeKind::fillet_profile:
      gt.rch_loc = s.rho;
      gt.rch_glob = kInf;
      break;
    case ShapeKind::segment:
    case ShapeKind::plane_patch:
      gt.rch_loc = kInf;
      gt.rch_glob = kInf;
      break;
  }
  gt.rch = std::min(gt.rch_loc, gt.rch_glob);
  gt.tangent_variation_sup = gt.rch_loc == kInf ? 0.0 : 1.0 / gt.rch_loc;
  return gt;
}

OracleReport ground_truth_oracle(const ShapeSpec& spec, const OracleOptions& opts) {
  validate(spec);
  std::vector<double> mult = opts.multipliers;
  if (mult.empty()) mult = is_curve(spec.kind) && spec.width == 0 ? std::vector<double>{2, 4, 8}
                                                                  : std::vector<double>{0.5, 1, 2};
  if (mult.size() != 3) throw std::invalid_argument("oracle needs exactly three densities");
  const std::size_t base = spec.count == 0 ? default_count(spec.kind) : spec.count;

  OracleReport rep;
  auto& fed = rep.sequences["rch"];
  auto& glob = rep.sequences["rch_glob"];
  auto& loc = rep.sequences["rch_loc"];
  for (double m : mult) {
    ShapeSpec s = spec;
    s.count = std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(m * static_cast<double>(base))));
    auto shape = generate(s);
    const PointCloud& c = shape.cloud;
    rep.counts.push_back(c.size());
    double spacing = sample_spacing(c);
    auto graph = build_graph(c, {default_knn(c.intrinsic_dim()), std::nullopt});
    fed.push_back(federer_reach(c).value);
    glob.push_back(global_reach(c, default_global_options(spacing)).value);
    loc.push_back(local_reach(c, graph, default_local_options(c, spacing)).value);
  }

  auto certify = [](const std::vector<double>& e, const char* name, double& value, double& slack) {
    if (e[0] == kInf && e[1] == kInf && e[2] == kInf) {
      value = kInf;
      slack = 0;
      return;
    }
    if (!(e[0] < kInf && e[1] < kInf && e[2] < kInf))
      throw std::runtime_error(std::string("oracle refuses to certify ") + name + ": finite and infinite estimates mix");
    double d1 = std::abs(e[1] - e[0]), d2 = std::abs(e[2] - e[1]);
    if (d2 > d1 + 1e-9 * std::abs(e[2]))
      throw std::runtime_error(std::string("oracle refuses to certify ") + name + ": differences grow with density");
    value = e[2];
    slack = d2;
  };
  certify(fed, "rch", rep.certified.rch, rep.slack.rch);
  certify(glob, "rch_glob", rep.certified.rch_glob, rep.slack.rch_glob);
  certify(loc, "rch_loc", rep.certified.rch_loc, rep.slack.rch_loc);
  rep.certified.tangent_variation_sup = rep.certified.rch_loc == kInf ? 0.0 : 1.0 / rep.certified.rch_loc;
  rep.slack.tangent_variation_sup =
      rep.certified.rch_loc == kInf ? 0.0 : rep.slack.rch_loc / (rep.certified.rch_loc * rep.certified.rch_loc);
  return rep;
}

}  // namespace geomreach
