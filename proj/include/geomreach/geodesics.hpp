#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "geomreach/linalg.hpp"
#include "geomreach/point_cloud.hpp"

namespace geomreach {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct GraphParams {
  std::optional<int> k;          // symmetric k-NN graph
  std::optional<double> radius;  // closed-ball radius graph
};

// Default neighbour count for intrinsic dimension n.
int default_knn(int intrinsic_dim);

struct Edge {
  std::size_t to;
  double length;
};

// Symmetric neighbourhood graph with Euclidean edge lengths.
class GeodesicGraph {
 public:
  std::size_t size() const { return adj_.size(); }
  const std::vector<Edge>& neighbors(std::size_t i) const { return adj_[i]; }
  int component(std::size_t i) const { return comp_[i]; }
  int component_count() const { return ncomp_; }
  const GraphParams& params() const { return params_; }
  const Matrix& coordinates() const { return coords_; }
  std::size_t edge_count() const;

 private:
  friend GeodesicGraph build_graph(const PointCloud&, const GraphParams&);
  friend GeodesicGraph induced_subgraph(const GeodesicGraph&, const std::vector<std::size_t>&);
  void label_components();

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> comp_;
  int ncomp_ = 0;
  GraphParams params_;
  Matrix coords_;
};

// With neither k nor radius set, k = default_knn(intrinsic dimension).
GeodesicGraph build_graph(const PointCloud& cloud, const GraphParams& params);
// Graph on the listed nodes (renumbered in the given order) keeping only
// edges between them.
GeodesicGraph induced_subgraph(const GeodesicGraph& g, const std::vector<std::size_t>& nodes);

// Dijkstra distances from source; kInf where unreachable. With a finite
// cutoff, nodes farther than cutoff may be reported as kInf.
std::vector<double> distances_from(const GeodesicGraph& g, std::size_t source, double cutoff = kInf);

// Ordered sample of a curve: vertices, cumulative arc length and unit edge
// directions.
struct Polyline {
  std::vector<std::size_t> nodes;  // graph indices, empty for raw polylines
  Matrix points;                   // d x m
  std::vector<double> arc;         // m entries, arc[0] = 0
  Matrix directions;               // d x (m - 1)

  std::size_t vertex_count() const { return static_cast<std::size_t>(points.cols()); }
  double length() const { return arc.empty() ? 0.0 : arc.back(); }
};

Polyline make_polyline(const Matrix& points, std::vector<std::size_t> nodes = {});

struct PathResult {
  double length = kInf;
  Polyline path;  // empty when disconnected
};
PathResult shortest_path(const GeodesicGraph& g, std::size_t a, std::size_t b);

struct ChordBoundOptions {
  // Relative slack on the direction-Lipschitz hypothesis, absorbing the
  // chord-versus-arc gap of inscribed polylines.
  double hypothesis_rel_tol = 1e-3;
  double tol = 0.0;
};

struct ChordBoundVerdict {
  bool hypothesis_holds = false;
  double hypothesis_worst_ratio = 0;  // max angle * R / parameter gap
  std::size_t hyp_i = 0, hyp_j = 0;   // edges attaining it
  bool bound_holds = false;
  double min_slack = kInf;            // min |q-p| - 2R sin(l/2R) over sub-arcs
  std::size_t slack_i = 0, slack_j = 0;
  // What the statement asserts: hypothesis false, or bound true.
  bool consistent() const { return !hypothesis_holds || bound_holds; }
};

// Checks every sub-arc between vertices. Throws HypothesisError when the
// whole polyline is longer than 2*pi*R. R = inf compares against straight
// segments.
ChordBoundVerdict chord_bound_check(const Polyline& gamma, double R, const ChordBoundOptions& opts = {});

struct TangentVariation {
  double ratio = 0;
  std::size_t i = 0, j = 0;  // vertex positions along the polyline
};
TangentVariation geodesic_tangent_variation(const Polyline& gamma, const std::vector<Subspace>& tangents);

}  // namespace geomreach
