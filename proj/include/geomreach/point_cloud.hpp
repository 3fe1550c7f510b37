#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "geomreach/linalg.hpp"

namespace geomreach {

// Finite sample of a closed set in R^d, one point per column, with optional
// tangent subspaces and a declared intrinsic dimension (-1 when unknown).
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(Matrix points, int intrinsic_dim = -1);

  int ambient_dim() const { return static_cast<int>(points_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  int intrinsic_dim() const { return intrinsic_; }
  void set_intrinsic_dim(int n);

  const Matrix& points() const { return points_; }
  auto point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

  bool has_tangents() const { return !tangents_.empty(); }
  void set_tangents(std::vector<Subspace> tangents);
  void clear_tangents() { tangents_.clear(); }
  const Subspace& tangent(std::size_t i) const;
  const std::vector<Subspace>& tangents() const { return tangents_; }

  PointCloud subset(const std::vector<std::size_t>& indices) const;
  PointCloud scaled(double s) const;

 private:
  Matrix points_;
  int intrinsic_ = -1;
  std::vector<Subspace> tangents_;
};

// Tangent bases packed point by point (n*d doubles each, basis vectors
// contiguous) for the pairwise sweeps.
struct PackedFrames {
  int d = 0;
  int n = 0;
  std::vector<double> data;
  const double* frame(std::size_t i) const { return data.data() + i * static_cast<std::size_t>(n * d); }
};
PackedFrames pack_tangents(const PointCloud& cloud);

}  // namespace geomreach
