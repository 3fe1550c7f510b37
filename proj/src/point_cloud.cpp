#include "geomreach/point_cloud.hpp"

#include <stdexcept>
#include <string>

#include "geomreach/errors.hpp"

namespace geomreach {

PointCloud::PointCloud(Matrix points, int intrinsic_dim) : points_(std::move(points)) {
  if (!points_.allFinite()) throw std::invalid_argument("point coordinates must be finite");
  set_intrinsic_dim(intrinsic_dim);
}

void PointCloud::set_intrinsic_dim(int n) {
  if (n < -1 || n > ambient_dim()) throw DimensionError("intrinsic dimension out of range");
  intrinsic_ = n;
}

void PointCloud::set_tangents(std::vector<Subspace> tangents) {
  if (tangents.size() != size())
    throw DimensionError("expected " + std::to_string(size()) + " tangents, got " +
                         std::to_string(tangents.size()));
  int n = tangents.empty() ? intrinsic_ : tangents.front().dim();
  for (const auto& t : tangents) {
    if (t.ambient_dim() != ambient_dim()) throw DimensionError("tangent ambient dimension mismatch");
    if (t.dim() != n) throw DimensionError("tangents of different dimensions");
  }
  if (intrinsic_ >= 0 && n != intrinsic_)
    throw DimensionError("tangent dimension differs from declared intrinsic dimension");
  if (!tangents.empty()) intrinsic_ = n;
  tangents_ = std::move(tangents);
}

const Subspace& PointCloud::tangent(std::size_t i) const {
  if (tangents_.empty()) throw std::invalid_argument("point cloud has no tangents");
  return tangents_.at(i);
}

PointCloud PointCloud::subset(const std::vector<std::size_t>& indices) const {
  Matrix pts(ambient_dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) pts.col(static_cast<Eigen::Index>(j)) = point(indices[j]);
  PointCloud out(std::move(pts), intrinsic_);
  if (has_tangents()) {
    std::vector<Subspace> t;
    t.reserve(indices.size());
    for (auto i : indices) t.push_back(tangents_.at(i));
    out.tangents_ = std::move(t);
  }
  return out;
}

PointCloud PointCloud::scaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("scale factor must be positive");
  PointCloud out(points_ * s, intrinsic_);
  out.tangents_ = tangents_;
  return out;
}

PackedFrames pack_tangents(const PointCloud& cloud) {
  PackedFrames f;
  f.d = cloud.ambient_dim();
  f.n = cloud.intrinsic_dim();
  if (!cloud.has_tangents()) throw std::invalid_argument("tangent subspace required at every point");
  const std::size_t stride = static_cast<std::size_t>(f.n * f.d);
  f.data.resize(stride * cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Matrix& b = cloud.tangent(i).basis();
    for (int k = 0; k < f.n; ++k)
      for (int c = 0; c < f.d; ++c) f.data[i * stride + static_cast<std::size_t>(k * f.d + c)] = b(c, k);
  }
  return f;
}

}  // namespace geomreach
