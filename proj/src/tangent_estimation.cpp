#include "geomreach/tangent_estimation.hpp"

#include <algorithm>
#include <stdexcept>

#include "geomreach/errors.hpp"
#include "geomreach/kdtree.hpp"
#include "geomreach/parallel.hpp"

namespace geomreach {

std::vector<Subspace> estimate_tangents(const PointCloud& cloud, int n, int k) {
  const int d = cloud.ambient_dim();
  if (n < 1 || n > d) throw DimensionError("tangent dimension must be in [1, d]");
  // Odd k keeps curve neighbourhoods centred on the sample.
  if (k <= 0) k = std::max(11, 3 * n) | 1;
  if (static_cast<std::size_t>(k) > cloud.size())
    throw std::invalid_argument("PCA neighbourhood larger than the cloud");
  KdTree tree(cloud.points());
  std::vector<Subspace> out(cloud.size(), Subspace(d));
  parallel_for(cloud.size(), [&](std::size_t i) {
    auto nb = tree.knn(cloud.point(i).data(), static_cast<std::size_t>(k));
    Matrix pts(d, k);
    for (int j = 0; j < k; ++j) pts.col(j) = cloud.point(nb[static_cast<std::size_t>(j)].second);
    Vector mean = pts.rowwise().mean();
    pts.colwise() -= mean;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(pts * pts.transpose());
    Matrix basis = eig.eigenvectors().rightCols(n).rowwise().reverse();
    // Fix signs so the output does not depend on the eigensolver.
    for (int c = 0; c < n; ++c) {
      Eigen::Index arg;
      basis.col(c).cwiseAbs().maxCoeff(&arg);
      if (basis(arg, c) < 0) basis.col(c) = -basis.col(c);
    }
    out[i] = Subspace::span(basis);
  });
  return out;
}

}  // namespace geomreach
