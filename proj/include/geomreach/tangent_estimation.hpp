#pragma once

#include <vector>

#include "geomreach/point_cloud.hpp"

namespace geomreach {

// Local PCA: top-n principal directions of the k nearest neighbours
// (k = max(11, 3n) rounded up to odd when 0), centred at their mean.
std::vector<Subspace> estimate_tangents(const PointCloud& cloud, int n, int k = 0);

}  // namespace geomreach
