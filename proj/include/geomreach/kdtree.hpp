#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "geomreach/linalg.hpp"

namespace geomreach {

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// Static kd-tree over the columns of a d x N matrix. The matrix must
// outlive the tree.
class KdTree {
 public:
  explicit KdTree(const Matrix& points, std::size_t leaf_size = 16);

  std::size_t size() const { return index_.size(); }

  // k nearest neighbours as (distance, index), ordered by distance then
  // index. skip is left out of the result.
  std::vector<std::pair<double, std::size_t>> knn(const double* q, std::size_t k,
                                                  std::size_t skip = kNoIndex) const;
  // Indices with |x - q| <= r, ascending.
  std::vector<std::size_t> radius(const double* q, double r) const;
  // True if some point other than skip_a, skip_b has |x - q| < r.
  bool any_in_open_ball(const double* q, double r, std::size_t skip_a = kNoIndex,
                        std::size_t skip_b = kNoIndex) const;

 private:
  struct Node {
    std::size_t begin, end;
    int axis;
    double split;
    int left = -1, right = -1;
    std::vector<double> lo, hi;
  };
  int build(std::size_t begin, std::size_t end);
  double box_dist2(const Node& n, const double* q) const;
  double dist2(std::size_t i, const double* q) const;

  const Matrix& pts_;
  int d_;
  std::size_t leaf_;
  std::vector<std::size_t> index_;
  std::vector<Node> nodes_;
};

}  // namespace geomreach
