#include "geomreach/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace geomreach {

KdTree::KdTree(const Matrix& points, std::size_t leaf_size)
    : pts_(points), d_(static_cast<int>(points.rows())), leaf_(std::max<std::size_t>(leaf_size, 1)) {
  index_.resize(static_cast<std::size_t>(points.cols()));
  for (std::size_t i = 0; i < index_.size(); ++i) index_[i] = i;
  if (!index_.empty()) build(0, index_.size());
}

int KdTree::build(std::size_t begin, std::size_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.axis = -1;
  node.split = 0;
  node.lo.assign(d_, std::numeric_limits<double>::infinity());
  node.hi.assign(d_, -std::numeric_limits<double>::infinity());
  for (std::size_t k = begin; k < end; ++k)
    for (int c = 0; c < d_; ++c) {
      double v = pts_(c, static_cast<Eigen::Index>(index_[k]));
      node.lo[c] = std::min(node.lo[c], v);
      node.hi[c] = std::max(node.hi[c], v);
    }
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_) return id;

  int axis = 0;
  double widest = -1;
  for (int c = 0; c < d_; ++c)
    if (node.hi[c] - node.lo[c] > widest) {
      widest = node.hi[c] - node.lo[c];
      axis = c;
    }
  if (widest <= 0) return id;  // all points coincide
  std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(index_.begin() + static_cast<std::ptrdiff_t>(begin), index_.begin() + static_cast<std::ptrdiff_t>(mid),
                   index_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                     double va = pts_(axis, static_cast<Eigen::Index>(a));
                     double vb = pts_(axis, static_cast<Eigen::Index>(b));
                     return va < vb || (va == vb && a < b);
                   });
  int left = build(begin, mid);
  int right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = pts_(axis, static_cast<Eigen::Index>(index_[mid]));
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double KdTree::dist2(std::size_t i, const double* q) const {
  const double* p = pts_.data() + i * static_cast<std::size_t>(d_);
  double s = 0;
  for (int c = 0; c < d_; ++c) {
    double t = p[c] - q[c];
    s += t * t;
  }
  return s;
}

double KdTree::box_dist2(const Node& n, const double* q) const {
  double s = 0;
  for (int c = 0; c < d_; ++c) {
    double t = 0;
    if (q[c] < n.lo[c])
      t = n.lo[c] - q[c];
    else if (q[c] > n.hi[c])
      t = q[c] - n.hi[c];
    s += t * t;
  }
  return s;
}

std::vector<std::pair<double, std::size_t>> KdTree::knn(const double* q, std::size_t k, std::size_t skip) const {
  std::vector<std::pair<double, std::size_t>> heap;  // max-heap on (d2, index)
  if (k == 0 || nodes_.empty()) return heap;
  auto consider = [&](std::size_t i) {
    if (i == skip) return;
    std::pair<double, std::size_t> cand{dist2(i, q), i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  };
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (heap.size() == k && box_dist2(n, q) > heap.front().first) continue;
    if (n.left < 0) {
      for (std::size_t j = n.begin; j < n.end; ++j) consider(index_[j]);
      continue;
    }
    bool go_left_first = q[n.axis] < n.split;
    int first = go_left_first ? n.left : n.right;
    int second = go_left_first ? n.right : n.left;
    stack.push_back(second);
    stack.push_back(first);
  }
  std::sort(heap.begin(), heap.end());
  for (auto& h : heap) h.first = std::sqrt(h.first);
  return heap;
}

std::vector<std::size_t> KdTree::radius(const double* q, double r) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || r < 0) return out;
  const double r2 = r * r;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (box_dist2(n, q) > r2) continue;
    if (n.left < 0) {
      for (std::size_t j = n.begin; j < n.end; ++j)
        if (dist2(index_[j], q) <= r2) out.push_back(index_[j]);
      continue;
    }
    stack.push_back(n.left);
    stack.push_back(n.right);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool KdTree::any_in_open_ball(const double* q, double r, std::size_t skip_a, std::size_t skip_b) const {
  if (nodes_.empty() || r <= 0) return false;
  const double r2 = r * r;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (box_dist2(n, q) >= r2) continue;
    if (n.left < 0) {
      for (std::size_t j = n.begin; j < n.end; ++j) {
        std::size_t i = index_[j];
        if (i != skip_a && i != skip_b && dist2(i, q) < r2) return true;
      }
      continue;
    }
    bool left_first = q[n.axis] < n.split;
    stack.push_back(left_first ? n.right : n.left);
    stack.push_back(left_first ? n.left : n.right);
  }
  return false;
}

}  // namespace geomreach
