#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "sketchgen/vec3.hpp"

namespace sketchgen {

// Exact 3D nearest-neighbour tree. Queries evaluate candidate distances with
// the same dist2() used by brute-force scans, and pruning only ever discards
// points that cannot beat the current best, so query results agree with a
// brute-force scan bit for bit. Ties are broken toward the lower point index.
// Queries are const and safe to issue from multiple threads.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(std::vector<Vec3> points) : pts_(std::move(points)) {
    if (pts_.empty()) return;
    std::vector<int> order(pts_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    nodes_.reserve(pts_.size());
    root_ = build(order, 0, static_cast<int>(order.size()));
  }

  size_t size() const { return pts_.size(); }
  const std::vector<Vec3>& points() const { return pts_; }

  // Index and squared distance of the nearest point; {-1, inf} when empty.
  std::pair<int, double> nearest(const Vec3& q) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::max();
    if (root_ >= 0) nearest_rec(root_, q, best, best_d2);
    return {best, best_d2};
  }

  // k nearest points passing `accept`, sorted by (squared distance, index).
  template <typename Accept>
  std::vector<std::pair<double, int>> knn(const Vec3& q, int k, Accept accept) const {
    std::vector<std::pair<double, int>> heap;
    if (root_ >= 0 && k > 0) knn_rec(root_, q, k, accept, heap);
    std::sort(heap.begin(), heap.end());
    return heap;
  }

  std::vector<std::pair<double, int>> knn(const Vec3& q, int k) const {
    return knn(q, k, [](int) { return true; });
  }

  // Indices of all points with dist(q, p) <= r, sorted by index.
  std::vector<int> radius(const Vec3& q, double r) const {
    std::vector<int> out;
    if (root_ >= 0 && r >= 0.0) radius_rec(root_, q, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Node {
    int point = -1;
    int left = -1, right = -1;
    uint8_t axis = 0;
  };

  int build(std::vector<int>& order, int b, int e) {
    if (b >= e) return -1;
    Aabb box;
    for (int i = b; i < e; ++i) box.expand(pts_[order[i]]);
    Vec3 ext = box.extent();
    uint8_t axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    int mid = b + (e - b) / 2;
    std::nth_element(order.begin() + b, order.begin() + mid, order.begin() + e,
                     [&](int a, int c) {
                       double pa = pts_[a][axis], pc = pts_[c][axis];
                       return pa < pc || (pa == pc && a < c);
                     });
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({order[mid], -1, -1, axis});
    int left = build(order, b, mid);
    int right = build(order, mid + 1, e);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void nearest_rec(int ni, const Vec3& q, int& best, double& best_d2) const {
    const Node& n = nodes_[ni];
    double d2 = dist2(q, pts_[n.point]);
    if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
      best_d2 = d2;
      best = n.point;
    }
    double delta = q[n.axis] - pts_[n.point][n.axis];
    int first = delta < 0.0 ? n.left : n.right;
    int second = delta < 0.0 ? n.right : n.left;
    if (first >= 0) nearest_rec(first, q, best, best_d2);
    if (second >= 0 && delta * delta <= best_d2) nearest_rec(second, q, best, best_d2);
  }

  template <typename Accept>
  void knn_rec(int ni, const Vec3& q, int k, Accept& accept,
               std::vector<std::pair<double, int>>& heap) const {
    const Node& n = nodes_[ni];
    if (accept(n.point)) {
      double d2 = dist2(q, pts_[n.point]);
      std::pair<double, int> cand{d2, n.point};
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    double delta = q[n.axis] - pts_[n.point][n.axis];
    int first = delta < 0.0 ? n.left : n.right;
    int second = delta < 0.0 ? n.right : n.left;
    if (first >= 0) knn_rec(first, q, k, accept, heap);
    bool full = static_cast<int>(heap.size()) >= k;
    if (second >= 0 && (!full || delta * delta <= heap.front().first))
      knn_rec(second, q, k, accept, heap);
  }

  void radius_rec(int ni, const Vec3& q, double r2, std::vector<int>& out) const {
    const Node& n = nodes_[ni];
    if (dist2(q, pts_[n.point]) <= r2) out.push_back(n.point);
    double delta = q[n.axis] - pts_[n.point][n.axis];
    int first = delta < 0.0 ? n.left : n.right;
    int second = delta < 0.0 ? n.right : n.left;
    if (first >= 0) radius_rec(first, q, r2, out);
    if (second >= 0 && delta * delta <= r2) radius_rec(second, q, r2, out);
  }

  std::vector<Vec3> pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace sketchgen
