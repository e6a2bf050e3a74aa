#include "sketchgen/stroke_post.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace sketchgen {

namespace {

constexpr double kJunctionEps = 1e-9;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

Vec3 endpoint(const Stroke& s, int end) { return end == 0 ? s.points.front() : s.points.back(); }

// Append `src` to `dst`, walking src forward when from_end == 0 and backward
// otherwise, dropping the lead point when it coincides with dst's tail.
void append_oriented(std::vector<Vec3>& dst, const std::vector<Vec3>& src, int from_end) {
  size_t n = src.size();
  for (size_t k = 0; k < n; ++k) {
    const Vec3& p = from_end == 0 ? src[k] : src[n - 1 - k];
    if (k == 0 && !dst.empty() && dist(dst.back(), p) < kJunctionEps) continue;
    dst.push_back(p);
  }
}

}  // namespace

Stroke cull_collinear(const Stroke& stroke, double cos_dist_threshold) {
  if (cos_dist_threshold < 0.0)
    throw std::invalid_argument("cull_collinear: threshold must be non-negative");
  const auto& p = stroke.points;
  if (p.size() < 2) throw std::invalid_argument("cull_collinear: stroke needs >= 2 points");

  Stroke out;
  out.id = stroke.id;
  out.points.push_back(p.front());
  for (size_t i = 1; i + 1 < p.size(); ++i) {
    Vec3 incoming = p[i] - out.points.back();
    Vec3 outgoing = p[i + 1] - p[i];
    double cos_dist = 1.0 - cos_angle(incoming, outgoing);
    if (cos_dist >= cos_dist_threshold) out.points.push_back(p[i]);
  }
  out.points.push_back(p.back());
  return out;
}

std::vector<Stroke> cull_all(const std::vector<Stroke>& strokes, double cos_dist_threshold) {
  std::vector<Stroke> out(strokes.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(strokes.size()); ++i)
    out[i] = cull_collinear(strokes[i], cos_dist_threshold);
  return out;
}

std::vector<Stroke> merge_strokes(std::vector<Stroke> strokes, double endpoint_threshold) {
  if (endpoint_threshold < 0.0)
    throw std::invalid_argument("merge_strokes: threshold must be non-negative");
  for (const auto& s : strokes)
    if (s.points.size() < 2)
      throw std::invalid_argument("merge_strokes: stroke needs >= 2 points");

  while (true) {
    int m = static_cast<int>(strokes.size());

    // Candidate endpoint pairs within threshold, closest first; ties resolve
    // on indices so the pass is deterministic.
    struct Pair {
      double d;
      int i, ei, j, ej;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < m; ++i)
      for (int ei = 0; ei < 2; ++ei)
        for (int j = i + 1; j < m; ++j)
          for (int ej = 0; ej < 2; ++ej) {
            double d = dist(endpoint(strokes[i], ei), endpoint(strokes[j], ej));
            if (d <= endpoint_threshold) pairs.push_back({d, i, ei, j, ej});
          }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      return std::tie(a.d, a.i, a.ei, a.j, a.ej) < std::tie(b.d, b.i, b.ei, b.j, b.ej);
    });

    // Greedy acceptance: one join per stroke end, no cycles.
    std::vector<std::array<int, 2>> join(m, {-1, -1});      // packed (stroke*2+end) or -1
    std::vector<std::array<bool, 2>> used(m, {false, false});
    UnionFind uf(m);
    int accepted = 0;
    for (const auto& p : pairs) {
      if (used[p.i][p.ei] || used[p.j][p.ej]) continue;
      if (!uf.unite(p.i, p.j)) continue;
      used[p.i][p.ei] = used[p.j][p.ej] = true;
      join[p.i][p.ei] = p.j * 2 + p.ej;
      join[p.j][p.ej] = p.i * 2 + p.ei;
      ++accepted;
    }
    if (accepted == 0) break;

    // Assemble each component by walking its join path from the
    // smallest-index terminal stroke.
    std::vector<char> consumed(m, 0);
    std::vector<Stroke> next;
    for (int i = 0; i < m; ++i) {
      if (consumed[i]) continue;
      int joins = (join[i][0] >= 0) + (join[i][1] >= 0);
      if (joins == 2) continue;  // interior of a path; a terminal will pick it up
      consumed[i] = 1;
      if (joins == 0) {
        Stroke s = strokes[i];
        s.id = static_cast<int>(next.size());
        next.push_back(std::move(s));
        continue;
      }
      int exit_end = join[i][0] >= 0 ? 0 : 1;
      Stroke merged;
      merged.id = static_cast<int>(next.size());
      // Start at the free end so the walk leaves through the joined one.
      append_oriented(merged.points, strokes[i].points, 1 - exit_end);
      int link = join[i][exit_end];
      while (link >= 0) {
        int cur = link / 2, entry = link % 2;
        consumed[cur] = 1;
        append_oriented(merged.points, strokes[cur].points, entry);
        link = join[cur][1 - entry];
      }
      next.push_back(std::move(merged));
    }
    strokes = std::move(next);
  }

  for (int i = 0; i < static_cast<int>(strokes.size()); ++i) strokes[i].id = i;
  return strokes;
}

}  // namespace sketchgen
