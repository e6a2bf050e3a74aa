#include "sketchgen/ordering.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "sketchgen/kdtree.hpp"
#include "sketchgen/rng.hpp"

namespace sketchgen {

namespace {

// Endpoint sort key: lowest first, ties broken on x then z.
std::tuple<double, double, double> height_key(const Vec3& p) { return {p.y, p.x, p.z}; }

std::tuple<double, double, double> stroke_key(const Stroke& s) {
  return std::min(height_key(s.points.front()), height_key(s.points.back()));
}

}  // namespace

StrokeGraph build_graph(const std::vector<Stroke>& strokes, int k) {
  if (k < 1) throw std::invalid_argument("build_graph: k must be at least 1");
  for (const auto& s : strokes)
    if (s.points.size() < 2)
      throw std::invalid_argument("build_graph: stroke needs >= 2 points");

  StrokeGraph g;
  g.stroke_count = static_cast<int>(strokes.size());
  if (strokes.size() < 2) return g;

  std::vector<Vec3> endpoints(strokes.size() * 2);
  for (size_t i = 0; i < strokes.size(); ++i) {
    endpoints[i * 2] = strokes[i].points.front();
    endpoints[i * 2 + 1] = strokes[i].points.back();
  }
  KdTree3 tree(endpoints);

  std::map<std::tuple<int, int, int, int>, double> edges;
  for (int e = 0; e < static_cast<int>(endpoints.size()); ++e) {
    int stroke = e / 2;
    auto hits = tree.knn(endpoints[e], k, [&](int other) { return other / 2 != stroke; });
    for (const auto& [d2, other] : hits) {
      int a = stroke, a_end = e % 2, b = other / 2, b_end = other % 2;
      if (std::tie(b, b_end) < std::tie(a, a_end)) {
        std::swap(a, b);
        std::swap(a_end, b_end);
      }
      edges.emplace(std::make_tuple(a, a_end, b, b_end), std::sqrt(d2));
    }
  }
  for (const auto& [key, d] : edges)
    g.edges.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key),
                       std::get<3>(key), d});
  return g;
}

std::vector<Stroke> order_strokes(const StrokeGraph& graph, const std::vector<Stroke>& strokes,
                                  double skip_prob, uint64_t seed, OrderStats* stats) {
  if (skip_prob < 0.0 || skip_prob >= 1.0)
    throw std::invalid_argument("order_strokes: skip_prob must be in [0, 1)");
  if (graph.stroke_count != static_cast<int>(strokes.size()))
    throw std::invalid_argument("order_strokes: graph/stroke count mismatch");

  int m = static_cast<int>(strokes.size());
  // Neighbour lists keep the closest link between each stroke pair.
  std::vector<std::map<int, double>> closest(m);
  for (const auto& e : graph.edges) {
    auto upd = [&](int a, int b, double d) {
      auto [it, fresh] = closest[a].emplace(b, d);
      if (!fresh && d < it->second) it->second = d;
    };
    upd(e.a, e.b, e.dist);
    upd(e.b, e.a, e.dist);
  }
  std::vector<std::vector<std::pair<double, int>>> neighbours(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [j, d] : closest[i]) neighbours[i].push_back({d, j});
    std::sort(neighbours[i].begin(), neighbours[i].end());
  }

  Rng rng(seed);
  OrderStats local;
  std::vector<char> visited(m, 0);
  std::vector<int> order;
  order.reserve(m);

  int remaining = m;
  while (remaining > 0) {
    // Start (or restart) at the unvisited stroke with the lowest endpoint.
    int start = -1;
    for (int i = 0; i < m; ++i)
      if (!visited[i] && (start < 0 || stroke_key(strokes[i]) < stroke_key(strokes[start])))
        start = i;
    ++local.restarts;
    visited[start] = 1;
    order.push_back(start);
    --remaining;

    std::vector<int> stack{start};
    while (!stack.empty()) {
      int cur = stack.back();
      std::vector<std::pair<double, int>> cands;
      for (const auto& [d, j] : neighbours[cur])
        if (!visited[j]) cands.push_back({d, j});
      if (cands.empty()) {
        stack.pop_back();
        continue;
      }

      ++local.decisions;
      if (cands.size() >= 2) ++local.decisions_multi;
      int chosen = -1;
      for (size_t c = 0; c < cands.size(); ++c) {
        bool skip = rng.bernoulli(skip_prob);
        if (c == 0 && cands.size() >= 2 && skip) ++local.first_skip_draws;
        if (!skip) {
          chosen = cands[c].second;
          break;
        }
      }
      if (chosen < 0) chosen = cands[0].second;  // every draw skipped
      if (cands.size() >= 2 && chosen == cands[0].second) ++local.nearest_chosen;

      visited[chosen] = 1;
      order.push_back(chosen);
      --remaining;
      stack.push_back(chosen);
    }
  }

  // Orient head-to-tail along the emitted order.
  std::vector<Stroke> out;
  out.reserve(m);
  for (size_t r = 0; r < order.size(); ++r) {
    Stroke s = strokes[order[r]];
    bool flip;
    if (r == 0) {
      flip = height_key(s.points.back()) < height_key(s.points.front());
    } else {
      const Vec3& prev_tail = out.back().points.back();
      flip = dist2(prev_tail, s.points.back()) < dist2(prev_tail, s.points.front());
    }
    if (flip) std::reverse(s.points.begin(), s.points.end());
    s.id = static_cast<int>(r);
    out.push_back(std::move(s));
  }

  if (stats) *stats = local;
  return out;
}

}  // namespace sketchgen
