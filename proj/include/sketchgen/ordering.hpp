#pragma once

#include <cstdint>
#include <vector>

#include "sketchgen/stroke_post.hpp"

namespace sketchgen {

struct StrokeGraphEdge {
  int a = -1, a_end = 0;  // stroke index and endpoint (0 = front, 1 = back)
  int b = -1, b_end = 0;
  double dist = 0.0;
};

struct StrokeGraph {
  int stroke_count = 0;
  std::vector<StrokeGraphEdge> edges;  // deduplicated, sorted by (a, a_end, b, b_end)
};

// Connect each stroke endpoint to its k nearest endpoints on other strokes.
StrokeGraph build_graph(const std::vector<Stroke>& strokes, int k);

struct OrderStats {
  int64_t decisions = 0;         // traversal steps with at least one candidate
  int64_t decisions_multi = 0;   // steps with at least two candidates
  int64_t first_skip_draws = 0;  // multi-candidate steps whose nearest candidate drew a skip
  int64_t nearest_chosen = 0;    // multi-candidate steps that still chose the nearest
  int64_t restarts = 0;          // disconnected components entered
};

// Depth-first traversal of the stroke graph that emits strokes in visit
// order. At each step the unvisited neighbours of the current stroke are
// ranked by edge distance, and each is skipped with probability skip_prob
// until one is accepted (falling back to the nearest when every draw skips).
// Traversal starts at the stroke with the lowest endpoint, ordered by
// (y, x, z); exhausted components restart the same way. Emitted strokes are
// renumbered by rank and oriented head-to-tail: each stroke starts at the
// endpoint nearer its predecessor's tail, and the first starts at its lower
// endpoint. skip_prob 0 makes the order seed-independent.
std::vector<Stroke> order_strokes(const StrokeGraph& graph, const std::vector<Stroke>& strokes,
                                  double skip_prob, uint64_t seed, OrderStats* stats = nullptr);

}  // namespace sketchgen
