#pragma once

#include <vector>

#include "sketchgen/vec3.hpp"

namespace sketchgen {

struct Stroke {
  std::vector<Vec3> points;  // ordered polyline, at least 2 points
  int id = 0;
};

// Remove interior points that barely turn: sweeping left to right, a point
// survives only when the direction from the previous survivor to it, against
// the direction onward to the next point, has cosine distance (1 - cos angle)
// of at least `cos_dist_threshold`. Endpoints always survive.
Stroke cull_collinear(const Stroke& stroke, double cos_dist_threshold);

// cull_collinear over every stroke, parallelized per stroke.
std::vector<Stroke> cull_all(const std::vector<Stroke>& strokes, double cos_dist_threshold);

// Join strokes whose endpoints lie within `endpoint_threshold` of each other.
// Candidate endpoint pairs are processed closest first; each stroke end joins
// at most once per round and joins that would close a cycle are rejected.
// Accepted joins are concatenated into single polylines (coincident junction
// points within 1e-9 are deduplicated) and rounds repeat until nothing moves.
// Resulting strokes are renumbered 0..n-1.
std::vector<Stroke> merge_strokes(std::vector<Stroke> strokes, double endpoint_threshold);

}  // namespace sketchgen
