#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchgen/mesh.hpp"

namespace sketchgen {

struct SharpEdge {
  int v0 = -1, v1 = -1;  // vertex indices, v0 < v1
  int f0 = -1, f1 = -1;  // adjacent faces; f1 = -1 for boundary edges
  double deviation_deg = 0.0;
};

struct SharpEdgeSet {
  std::vector<SharpEdge> edges;  // sorted by (v0, v1)
  size_t interior_total = 0;     // interior manifold edges examined
  size_t boundary_total = 0;
  size_t nonmanifold_skipped = 0;  // edges with > 2 incident faces
};

// Classify every mesh edge. An interior edge is sharp when the angle between
// its two face normals (deviation from planarity) is >= threshold_deg;
// boundary edges are always sharp (deviation reported as 180). Edges with
// more than two incident faces are skipped and counted.
SharpEdgeSet detect_sharp_edges(const TriMesh& mesh, double threshold_deg);

enum class SalientSource : uint8_t { EdgeSample, Corner, SurfaceFallback };

struct SalientCloud {
  std::vector<Vec3> points;
  std::vector<SalientSource> provenance;  // parallel to points
  bool used_fallback = false;
};

// Point cloud concentrated on feature lines: each sharp edge is covered by
// points spaced at most `spacing` apart including both endpoints (endpoints
// are emitted once per vertex and tagged Corner). A mesh with no sharp edges
// falls back to `fallback_samples` uniform surface samples ranked by a local
// curvature proxy (one minus the minimum normal agreement among face
// neighbours), keeping the top 10%, so downstream stages always have input.
SalientCloud sample_salient(const TriMesh& mesh, const SharpEdgeSet& sharp,
                            double spacing, uint64_t seed, int fallback_samples = 2048);

}  // namespace sketchgen
