#pragma once

#include <cstdint>
#include <string>

#include "sketchgen/mesh.hpp"
#include "sketchgen/ordering.hpp"
#include "sketchgen/sketch.hpp"

namespace sketchgen {

struct PipelineDiag {
  size_t sharp_edges = 0;
  size_t boundary_edges = 0;
  size_t nonmanifold_skipped = 0;
  bool salient_fallback = false;
  size_t salient_points = 0;
  size_t chains = 0;
  size_t chains_rejected = 0;
  size_t fitted_strokes = 0;
  size_t polyline_strokes = 0;
  size_t points_before_cull = 0;
  size_t points_after_cull = 0;
  size_t strokes_before_merge = 0;
  size_t strokes_after_merge = 0;
  OrderStats order;
  double ms_total = 0.0;
};

// Full mesh-to-sketch conversion: normalize, detect sharp edges, sample
// salient points, chain, fit, cull, merge, order, then shift into [0, 1]^3.
// All randomness derives from `seed`, so equal inputs give equal sketches.
Sketch generate_sketch(const TriMesh& mesh, const std::string& mesh_id,
                       const PipelineParams& params, uint64_t seed,
                       PipelineDiag* diag = nullptr);

}  // namespace sketchgen
