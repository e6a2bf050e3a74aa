#include "sketchgen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "sketchgen/rng.hpp"
#include "sketchgen/saliency.hpp"
#include "sketchgen/spline.hpp"
#include "sketchgen/stroke_post.hpp"

namespace sketchgen {

Sketch generate_sketch(const TriMesh& mesh, const std::string& mesh_id,
                       const PipelineParams& params, uint64_t seed, PipelineDiag* diag) {
  auto t0 = std::chrono::steady_clock::now();
  PipelineDiag d;

  TriMesh norm = normalize(mesh);

  SharpEdgeSet sharp = detect_sharp_edges(norm, params.sharp_threshold_deg);
  d.sharp_edges = sharp.edges.size();
  d.boundary_edges = sharp.boundary_total;
  d.nonmanifold_skipped = sharp.nonmanifold_skipped;

  SalientCloud cloud = sample_salient(norm, sharp, params.salient_spacing,
                                      mix_seed(seed, fnv1a64("salient")), params.surface_samples);
  d.salient_fallback = cloud.used_fallback;
  d.salient_points = cloud.points.size();

  std::vector<PolyChain> chains = chain_points(cloud, params.link_radius);
  d.chains = chains.size();

  FitResult fit = fit_all(chains, params.min_seg_len, params.fit_rms_max);
  d.chains_rejected = fit.rejected.size();

  std::vector<Stroke> strokes;
  for (const auto& b : fit.strokes) {
    if (b.is_polyline) ++d.polyline_strokes;
    else ++d.fitted_strokes;
    Stroke s;
    s.id = static_cast<int>(strokes.size());
    s.points = b.samples;
    strokes.push_back(std::move(s));
  }
  if (strokes.empty()) {
    // Nothing survived the length gate (smooth meshes with scattered
    // fallback clouds); keep the raw chains so the sketch is never empty.
    for (const auto& chain : fit.rejected) {
      if (chain.points.size() < 2) continue;
      Stroke s;
      s.id = static_cast<int>(strokes.size());
      s.points = chain.points;
      strokes.push_back(std::move(s));
    }
  }
  if (strokes.empty())
    throw std::runtime_error("generate_sketch(" + mesh_id +
                             "): no strokes could be formed from the salient cloud");

  for (const auto& s : strokes) d.points_before_cull += s.points.size();
  std::vector<Stroke> culled = cull_all(strokes, params.cull_cos_dist);
  for (const auto& s : culled) d.points_after_cull += s.points.size();

  d.strokes_before_merge = culled.size();
  std::vector<Stroke> merged = merge_strokes(std::move(culled), params.merge_threshold);
  d.strokes_after_merge = merged.size();

  StrokeGraph graph = build_graph(merged, params.knn);
  std::vector<Stroke> ordered =
      order_strokes(graph, merged, params.skip_prob, mix_seed(seed, fnv1a64("order")), &d.order);

  // The normalized mesh occupies [-1/2, 1/2]^3; shift into the sketch cube.
  // Clamping absorbs the odd last-ulp excursion from the scale multiply.
  Sketch sketch;
  for (auto& s : ordered) {
    for (auto& p : s.points)
      for (int k = 0; k < 3; ++k) p[k] = std::clamp(p[k] + 0.5, 0.0, 1.0);
    sketch.strokes.push_back(std::move(s));
  }
  sketch.meta.mesh_id = mesh_id;
  sketch.meta.seed = seed;
  sketch.meta.params = params;
  validate_sketch(sketch, "generate_sketch(" + mesh_id + ")");

  d.ms_total = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (diag) *diag = d;
  return sketch;
}

}  // namespace sketchgen
