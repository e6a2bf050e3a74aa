#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchgen/stroke_post.hpp"

namespace sketchgen {

struct PipelineParams {
  int surface_samples = 2048;
  double sharp_threshold_deg = 15.0;
  double salient_spacing = 0.02;
  double link_radius = 0.02;
  int min_seg_len = 12;
  double fit_rms_max = 0.01;
  double cull_cos_dist = 0.04;
  double merge_threshold = 0.02;
  int knn = 3;
  double skip_prob = 0.1;

  bool operator==(const PipelineParams&) const = default;
};

struct SketchMeta {
  std::string mesh_id;
  uint64_t seed = 0;
  PipelineParams params;

  bool operator==(const SketchMeta&) const = default;
};

// A temporally ordered 3D sketch: strokes in drawing order, every stroke a
// polyline of at least 2 points, all coordinates inside [0, 1]^3.
struct Sketch {
  std::vector<Stroke> strokes;
  SketchMeta meta;

  size_t total_points() const;
  bool operator==(const Sketch& o) const;
};

// Raises when the structural invariants above are violated.
void validate_sketch(const Sketch& s, const std::string& context);

nlohmann::json sketch_to_json(const Sketch& s);
Sketch sketch_from_json(const nlohmann::json& j, const std::string& context);

// JSON on disk, schema version 1. Doubles are written with shortest
// round-trip precision and keys are emitted in sorted order, so saving the
// same sketch twice produces byte-identical files and load(save(s)) == s.
void save_sketch(const Sketch& s, const std::string& path);
Sketch load_sketch(const std::string& path);

// Keep the first ceil(keep_fraction * total_points) points in drawing order:
// whole leading strokes, then a prefix of the first stroke that crosses the
// budget. A partial stroke always keeps at least 2 points so the result is a
// valid sketch. keep_fraction must lie in (0, 1].
Sketch truncate(const Sketch& s, double keep_fraction);

}  // namespace sketchgen
