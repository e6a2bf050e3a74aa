#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sketchgen/saliency.hpp"
#include "sketchgen/vec3.hpp"

namespace sketchgen {

struct PolyChain {
  std::vector<Vec3> points;
  int id = -1;
};

// Greedy nearest-neighbour chaining over a salient cloud. Starting from the
// lowest unvisited index, a chain grows from both ends: the next point is the
// nearest unvisited point within link_radius whose step turns by less than
// max_turn_deg relative to the previous step. Singletons are discarded.
std::vector<PolyChain> chain_points(const SalientCloud& cloud, double link_radius,
                                    double max_turn_deg = 60.0);

struct BezierStroke {
  std::array<Vec3, 3> control{};  // quadratic Bezier control points
  std::vector<Vec3> samples;      // evaluated at uniform parameters
  int source_chain = -1;
  bool is_polyline = false;  // undersized split remainder kept as raw points
  double max_residual = 0.0;
  double rms_residual = 0.0;
};

// Least-squares quadratic Bezier through a chain of >= 3 points. Endpoints
// are interpolated exactly; the middle control point is solved in closed form
// and point parameters are refined by Newton reprojection until the solve is
// stationary. Samples are evaluated at the chain's point count.
BezierStroke fit_quadratic(const PolyChain& chain);

struct FitResult {
  std::vector<BezierStroke> strokes;
  std::vector<PolyChain> rejected;  // chains shorter than min_len
};

// Fit every chain with at least min_len points. When a fit's RMS residual
// exceeds rms_max the chain splits at its maximum-deviation point and both
// halves are fit recursively; halves that fall below min_len are kept as raw
// polyline strokes rather than dropped.
FitResult fit_all(const std::vector<PolyChain>& chains, int min_len = 12,
                  double rms_max = 0.01);

}  // namespace sketchgen
