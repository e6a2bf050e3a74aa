#include "sketchgen/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sketchgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFallbackKeepFraction = 0.1;

// Undirected edge -> incident face ids, keyed by (min vertex, max vertex) so
// iteration order is deterministic.
std::map<std::pair<int, int>, std::vector<int>> build_edge_map(const TriMesh& mesh) {
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      auto key = std::minmax(t[k], t[(k + 1) % 3]);
      edges[key].push_back(static_cast<int>(f));
    }
  }
  return edges;
}

}  // namespace

SharpEdgeSet detect_sharp_edges(const TriMesh& mesh, double threshold_deg) {
  if (threshold_deg < 0.0 || threshold_deg > 180.0)
    throw std::invalid_argument("detect_sharp_edges: threshold must be in [0, 180] degrees");
  if (mesh.face_normals.size() != mesh.faces.size())
    throw std::runtime_error("detect_sharp_edges: face normals not computed");

  SharpEdgeSet out;
  for (const auto& [key, faces] : build_edge_map(mesh)) {
    if (faces.size() > 2) {
      ++out.nonmanifold_skipped;
      continue;
    }
    if (faces.size() == 1) {
      ++out.boundary_total;
      out.edges.push_back({key.first, key.second, faces[0], -1, 180.0});
      continue;
    }
    ++out.interior_total;
    double c = std::clamp(dot(mesh.face_normals[faces[0]], mesh.face_normals[faces[1]]),
                          -1.0, 1.0);
    double deviation = std::acos(c) * 180.0 / kPi;
    if (deviation >= threshold_deg)
      out.edges.push_back({key.first, key.second, faces[0], faces[1], deviation});
  }
  return out;
}

SalientCloud sample_salient(const TriMesh& mesh, const SharpEdgeSet& sharp,
                            double spacing, uint64_t seed, int fallback_samples) {
  if (!(spacing > 0.0)) throw std::invalid_argument("sample_salient: spacing must be positive");
  if (fallback_samples < 1)
    throw std::invalid_argument("sample_salient: fallback_samples must be positive");

  SalientCloud cloud;
  if (!sharp.edges.empty()) {
    std::vector<char> vertex_emitted(mesh.vertices.size(), 0);
    auto emit_vertex = [&](int v) {
      if (vertex_emitted[v]) return;
      vertex_emitted[v] = 1;
      cloud.points.push_back(mesh.vertices[v]);
      cloud.provenance.push_back(SalientSource::Corner);
    };
    for (const auto& e : sharp.edges) {
      const Vec3& a = mesh.vertices[e.v0];
      const Vec3& b = mesh.vertices[e.v1];
      emit_vertex(e.v0);
      double len = dist(a, b);
      if (len > 1e-12) {
        // Small epsilon keeps exact multiples of `spacing` from picking up an
        // extra segment through rounding in the division.
        int segments = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
        for (int i = 1; i < segments; ++i) {
          double t = static_cast<double>(i) / segments;
          cloud.points.push_back(a + (b - a) * t);
          cloud.provenance.push_back(SalientSource::EdgeSample);
        }
      }
      emit_vertex(e.v1);
    }
    return cloud;
  }

  // Smooth mesh: no feature lines to sample. Fall back to uniform surface
  // samples ranked by a curvature proxy so the pipeline never runs dry.
  cloud.used_fallback = true;
  auto samples = sample_surface(mesh, fallback_samples, seed);

  std::vector<std::vector<int>> adjacent(mesh.faces.size());
  for (const auto& [key, faces] : build_edge_map(mesh)) {
    (void)key;
    if (faces.size() != 2) continue;
    adjacent[faces[0]].push_back(faces[1]);
    adjacent[faces[1]].push_back(faces[0]);
  }
  std::vector<double> proxy(mesh.faces.size(), 0.0);
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    double min_cos = 1.0;
    for (int g : adjacent[f])
      min_cos = std::min(min_cos, dot(mesh.face_normals[f], mesh.face_normals[g]));
    proxy[f] = 1.0 - min_cos;
  }

  std::vector<int> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return proxy[samples[a].face_id] > proxy[samples[b].face_id];
  });
  size_t keep = std::max<size_t>(1, static_cast<size_t>(samples.size() * kFallbackKeepFraction));
  order.resize(keep);
  std::sort(order.begin(), order.end());

  for (int i : order) {
    cloud.points.push_back(samples[i].position);
    cloud.provenance.push_back(SalientSource::SurfaceFallback);
  }
  return cloud;
}

}  // namespace sketchgen
