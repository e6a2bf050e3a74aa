#include "sketchgen/procedural.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace sketchgen {

namespace {

// Append `box` geometry into `mesh`, offsetting vertex indices.
void append(TriMesh& mesh, const TriMesh& box) {
  int base = static_cast<int>(mesh.vertices.size());
  mesh.vertices.insert(mesh.vertices.end(), box.vertices.begin(), box.vertices.end());
  for (const auto& f : box.faces)
    mesh.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
}

}  // namespace

TriMesh make_box(const Vec3& center, const Vec3& size) {
  Vec3 h = size * 0.5;
  TriMesh m;
  m.vertices = {
      {center.x - h.x, center.y - h.y, center.z - h.z},  // 0
      {center.x + h.x, center.y - h.y, center.z - h.z},  // 1
      {center.x + h.x, center.y + h.y, center.z - h.z},  // 2
      {center.x - h.x, center.y + h.y, center.z - h.z},  // 3
      {center.x - h.x, center.y - h.y, center.z + h.z},  // 4
      {center.x + h.x, center.y - h.y, center.z + h.z},  // 5
      {center.x + h.x, center.y + h.y, center.z + h.z},  // 6
      {center.x - h.x, center.y + h.y, center.z + h.z},  // 7
  };
  m.faces = {
      {0, 2, 1}, {0, 3, 2},  // -z
      {4, 5, 6}, {4, 6, 7},  // +z
      {0, 1, 5}, {0, 5, 4},  // -y
      {3, 7, 6}, {3, 6, 2},  // +y
      {0, 4, 7}, {0, 7, 3},  // -x
      {1, 2, 6}, {1, 6, 5},  // +x
  };
  m.compute_face_normals();
  return m;
}

TriMesh make_cube() { return make_box({0, 0, 0}, {1, 1, 1}); }

TriMesh make_table() {
  TriMesh m;
  append(m, make_box({0.0, 0.72, 0.0}, {1.2, 0.08, 0.8}));
  double leg_y = 0.34, leg_h = 0.68;
  for (double sx : {-0.5, 0.5})
    for (double sz : {-0.3, 0.3})
      append(m, make_box({sx, leg_y, sz}, {0.08, leg_h, 0.08}));
  m.compute_face_normals();
  return m;
}

TriMesh make_chair() {
  TriMesh m;
  append(m, make_box({0.0, 0.45, 0.0}, {0.5, 0.08, 0.5}));    // seat
  append(m, make_box({0.0, 0.80, -0.21}, {0.5, 0.62, 0.08}));  // backrest
  for (double sx : {-0.2, 0.2})
    for (double sz : {-0.2, 0.2})
      append(m, make_box({sx, 0.205, sz}, {0.06, 0.41, 0.06}));
  append(m, make_box({0.0, 0.20, 0.2}, {0.44, 0.05, 0.04}));  // crossbar
  m.compute_face_normals();
  return m;
}

TriMesh make_icosphere(int subdiv) {
  if (subdiv < 0 || subdiv > 7)
    throw std::invalid_argument("make_icosphere: subdiv out of range [0, 7]");

  double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (auto& v : m.vertices) v = normalized(v);
  m.faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };

  for (int level = 0; level < subdiv; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = static_cast<int>(m.vertices.size());
      m.vertices.push_back(normalized((m.vertices[a] + m.vertices[b]) * 0.5));
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  m.compute_face_normals();
  return m;
}

TriMesh make_named_shape(const std::string& name) {
  if (name == "cube") return make_cube();
  if (name == "table") return make_table();
  if (name == "chair") return make_chair();
  if (name == "icosphere") return make_icosphere(3);
  throw std::invalid_argument("unknown shape '" + name +
                              "' (expected cube, table, chair or icosphere)");
}

}  // namespace sketchgen
