#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sketchgen/vec3.hpp"

namespace sketchgen {

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> face_normals;  // unit length, one per face

  Aabb bounds() const;
  double face_area(int f) const;
  double total_area() const;
  void compute_face_normals();
};

enum class MeshFormat { Auto, Obj, Off, PlyAscii };

struct MeshLoadStats {
  std::string format;
  size_t vertices_read = 0;
  size_t faces_read = 0;          // triangles after fan triangulation
  size_t degenerate_dropped = 0;  // zero-area faces removed
};

// Parse a mesh from a stream. `name` is used in error messages only.
// Polygonal faces are fan-triangulated; faces with out-of-range vertex
// references raise, zero-area faces are dropped and counted. A mesh with no
// vertices or no surviving faces raises.
TriMesh parse_obj(std::istream& in, const std::string& name, MeshLoadStats* stats = nullptr);
TriMesh parse_off(std::istream& in, const std::string& name, MeshLoadStats* stats = nullptr);
TriMesh parse_ply_ascii(std::istream& in, const std::string& name, MeshLoadStats* stats = nullptr);

// Load from disk, detecting the format from the extension (or the OFF/ply
// magic) when `fmt` is Auto.
TriMesh load_mesh(const std::string& path, MeshFormat fmt = MeshFormat::Auto,
                  MeshLoadStats* stats = nullptr);

void save_obj(const TriMesh& mesh, const std::string& path);

// Uniformly rescale and translate so the bounding box is centered at the
// origin with longest side exactly 1. A mesh already in that pose is returned
// unchanged, so the operation is idempotent. Raises on zero spatial extent.
TriMesh normalize(const TriMesh& mesh);

bool is_normalized(const TriMesh& mesh, double tol = 1e-9);

struct SurfaceSample {
  Vec3 position;
  Vec3 normal;
  int face_id = -1;
};

// n points distributed uniformly by area: faces chosen by cumulative-area
// inversion, positions by uniform barycentric coordinates (reflection trick).
// Identical seeds give identical samples.
std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, int n, uint64_t seed);

}  // namespace sketchgen
