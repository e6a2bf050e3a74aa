#pragma once

#include <string>

#include "sketchgen/mesh.hpp"

namespace sketchgen {

// Axis-aligned box with outward-facing, consistently wound triangles.
TriMesh make_box(const Vec3& center, const Vec3& size);

// Unit cube centered at the origin (already in canonical normalized pose).
TriMesh make_cube();

// Simple furniture built from axis-aligned boxes: a table (top plus four
// legs) and a chair (seat, backrest, four legs, front crossbar). Both are in
// model units and meant to be run through normalize().
TriMesh make_table();
TriMesh make_chair();

// Icosahedron subdivided `subdiv` times with vertices projected to the unit
// sphere. Smooth everywhere, so it exercises the no-sharp-edges fallback.
TriMesh make_icosphere(int subdiv);

// Lookup by name: cube, table, chair, icosphere. Raises on unknown names.
TriMesh make_named_shape(const std::string& name);

}  // namespace sketchgen
