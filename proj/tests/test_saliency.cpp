#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sketchgen/procedural.hpp"
#include "sketchgen/saliency.hpp"
#include "test_support.hpp"

using namespace sketchgen;

namespace {

// Two triangles sharing the edge (0,1), the second fold-rotated by
// `dihedral_deg` out of the first's plane (0 = coplanar).
TriMesh folded_pair(double dihedral_deg) {
  double a = dihedral_deg * 3.14159265358979323846 / 180.0;
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.5, -std::cos(a), std::sin(a)}};
  m.faces = {{0, 1, 2}, {1, 0, 3}};
  m.compute_face_normals();
  return m;
}

bool on_cube_edge(const Vec3& p, double tol) {
  int extreme = 0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(std::abs(p[k]) - 0.5) <= tol) ++extreme;
    if (std::abs(p[k]) > 0.5 + tol) return false;
  }
  return extreme >= 2;
}

}  // namespace

TEST_SUITE("saliency") {

TEST_CASE("cube has exactly its 12 edges sharp at 90 degrees") {
  SharpEdgeSet sharp = detect_sharp_edges(make_cube(), 15.0);
  CHECK(sharp.edges.size() == 12);
  CHECK(sharp.boundary_total == 0);
  CHECK(sharp.nonmanifold_skipped == 0);
  for (const auto& e : sharp.edges) {
    CHECK(e.deviation_deg == doctest::Approx(90.0).epsilon(1e-9));
    CHECK(e.f1 >= 0);
  }
  // Face diagonals (18 interior edges total) are coplanar and stay out.
  CHECK(sharp.interior_total == 18);
}

TEST_CASE("dihedral threshold is inclusive and coplanar edges are not sharp") {
  auto count_interior_sharp = [](const SharpEdgeSet& s) {
    size_t n = 0;
    for (const auto& e : s.edges) n += e.f1 >= 0;
    return n;
  };
  CHECK(count_interior_sharp(detect_sharp_edges(folded_pair(0.0), 15.0)) == 0);
  CHECK(count_interior_sharp(detect_sharp_edges(folded_pair(14.9), 15.0)) == 0);
  CHECK(count_interior_sharp(detect_sharp_edges(folded_pair(15.1), 15.0)) == 1);

  // Exactly at the threshold counts as sharp: reuse the measured deviation as
  // the threshold so the comparison is exact.
  TriMesh fold = folded_pair(37.0);
  SharpEdgeSet all = detect_sharp_edges(fold, 0.0);
  double measured = 0.0;
  for (const auto& e : all.edges)
    if (e.f1 >= 0) measured = e.deviation_deg;
  CHECK(measured == doctest::Approx(37.0).epsilon(1e-9));
  CHECK(count_interior_sharp(detect_sharp_edges(fold, measured)) == 1);
}

TEST_CASE("boundary edges are always sharp") {
  TriMesh flat = folded_pair(0.0);  // planar, but open: 4 boundary edges
  SharpEdgeSet sharp = detect_sharp_edges(flat, 15.0);
  CHECK(sharp.boundary_total == 4);
  CHECK(sharp.edges.size() == 4);
  for (const auto& e : sharp.edges) {
    CHECK(e.f1 == -1);
    CHECK(e.deviation_deg == 180.0);
  }
}

TEST_CASE("edges with more than two faces are skipped and counted") {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.5, -1, 0.2}, {0.5, 0, 1}};
  m.faces = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};  // three fins on edge (0,1)
  m.compute_face_normals();
  SharpEdgeSet sharp = detect_sharp_edges(m, 15.0);
  CHECK(sharp.nonmanifold_skipped == 1);
  for (const auto& e : sharp.edges) CHECK_FALSE((e.v0 == 0 && e.v1 == 1));
}

TEST_CASE("edge sampling spacing includes both endpoints") {
  // One sharp edge of length 0.5 sampled at spacing 0.1: 6 points.
  TriMesh m;
  m.vertices = {{0, 0, 0}, {0.5, 0, 0}, {0.25, 1, 0}, {0.25, -std::sqrt(0.5), std::sqrt(0.5)}};
  m.faces = {{0, 1, 2}, {1, 0, 3}};
  m.compute_face_normals();
  SharpEdgeSet sharp = detect_sharp_edges(m, 15.0);

  SalientCloud cloud = sample_salient(m, sharp, 0.1, 1);
  // Count points on the shared edge y = z = 0.
  std::vector<double> xs;
  for (const auto& p : cloud.points)
    if (std::abs(p.y) < 1e-12 && std::abs(p.z) < 1e-12) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  REQUIRE(xs.size() == 6);
  for (size_t i = 0; i < xs.size(); ++i) CHECK(xs[i] == doctest::Approx(0.1 * i).epsilon(1e-12));
  for (size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] - xs[i - 1] <= 0.1 + 1e-12);
}

TEST_CASE("corner points are emitted once per vertex") {
  SalientCloud cloud = sample_salient(make_cube(), detect_sharp_edges(make_cube(), 15.0),
                                      0.02, 1);
  size_t corners = 0;
  for (auto s : cloud.provenance) corners += s == SalientSource::Corner;
  CHECK(corners == 8);
  // Edge length 1 at spacing 0.02: 50 segments, 49 interior points per edge.
  CHECK(cloud.points.size() == 8 + 12 * 49);
  CHECK_FALSE(cloud.used_fallback);
  for (const auto& p : cloud.points) CHECK(on_cube_edge(p, 1e-9));

  // No duplicate positions anywhere in the cloud.
  std::set<std::array<double, 3>> seen;
  for (const auto& p : cloud.points) CHECK(seen.insert({p.x, p.y, p.z}).second);
}

TEST_CASE("spacing larger than the edge emits endpoints only") {
  TriMesh m = folded_pair(90.0);
  SharpEdgeSet sharp = detect_sharp_edges(m, 15.0);
  SalientCloud cloud = sample_salient(m, sharp, 10.0, 1);
  // 4 boundary edges + 1 sharp interior edge, all covered by 4 vertices.
  CHECK(cloud.points.size() == 4);
  for (auto s : cloud.provenance) CHECK(s == SalientSource::Corner);
}

TEST_CASE("smooth meshes fall back to curvature-ranked surface samples") {
  TriMesh sphere = normalize(make_icosphere(3));
  SharpEdgeSet sharp = detect_sharp_edges(sphere, 15.0);
  REQUIRE(sharp.edges.empty());

  SalientCloud cloud = sample_salient(sphere, sharp, 0.02, 5, 2048);
  CHECK(cloud.used_fallback);
  CHECK(cloud.points.size() == 204);  // top 10% of 2048
  for (auto s : cloud.provenance) CHECK(s == SalientSource::SurfaceFallback);
  // Fallback points sit on the model surface (zero-centered sphere-ish).
  for (const auto& p : cloud.points) CHECK(norm(p) <= 0.5 + 1e-9);

  SalientCloud again = sample_salient(sphere, sharp, 0.02, 5, 2048);
  CHECK(cloud.points == again.points);
  SalientCloud other = sample_salient(sphere, sharp, 0.02, 6, 2048);
  CHECK(cloud.points != other.points);
}

TEST_CASE("argument validation") {
  TriMesh cube = make_cube();
  CHECK_THROWS_AS(detect_sharp_edges(cube, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(detect_sharp_edges(cube, 181.0), std::invalid_argument);
  SharpEdgeSet sharp = detect_sharp_edges(cube, 15.0);
  CHECK_THROWS_AS(sample_salient(cube, sharp, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_salient(cube, sharp, 0.02, 1, 0), std::invalid_argument);
}

}  // TEST_SUITE
