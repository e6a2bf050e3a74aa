#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "sketchgen/mesh.hpp"
#include "sketchgen/procedural.hpp"
#include "sketchgen/rng.hpp"
#include "test_support.hpp"

using namespace sketchgen;

namespace {

TriMesh obj_from_string(const std::string& text, MeshLoadStats* stats = nullptr) {
  std::istringstream in(text);
  return parse_obj(in, "inline.obj", stats);
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("obj parses vertices, faces and fan-triangulates polygons") {
  MeshLoadStats stats;
  TriMesh m = obj_from_string(
      "# comment\n"
      "v 0 0 0\n"
      "v 1 0 0\n"
      "v 1 1 0\n"
      "v 0 1 0\n"
      "vn 0 0 1\n"
      "vt 0 0\n"
      "f 1/1/1 2/2/1 3/3/1 4/4/1\n",
      &stats);
  CHECK(m.vertices.size() == 4);
  CHECK(m.faces.size() == 2);  // quad fan-triangulated
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(m.faces[1] == std::array<int, 3>{0, 2, 3});
  CHECK(stats.format == "obj");
  CHECK(stats.faces_read == 2);
}

TEST_CASE("obj supports negative (relative) indices") {
  TriMesh m = obj_from_string(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
      "f -3 -2 -1\n");
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("obj parse errors carry file and line context") {
  CHECK_THROWS_WITH_AS(obj_from_string("v 0 0\n"),
                       doctest::Contains("inline.obj:1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(obj_from_string("v 0 0 zero\n"),
                       doctest::Contains("bad vertex coordinate"), std::runtime_error);
  CHECK_THROWS_WITH_AS(obj_from_string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n"),
                       doctest::Contains("out of range"), std::runtime_error);
  CHECK_THROWS_WITH_AS(obj_from_string("v 0 0 0\n"),
                       doctest::Contains("no non-degenerate faces"), std::runtime_error);
  CHECK_THROWS_WITH_AS(obj_from_string(""), doctest::Contains("no vertices"),
                       std::runtime_error);
}

TEST_CASE("degenerate faces are dropped and counted") {
  MeshLoadStats stats;
  TriMesh m = obj_from_string(
      "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 2 0 0\n"
      "f 1 2 3\n"
      "f 1 2 2\n"   // repeated vertex
      "f 1 2 4\n",  // collinear, zero area
      &stats);
  CHECK(m.faces.size() == 1);
  CHECK(stats.degenerate_dropped == 2);
}

TEST_CASE("off round trip through a stream") {
  std::istringstream in(
      "OFF\n"
      "# comment\n"
      "4 2 0\n"
      "0 0 0\n1 0 0\n1 1 0\n0 1 0\n"
      "3 0 1 2\n"
      "3 0 2 3\n");
  MeshLoadStats stats;
  TriMesh m = parse_off(in, "inline.off", &stats);
  CHECK(m.vertices.size() == 4);
  CHECK(m.faces.size() == 2);
  CHECK(stats.format == "off");

  std::istringstream bad("NOFF\n1 0 0\n0 0 0\n");
  CHECK_THROWS_WITH_AS(parse_off(bad, "bad.off", nullptr),
                       doctest::Contains("expected OFF header"), std::runtime_error);
}

TEST_CASE("ascii ply parses and binary ply is rejected") {
  std::istringstream in(
      "ply\n"
      "format ascii 1.0\n"
      "comment made by hand\n"
      "element vertex 3\n"
      "property float x\nproperty float y\nproperty float z\n"
      "element face 1\n"
      "property list uchar int vertex_indices\n"
      "end_header\n"
      "0 0 0\n1 0 0\n0 1 0\n"
      "3 0 1 2\n");
  TriMesh m = parse_ply_ascii(in, "inline.ply", nullptr);
  CHECK(m.vertices.size() == 3);
  CHECK(m.faces.size() == 1);

  std::istringstream bin("ply\nformat binary_little_endian 1.0\nend_header\n");
  CHECK_THROWS_WITH_AS(parse_ply_ascii(bin, "bin.ply", nullptr),
                       doctest::Contains("only ascii PLY"), std::runtime_error);
}

TEST_CASE("load_mesh detects format from extension and magic") {
  test::TempDir td;
  TriMesh cube = make_cube();

  save_obj(cube, td.file("m.obj"));
  MeshLoadStats s1;
  load_mesh(td.file("m.obj"), MeshFormat::Auto, &s1);
  CHECK(s1.format == "obj");

  {
    std::ofstream off(td.file("noext"));
    off << "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
  }
  MeshLoadStats s2;
  load_mesh(td.file("noext"), MeshFormat::Auto, &s2);
  CHECK(s2.format == "off");

  CHECK_THROWS_WITH_AS(load_mesh(td.file("missing.obj")), doctest::Contains("cannot open"),
                       std::runtime_error);
}

TEST_CASE("save_obj/load_mesh round trip preserves geometry exactly") {
  test::TempDir td;
  Rng rng(11);
  TriMesh m = make_table();
  for (auto& v : m.vertices) v += Vec3{rng.uniform() * 1e-3, 0, 0};
  m.compute_face_normals();
  save_obj(m, td.file("t.obj"));
  TriMesh back = load_mesh(td.file("t.obj"));
  REQUIRE(back.vertices.size() == m.vertices.size());
  REQUIRE(back.faces.size() == m.faces.size());
  for (size_t i = 0; i < m.vertices.size(); ++i) CHECK(back.vertices[i] == m.vertices[i]);
  CHECK(back.faces == m.faces);
}

TEST_CASE("normalize centers the box and scales the longest side to 1") {
  TriMesh m = make_box({3.0, -1.0, 2.0}, {2.0, 1.0, 0.5});
  TriMesh n = normalize(m);
  Aabb box = n.bounds();
  CHECK(box.center().x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(box.center().y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(box.center().z == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(box.longest_side() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(box.extent().y == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(box.extent().z == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(is_normalized(n));
}

TEST_CASE("normalize is exactly idempotent") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    Rng rng(seed);
    TriMesh m = make_box({rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)},
                         {rng.uniform(0.1, 4), rng.uniform(0.1, 4), rng.uniform(0.1, 4)});
    TriMesh once = normalize(m);
    TriMesh twice = normalize(once);
    REQUIRE(twice.vertices.size() == once.vertices.size());
    for (size_t i = 0; i < once.vertices.size(); ++i)
      CHECK(twice.vertices[i] == once.vertices[i]);
  }
}

TEST_CASE("normalize leaves the canonical cube untouched") {
  TriMesh cube = make_cube();
  TriMesh n = normalize(cube);
  for (size_t i = 0; i < cube.vertices.size(); ++i) CHECK(n.vertices[i] == cube.vertices[i]);
}

TEST_CASE("normalize rejects zero extent") {
  TriMesh m;
  m.vertices = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  m.faces = {{0, 1, 2}};
  CHECK_THROWS_WITH_AS(normalize(m), doctest::Contains("zero spatial extent"),
                       std::runtime_error);
}

TEST_CASE("surface samples are deterministic per seed") {
  TriMesh cube = make_cube();
  auto a = sample_surface(cube, 256, 42);
  auto b = sample_surface(cube, 256, 42);
  auto c = sample_surface(cube, 256, 43);
  REQUIRE(a.size() == 256);
  bool all_equal = true, any_diff = false;
  for (size_t i = 0; i < a.size(); ++i) {
    all_equal = all_equal && a[i].position == b[i].position && a[i].face_id == b[i].face_id;
    any_diff = any_diff || !(a[i].position == c[i].position);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("cube samples land exactly on the surface") {
  TriMesh cube = make_cube();
  for (const auto& s : sample_surface(cube, 2048, 7)) {
    double m = std::max({std::abs(s.position.x), std::abs(s.position.y),
                         std::abs(s.position.z)});
    CHECK(m == 0.5);  // the face-constant coordinate is copied exactly
    CHECK(s.face_id >= 0);
    CHECK(s.face_id < static_cast<int>(cube.faces.size()));
  }
}

TEST_CASE("sampling is area-weighted") {
  // Two right triangles with areas 0.5 and 8.
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {10, 0, 0}, {14, 0, 0}, {10, 4, 0}};
  m.faces = {{0, 1, 2}, {3, 4, 5}};
  m.compute_face_normals();
  int n = 40000;
  int small_count = 0;
  for (const auto& s : sample_surface(m, n, 99))
    if (s.face_id == 0) ++small_count;
  double frac = static_cast<double>(small_count) / n;
  double expect = 0.5 / 8.5;
  CHECK(std::abs(frac - expect) < 0.01);
}

TEST_CASE("samples satisfy barycentric bounds on their faces") {
  TriMesh table = normalize(make_table());
  for (const auto& s : sample_surface(table, 512, 5)) {
    const auto& f = table.faces[s.face_id];
    const Vec3& a = table.vertices[f[0]];
    const Vec3& b = table.vertices[f[1]];
    const Vec3& c = table.vertices[f[2]];
    // Solve for barycentric coordinates in the face plane.
    Vec3 v0 = b - a, v1 = c - a, v2 = s.position - a;
    double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
    double d20 = dot(v2, v0), d21 = dot(v2, v1);
    double den = d00 * d11 - d01 * d01;
    double u = (d11 * d20 - d01 * d21) / den;
    double v = (d00 * d21 - d01 * d20) / den;
    CHECK(u >= -1e-9);
    CHECK(v >= -1e-9);
    CHECK(u + v <= 1.0 + 1e-9);
    CHECK(std::abs(dot(s.position - a, s.normal)) < 1e-9);
  }
}

}  // TEST_SUITE
