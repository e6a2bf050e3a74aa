#include <doctest.h>

#include <set>

#include "sketchgen/pipeline.hpp"
#include "sketchgen/procedural.hpp"
#include "test_support.hpp"

using namespace sketchgen;
using sketchgen::test::canonical_stroke_set;

TEST_SUITE("pipeline") {

TEST_CASE("the default cube run is deterministic and fully diagnosed") {
  TriMesh cube = make_cube();
  PipelineParams params;
  PipelineDiag diag;
  Sketch a = generate_sketch(cube, "cube", params, 11, &diag);
  Sketch b = generate_sketch(cube, "cube", params, 11);
  CHECK(a == b);
  CHECK(sketch_to_json(a).dump(2) == sketch_to_json(b).dump(2));

  CHECK(diag.sharp_edges == 12);
  CHECK(diag.boundary_edges == 0);
  CHECK(diag.nonmanifold_skipped == 0);
  CHECK_FALSE(diag.salient_fallback);
  // 8 corners plus 49 interior samples on each of the 12 unit edges.
  CHECK(diag.salient_points == 596);
  CHECK(diag.chains == 12);
  CHECK(diag.chains_rejected == 0);
  CHECK(diag.fitted_strokes == 12);
  CHECK(diag.polyline_strokes == 0);
  CHECK(diag.points_before_cull == 596);
  // Straight edges cull to their endpoints.
  CHECK(diag.points_after_cull == 24);
  CHECK(diag.strokes_before_merge == 12);
  CHECK(diag.strokes_after_merge <= 12);
  CHECK(diag.strokes_after_merge >= 1);
  CHECK(diag.strokes_after_merge == a.strokes.size());
  CHECK(diag.order.restarts >= 1);
  CHECK(diag.order.decisions ==
        static_cast<int64_t>(a.strokes.size()) - diag.order.restarts);
  CHECK(diag.ms_total > 0.0);

  CHECK(a.meta.mesh_id == "cube");
  CHECK(a.meta.seed == 11);
  CHECK(a.meta.params == params);
  validate_sketch(a, "cube");

  bool found_zero = false, found_one = false;
  for (const auto& s : a.strokes)
    for (const auto& p : s.points)
      for (int k = 0; k < 3; ++k) {
        if (p[k] == 0.0) found_zero = true;
        if (p[k] == 1.0) found_one = true;
      }
  CHECK(found_zero);
  CHECK(found_one);
}

TEST_CASE("seeds permute the drawing order but preserve geometry") {
  TriMesh cube = make_cube();
  PipelineParams params;
  Sketch base = generate_sketch(cube, "cube", params, 0);
  auto expect = canonical_stroke_set(base.strokes);
  std::set<std::string> dumps;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Sketch s = generate_sketch(cube, "cube", params, seed);
    CHECK(canonical_stroke_set(s.strokes) == expect);
    dumps.insert(sketch_to_json(s)["strokes"].dump());
  }
  CHECK(dumps.size() >= 2);
}

TEST_CASE("table and chair produce valid multi-stroke sketches") {
  PipelineParams params;
  for (const char* name : {"table", "chair"}) {
    TriMesh mesh = make_named_shape(name);
    PipelineDiag diag;
    Sketch s = generate_sketch(mesh, name, params, 3, &diag);
    validate_sketch(s, name);
    CHECK_FALSE(diag.salient_fallback);
    CHECK(diag.sharp_edges > 12);
    CHECK(s.strokes.size() > 3);
    CHECK(s.total_points() >= 2 * s.strokes.size());
  }
}

TEST_CASE("smooth meshes fall back to surface saliency") {
  TriMesh sphere = make_icosphere(3);
  PipelineParams params;
  params.link_radius = 0.08;
  PipelineDiag diag;
  Sketch s = generate_sketch(sphere, "icosphere", params, 5, &diag);
  CHECK(diag.salient_fallback);
  CHECK(diag.sharp_edges == 0);
  CHECK(diag.salient_points == 204);  // top tenth of 2048 surface samples
  validate_sketch(s, "icosphere");
  Sketch again = generate_sketch(sphere, "icosphere", params, 5);
  CHECK(s == again);
}

TEST_CASE("a power-of-two similarity transform does not change the sketch") {
  TriMesh unit = make_cube();
  TriMesh moved = make_box({8, 16, 32}, {4, 4, 4});
  Sketch a = generate_sketch(unit, "cube", PipelineParams{}, 9);
  Sketch b = generate_sketch(moved, "cube", PipelineParams{}, 9);
  CHECK(a == b);
}

TEST_CASE("degenerate inputs raise descriptive errors") {
  TriMesh flat;
  flat.vertices = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  flat.faces = {{0, 1, 2}};
  CHECK_THROWS_WITH_AS(generate_sketch(flat, "flat", PipelineParams{}, 0),
                       doctest::Contains("zero spatial extent"), std::runtime_error);

  TriMesh sphere = make_icosphere(2);
  PipelineParams starved;
  starved.surface_samples = 1;  // one fallback point can never chain
  CHECK_THROWS_WITH_AS(generate_sketch(sphere, "sphere", starved, 0),
                       doctest::Contains("no strokes"), std::runtime_error);
}

}  // TEST_SUITE
