#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "sketchgen/mesh.hpp"
#include "sketchgen/sketch.hpp"

namespace sketchgen {

// BruteForce is the serial O(n*m) reference; KdTree answers the same queries
// through a tree with OpenMP across queries. Both paths evaluate candidate
// distances with the identical expression and reduce serially in query
// order, so their results match bit for bit.
enum class NnBackend { BruteForce, KdTree };

// Squared distance from each query to its nearest target.
std::vector<double> nn_squared_dists(const std::vector<Vec3>& queries,
                                     const std::vector<Vec3>& targets,
                                     NnBackend backend = NnBackend::KdTree);

struct ChamferResult {
  double bidirectional = 0.0;  // mean of the two directed terms
  double a_to_b = 0.0;         // mean squared NN distance from a into b
  double b_to_a = 0.0;
};

// Chamfer distance on the squared-distance convention.
ChamferResult chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      NnBackend backend = NnBackend::KdTree);

struct FscoreResult {
  double fscore = 0.0;  // harmonic mean of precision and recall, in percent
  double precision = 0.0;  // % of pred points within delta of gt
  double recall = 0.0;     // % of gt points within delta of pred
};

// F-score at threshold delta on the unsquared (Euclidean) convention; a
// point counts when its NN distance is strictly below delta.
FscoreResult fscore(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt,
                    double delta = 0.02, NnBackend backend = NnBackend::KdTree);

struct AlignTransform {
  double scale = 1.0;
  Vec3 translation;  // applied as p * scale + translation
};

// Similarity alignment of pred onto gt: translate bounding-box centers onto
// each other and scale so the box diagonals match. Identical clouds map to
// the exact identity.
AlignTransform compute_alignment(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt);
std::vector<Vec3> apply_alignment(const std::vector<Vec3>& pts, const AlignTransform& t);

struct EvalReport {
  ChamferResult cd;
  FscoreResult f;
  double delta = 0.02;
  int n_pred = 0, n_gt = 0;
  AlignTransform alignment;
};

// Mesh-vs-mesh evaluation: sample n points per side (independent seeds),
// align pred onto gt, then Chamfer and F-score.
EvalReport evaluate_meshes(const TriMesh& pred, const TriMesh& gt, int n, uint64_t seed_pred,
                           uint64_t seed_gt, double delta = 0.02,
                           NnBackend backend = NnBackend::KdTree);

// Point-cloud-vs-mesh evaluation (e.g. all points of a sketch against the
// surface it was generated from).
EvalReport evaluate_points_vs_mesh(const std::vector<Vec3>& pred, const TriMesh& gt, int n,
                                   uint64_t seed_gt, double delta = 0.02,
                                   NnBackend backend = NnBackend::KdTree);

std::vector<Vec3> sketch_points(const Sketch& s);

// Flat JSON report; the conventions header states that Chamfer values are
// mean squared distances and the F-score threshold is Euclidean.
nlohmann::json report_to_json(const EvalReport& r);

}  // namespace sketchgen
