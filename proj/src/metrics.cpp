#include "sketchgen/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "sketchgen/kdtree.hpp"

namespace sketchgen {

std::vector<double> nn_squared_dists(const std::vector<Vec3>& queries,
                                     const std::vector<Vec3>& targets, NnBackend backend) {
  if (targets.empty()) throw std::invalid_argument("nn_squared_dists: empty target cloud");
  std::vector<double> out(queries.size());

  if (backend == NnBackend::BruteForce) {
    for (size_t q = 0; q < queries.size(); ++q) {
      double best = dist2(queries[q], targets[0]);
      for (size_t t = 1; t < targets.size(); ++t)
        best = std::min(best, dist2(queries[q], targets[t]));
      out[q] = best;
    }
    return out;
  }

  KdTree3 tree(targets);
#pragma omp parallel for schedule(static)
  for (long q = 0; q < static_cast<long>(queries.size()); ++q)
    out[q] = tree.nearest(queries[q]).second;
  return out;
}

namespace {

// Serial sum in index order; keeps parallel and brute-force paths identical.
double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

}  // namespace

ChamferResult chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                      NnBackend backend) {
  if (a.empty() || b.empty()) throw std::invalid_argument("chamfer: empty point cloud");
  ChamferResult r;
  r.a_to_b = mean_of(nn_squared_dists(a, b, backend));
  r.b_to_a = mean_of(nn_squared_dists(b, a, backend));
  r.bidirectional = 0.5 * (r.a_to_b + r.b_to_a);
  return r;
}

FscoreResult fscore(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt, double delta,
                    NnBackend backend) {
  if (pred.empty() || gt.empty()) throw std::invalid_argument("fscore: empty point cloud");
  if (!(delta > 0.0)) throw std::invalid_argument("fscore: delta must be positive");

  // Compare in the squared domain; d < delta iff d^2 < delta^2 for
  // non-negative values, so both backends count identically.
  double d2 = delta * delta;
  auto frac_within = [&](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    auto dists = nn_squared_dists(from, to, backend);
    size_t hits = 0;
    for (double d : dists) hits += d < d2;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(dists.size());
  };

  FscoreResult r;
  r.precision = frac_within(pred, gt);
  r.recall = frac_within(gt, pred);
  r.fscore = (r.precision + r.recall) > 0.0
                 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                 : 0.0;
  return r;
}

AlignTransform compute_alignment(const std::vector<Vec3>& pred, const std::vector<Vec3>& gt) {
  if (pred.empty() || gt.empty())
    throw std::invalid_argument("compute_alignment: empty point cloud");
  Aabb bp, bg;
  for (const auto& p : pred) bp.expand(p);
  for (const auto& p : gt) bg.expand(p);

  double dp = bp.diagonal(), dg = bg.diagonal();
  AlignTransform t;
  t.scale = dp > 0.0 ? dg / dp : 1.0;
  t.translation = bg.center() - bp.center() * t.scale;
  return t;
}

std::vector<Vec3> apply_alignment(const std::vector<Vec3>& pts, const AlignTransform& t) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p * t.scale + t.translation);
  return out;
}

EvalReport evaluate_meshes(const TriMesh& pred, const TriMesh& gt, int n, uint64_t seed_pred,
                           uint64_t seed_gt, double delta, NnBackend backend) {
  if (n < 1) throw std::invalid_argument("evaluate_meshes: n must be positive");
  std::vector<Vec3> p, g;
  p.reserve(n);
  g.reserve(n);
  for (const auto& s : sample_surface(pred, n, seed_pred)) p.push_back(s.position);
  for (const auto& s : sample_surface(gt, n, seed_gt)) g.push_back(s.position);

  EvalReport r;
  r.n_pred = static_cast<int>(p.size());
  r.n_gt = static_cast<int>(g.size());
  r.delta = delta;
  r.alignment = compute_alignment(p, g);
  auto aligned = apply_alignment(p, r.alignment);
  r.cd = chamfer(aligned, g, backend);
  r.f = fscore(aligned, g, delta, backend);
  return r;
}

EvalReport evaluate_points_vs_mesh(const std::vector<Vec3>& pred, const TriMesh& gt, int n,
                                   uint64_t seed_gt, double delta, NnBackend backend) {
  if (n < 1) throw std::invalid_argument("evaluate_points_vs_mesh: n must be positive");
  std::vector<Vec3> g;
  g.reserve(n);
  for (const auto& s : sample_surface(gt, n, seed_gt)) g.push_back(s.position);

  EvalReport r;
  r.n_pred = static_cast<int>(pred.size());
  r.n_gt = static_cast<int>(g.size());
  r.delta = delta;
  r.alignment = compute_alignment(pred, g);
  auto aligned = apply_alignment(pred, r.alignment);
  r.cd = chamfer(aligned, g, backend);
  r.f = fscore(aligned, g, delta, backend);
  return r;
}

std::vector<Vec3> sketch_points(const Sketch& s) {
  std::vector<Vec3> out;
  out.reserve(s.total_points());
  for (const auto& stroke : s.strokes)
    out.insert(out.end(), stroke.points.begin(), stroke.points.end());
  return out;
}

nlohmann::json report_to_json(const EvalReport& r) {
  return {
      {"conventions",
       "chamfer: mean squared nn distance; fscore: percent within euclidean delta"},
      {"cd_bidirectional", r.cd.bidirectional},
      {"cd_pred_to_gt", r.cd.a_to_b},
      {"cd_gt_to_pred", r.cd.b_to_a},
      {"fscore", r.f.fscore},
      {"precision", r.f.precision},
      {"recall", r.f.recall},
      {"delta", r.delta},
      {"n_pred", r.n_pred},
      {"n_gt", r.n_gt},
      {"align_scale", r.alignment.scale},
      {"align_translation",
       {r.alignment.translation.x, r.alignment.translation.y, r.alignment.translation.z}},
  };
}

}  // namespace sketchgen
