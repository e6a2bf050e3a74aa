#include "sketchgen/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sketchgen/kdtree.hpp"

namespace sketchgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCoincident = 1e-9;

Vec3 bezier_eval(const std::array<Vec3, 3>& c, double t) {
  double u = 1.0 - t;
  return c[0] * (u * u) + c[1] * (2.0 * u * t) + c[2] * (t * t);
}

Vec3 bezier_deriv(const std::array<Vec3, 3>& c, double t) {
  return (c[1] - c[0]) * (2.0 * (1.0 - t)) + (c[2] - c[1]) * (2.0 * t);
}

// Grow one end of a chain. `tip` is the current end point, `prev` the point
// before it (nullptr while the chain has a single point). Returns the index
// of the accepted next point or -1.
int next_link(const KdTree3& tree, const std::vector<char>& visited, const Vec3& tip,
              const Vec3* prev, double link_radius, double cos_min_keep) {
  int best = -1;
  double best_d2 = 0.0;
  for (int i : tree.radius(tip, link_radius)) {
    if (visited[i]) continue;
    const Vec3& cand = tree.points()[i];
    double d2 = dist2(tip, cand);
    if (d2 <= kCoincident * kCoincident) continue;
    if (prev && cos_angle(tip - *prev, cand - tip) <= cos_min_keep) continue;
    if (best < 0 || d2 < best_d2) {
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

}  // namespace

std::vector<PolyChain> chain_points(const SalientCloud& cloud, double link_radius,
                                    double max_turn_deg) {
  if (!(link_radius > 0.0))
    throw std::invalid_argument("chain_points: link_radius must be positive");
  // A step is accepted when its turn is strictly below max_turn_deg, i.e. the
  // cosine of the turn is strictly above this bound.
  double cos_min_keep = std::cos(max_turn_deg * kPi / 180.0);
  // Salient clouds space samples at exactly the link radius, and the lerp that
  // places them can land a few ulps past it; pad the query so those runs stay
  // connected.
  double radius = link_radius * (1.0 + 1e-9);

  KdTree3 tree(cloud.points);
  std::vector<char> visited(cloud.points.size(), 0);
  std::vector<PolyChain> chains;

  for (size_t seed = 0; seed < cloud.points.size(); ++seed) {
    if (visited[seed]) continue;
    visited[seed] = 1;
    std::vector<Vec3> fwd{cloud.points[seed]};

    while (true) {
      const Vec3* prev = fwd.size() >= 2 ? &fwd[fwd.size() - 2] : nullptr;
      int next = next_link(tree, visited, fwd.back(), prev, radius, cos_min_keep);
      if (next < 0) break;
      visited[next] = 1;
      fwd.push_back(cloud.points[next]);
    }
    // Extend backwards from the seed so a seed in the middle of a feature
    // still recovers the whole run.
    std::vector<Vec3> bwd;
    while (true) {
      const Vec3& tip = bwd.empty() ? fwd.front() : bwd.back();
      const Vec3* prev = nullptr;
      if (bwd.size() >= 2) prev = &bwd[bwd.size() - 2];
      else if (bwd.size() == 1) prev = &fwd.front();
      else if (fwd.size() >= 2) prev = &fwd[1];
      int next = next_link(tree, visited, tip, prev, radius, cos_min_keep);
      if (next < 0) break;
      visited[next] = 1;
      bwd.push_back(cloud.points[next]);
    }

    if (fwd.size() + bwd.size() < 2) continue;  // singleton, dropped
    PolyChain chain;
    chain.id = static_cast<int>(chains.size());
    chain.points.assign(bwd.rbegin(), bwd.rend());
    chain.points.insert(chain.points.end(), fwd.begin(), fwd.end());
    chains.push_back(std::move(chain));
  }
  return chains;
}

BezierStroke fit_quadratic(const PolyChain& chain) {
  const auto& q = chain.points;
  size_t n = q.size();
  if (n < 3) throw std::invalid_argument("fit_quadratic: need at least 3 points");

  // Chord-length initialization of the parameters.
  std::vector<double> t(n, 0.0);
  double total = 0.0;
  for (size_t i = 1; i < n; ++i) {
    total += dist(q[i], q[i - 1]);
    t[i] = total;
  }
  if (total > 0.0)
    for (size_t i = 0; i < n; ++i) t[i] /= total;
  else
    for (size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / (n - 1);

  std::array<Vec3, 3> c{q.front(), (q.front() + q.back()) * 0.5, q.back()};

  // Alternate the closed-form middle-control-point solve with Newton
  // reprojection of the interior parameters. Convergence is linear but the
  // per-iteration cost is tiny; stop once the control point is stationary.
  for (int iter = 0; iter < 600; ++iter) {
    double num_x = 0.0, num_y = 0.0, num_z = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double u = 1.0 - t[i];
      double b = 2.0 * u * t[i];
      Vec3 r = q[i] - c[0] * (u * u) - c[2] * (t[i] * t[i]);
      num_x += b * r.x;
      num_y += b * r.y;
      num_z += b * r.z;
      den += b * b;
    }
    Vec3 p1 = den > 1e-30 ? Vec3{num_x / den, num_y / den, num_z / den}
                          : (c[0] + c[2]) * 0.5;
    double moved = dist(p1, c[1]);
    c[1] = p1;

    for (size_t i = 1; i + 1 < n; ++i) {
      double ti = t[i];
      for (int k = 0; k < 8; ++k) {
        Vec3 d = bezier_eval(c, ti) - q[i];
        Vec3 dp = bezier_deriv(c, ti);
        Vec3 ddp = (c[0] - c[1] * 2.0 + c[2]) * 2.0;
        double denom = norm2(dp) + dot(d, ddp);
        if (std::abs(denom) < 1e-30) break;
        ti = std::clamp(ti - dot(d, dp) / denom, 0.0, 1.0);
      }
      t[i] = ti;
    }
    if (moved < 1e-14) break;
  }

  BezierStroke s;
  s.control = c;
  s.source_chain = chain.id;
  double sum2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = dist(bezier_eval(c, t[i]), q[i]);
    s.max_residual = std::max(s.max_residual, d);
    sum2 += d * d;
  }
  s.rms_residual = std::sqrt(sum2 / n);
  s.samples.reserve(n);
  for (size_t j = 0; j < n; ++j)
    s.samples.push_back(bezier_eval(c, static_cast<double>(j) / (n - 1)));
  return s;
}

namespace {

void fit_recursive(const std::vector<Vec3>& pts, int chain_id, int min_len,
                   double rms_max, int depth, std::vector<BezierStroke>& out) {
  if (static_cast<int>(pts.size()) < min_len || static_cast<int>(pts.size()) < 3 ||
      depth > 32) {
    if (pts.size() >= 2) {
      BezierStroke s;
      s.is_polyline = true;
      s.source_chain = chain_id;
      s.samples = pts;
      s.control = {pts.front(), (pts.front() + pts.back()) * 0.5, pts.back()};
      out.push_back(std::move(s));
    }
    return;
  }

  PolyChain sub;
  sub.points = pts;
  sub.id = chain_id;
  BezierStroke s = fit_quadratic(sub);
  if (s.rms_residual <= rms_max) {
    out.push_back(std::move(s));
    return;
  }

  // Split where the fit deviates most; both halves share the split point.
  std::vector<double> t(pts.size());
  size_t worst = 1;
  double worst_d = -1.0;
  // Recompute residuals against chord parameters for the split choice; the
  // exact split index only needs to land near the deviation peak.
  double total = 0.0;
  for (size_t i = 1; i < pts.size(); ++i) total += dist(pts[i], pts[i - 1]);
  double acc = 0.0;
  for (size_t i = 1; i + 1 < pts.size(); ++i) {
    acc += dist(pts[i], pts[i - 1]);
    double ti = total > 0.0 ? acc / total : static_cast<double>(i) / (pts.size() - 1);
    double d = dist(bezier_eval(s.control, ti), pts[i]);
    if (d > worst_d) {
      worst_d = d;
      worst = i;
    }
  }
  std::vector<Vec3> left(pts.begin(), pts.begin() + worst + 1);
  std::vector<Vec3> right(pts.begin() + worst, pts.end());
  fit_recursive(left, chain_id, min_len, rms_max, depth + 1, out);
  fit_recursive(right, chain_id, min_len, rms_max, depth + 1, out);
}

}  // namespace

FitResult fit_all(const std::vector<PolyChain>& chains, int min_len, double rms_max) {
  if (min_len < 3) throw std::invalid_argument("fit_all: min_len must be at least 3");
  if (!(rms_max > 0.0)) throw std::invalid_argument("fit_all: rms_max must be positive");

  FitResult res;
  for (const auto& chain : chains) {
    if (static_cast<int>(chain.points.size()) < min_len) {
      res.rejected.push_back(chain);
      continue;
    }
    fit_recursive(chain.points, chain.id, min_len, rms_max, 0, res.strokes);
  }
  return res;
}

}  // namespace sketchgen
