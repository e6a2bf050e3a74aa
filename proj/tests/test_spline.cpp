#include <doctest.h>

#include <cmath>

#include "sketchgen/rng.hpp"
#include "sketchgen/spline.hpp"

using namespace sketchgen;

namespace {

SalientCloud cloud_of(std::vector<Vec3> pts) {
  SalientCloud c;
  c.provenance.assign(pts.size(), SalientSource::EdgeSample);
  c.points = std::move(pts);
  return c;
}

Vec3 bezier(const std::array<Vec3, 3>& c, double t) {
  double u = 1.0 - t;
  return c[0] * (u * u) + c[1] * (2 * u * t) + c[2] * (t * t);
}

}  // namespace

TEST_SUITE("spline") {

TEST_CASE("a dense straight run chains into a single ordered polyline") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({i * 0.01, 0, 0});
  auto chains = chain_points(cloud_of(pts), 0.02);
  REQUIRE(chains.size() == 1);
  REQUIRE(chains[0].points.size() == 50);
  for (int i = 0; i < 50; ++i)
    CHECK(chains[0].points[i].x == doctest::Approx(i * 0.01).epsilon(1e-12));
}

TEST_CASE("gaps beyond link_radius split chains") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({i * 0.01, 0, 0});
  for (int i = 0; i < 10; ++i) pts.push_back({0.2 + i * 0.01, 0, 0});  // 0.11 gap
  auto chains = chain_points(cloud_of(pts), 0.02);
  REQUIRE(chains.size() == 2);
  CHECK(chains[0].points.size() == 10);
  CHECK(chains[1].points.size() == 10);
}

TEST_CASE("turns at or above 60 degrees break the chain, milder turns do not") {
  auto leg = [](Vec3 origin, Vec3 dir, int n) {
    std::vector<Vec3> pts;
    for (int i = 1; i <= n; ++i) pts.push_back(origin + dir * (i * 0.01));
    return pts;
  };
  // Right angle: two legs of an L.
  std::vector<Vec3> ell{{0, 0, 0}};
  for (auto& p : leg({0, 0, 0}, {1, 0, 0}, 10)) ell.push_back(p);
  for (auto& p : leg({0.1, 0, 0}, {0, 1, 0}, 10)) ell.push_back(p);
  auto chains = chain_points(cloud_of(ell), 0.02);
  CHECK(chains.size() == 2);

  // 30 degree bend stays one chain.
  double a = 30.0 * 3.14159265358979323846 / 180.0;
  std::vector<Vec3> bend{{0, 0, 0}};
  for (auto& p : leg({0, 0, 0}, {1, 0, 0}, 10)) bend.push_back(p);
  for (auto& p : leg({0.1, 0, 0}, {std::cos(a), std::sin(a), 0}, 10)) bend.push_back(p);
  chains = chain_points(cloud_of(bend), 0.02);
  CHECK(chains.size() == 1);
  CHECK(chains[0].points.size() == 21);
}

TEST_CASE("isolated points form discarded singletons") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({i * 0.01, 0, 0});
  pts.push_back({5, 5, 5});
  auto chains = chain_points(cloud_of(pts), 0.02);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].points.size() == 5);
}

TEST_CASE("a seed in the middle of a run grows backwards too") {
  // Index 0 sits mid-line; backward growth must recover the left half.
  std::vector<Vec3> pts{{0.05, 0, 0}};
  for (int i = 0; i <= 10; ++i)
    if (i != 5) pts.push_back({i * 0.01, 0, 0});
  auto chains = chain_points(cloud_of(pts), 0.02);
  REQUIRE(chains.size() == 1);
  REQUIRE(chains[0].points.size() == 11);
  for (int i = 0; i <= 10; ++i)
    CHECK(chains[0].points[i].x == doctest::Approx(i * 0.01).epsilon(1e-12));
}

TEST_CASE("fit recovers an exact quadratic to high precision") {
  std::array<Vec3, 3> truth{Vec3{0, 0, 0}, Vec3{0.3, 0.8, -0.2}, Vec3{1, 0.2, 0.5}};
  PolyChain chain;
  chain.id = 3;
  Rng rng(17);
  std::vector<double> ts{0.0};
  for (int i = 0; i < 23; ++i) ts.push_back(rng.uniform());
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());
  for (double t : ts) chain.points.push_back(bezier(truth, t));

  BezierStroke s = fit_quadratic(chain);
  CHECK(s.max_residual < 1e-6);
  CHECK(s.source_chain == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(s.control[1][k] == doctest::Approx(truth[1][k]).epsilon(1e-6));
  }
  CHECK(s.control[0] == chain.points.front());
  CHECK(s.control[2] == chain.points.back());
}

TEST_CASE("fit nails the parabola sampled uniformly in x") {
  // y = x^2 is the quadratic Bezier with controls (0,0), (0.5,0), (1,1);
  // uniform-in-x samples are far from chord-length parameters, so this
  // exercises the reprojection iteration.
  PolyChain chain;
  for (int i = 0; i <= 20; ++i) {
    double x = i / 20.0;
    chain.points.push_back({x, x * x, 0});
  }
  BezierStroke s = fit_quadratic(chain);
  CHECK(s.max_residual < 1e-6);
  CHECK(s.rms_residual < 1e-6);
  CHECK(s.control[1].x == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(s.control[1].y == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("random exact quadratics fit below 1e-6 max residual") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed * 31 + 7);
    std::array<Vec3, 3> truth;
    for (auto& c : truth) c = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    PolyChain chain;
    int n = 12 + static_cast<int>(rng.index(30));
    for (int i = 0; i < n; ++i) chain.points.push_back(bezier(truth, i / (n - 1.0)));
    BezierStroke s = fit_quadratic(chain);
    CHECK(s.max_residual < 1e-6);
  }
}

TEST_CASE("samples are evaluated at the chain's point count and endpoints match") {
  PolyChain chain;
  for (int i = 0; i < 15; ++i) chain.points.push_back({i * 0.05, std::sin(i * 0.2), 0});
  BezierStroke s = fit_quadratic(chain);
  CHECK(s.samples.size() == 15);
  CHECK(s.samples.front() == chain.points.front());
  CHECK(s.samples.back() == chain.points.back());
}

TEST_CASE("fit_quadratic requires 3 points") {
  PolyChain chain;
  chain.points = {{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(fit_quadratic(chain), std::invalid_argument);
}

TEST_CASE("fit_all rejects short chains") {
  PolyChain short_chain, long_chain;
  for (int i = 0; i < 11; ++i) short_chain.points.push_back({i * 0.01, 0, 0});
  for (int i = 0; i < 12; ++i) long_chain.points.push_back({i * 0.01, 0, 0});
  short_chain.id = 0;
  long_chain.id = 1;
  FitResult r = fit_all({short_chain, long_chain}, 12, 0.01);
  REQUIRE(r.strokes.size() == 1);
  REQUIRE(r.rejected.size() == 1);
  CHECK(r.rejected[0].id == 0);
  CHECK(r.strokes[0].source_chain == 1);
}

TEST_CASE("high-deviation chains split recursively until the fit is tight") {
  // An S-curve no single quadratic can approximate within RMS 0.01.
  PolyChain chain;
  for (int i = 0; i <= 60; ++i) {
    double t = i / 60.0;
    chain.points.push_back({t, 0.25 * std::sin(2 * 3.14159265358979323846 * t), 0});
  }
  FitResult r = fit_all({chain}, 12, 0.01);
  CHECK(r.strokes.size() >= 2);
  for (const auto& s : r.strokes)
    if (!s.is_polyline) CHECK(s.rms_residual <= 0.01);
  // Halves share their split point: consecutive strokes abut.
  for (size_t i = 1; i < r.strokes.size(); ++i)
    CHECK(dist(r.strokes[i - 1].samples.back(), r.strokes[i].samples.front()) < 1e-12);
  // All strokes trace the source chain order left to right.
  for (size_t i = 1; i < r.strokes.size(); ++i)
    CHECK(r.strokes[i - 1].samples.front().x < r.strokes[i].samples.front().x);
}

TEST_CASE("split remainders below min length are kept as polylines") {
  // A hairpin forces a split near one end; the short half must survive as a
  // raw polyline rather than vanish.
  PolyChain chain;
  for (int i = 0; i <= 12; ++i) chain.points.push_back({i * 0.05, 0, 0});
  for (int i = 1; i <= 4; ++i) chain.points.push_back({0.6 - i * 0.05, 0.03 * i, 0});
  FitResult r = fit_all({chain}, 12, 0.01);
  size_t total = 0;
  for (const auto& s : r.strokes) total += s.samples.size();
  CHECK(r.strokes.size() >= 2);
  CHECK(total >= chain.points.size());  // split points shared, nothing lost
  bool has_polyline = false;
  for (const auto& s : r.strokes) has_polyline = has_polyline || s.is_polyline;
  CHECK(has_polyline);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(chain_points(cloud_of({{0, 0, 0}}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_all({}, 2, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(fit_all({}, 12, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
