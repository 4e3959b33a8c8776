#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logcave/linalg.hpp"
#include "logcave/structure.hpp"

using namespace logcave;

TEST_CASE("class size formulas at pinned values") {
  ClassParams p = class_params(2, 0.1, 1.0, 1.0, 1.0);
  CHECK(p.levels == 25);
  CHECK(p.facets_per_polytope == 5);
  CHECK(p.delta == doctest::Approx(0.000625).epsilon(1e-12));

  ClassParams q = class_params(1, 0.1, 1.0, 1.0, 1.0);
  CHECK(q.levels == 24);
  CHECK(q.facets_per_polytope == 1);

  ClassParams r = class_params(3, 0.2, 1.0, 1.0, 1.0);
  CHECK(r.levels == 12);
  CHECK(r.facets_per_polytope == 15);
  CHECK(r.delta == doctest::Approx(5.486968449931414e-05).epsilon(1e-12));

  ClassParams d = class_params(2, 0.1);  // default constants
  CHECK(d.levels == 147);
  CHECK(d.facets_per_polytope == 18);
  CHECK(d.delta == doctest::Approx(3.90625e-05).epsilon(1e-12));

  CHECK_THROWS_AS(class_params(2, 0.0), ConfigError);
  CHECK_THROWS_AS(class_params(2, 0.6), ConfigError);
  CHECK_THROWS_AS(class_params(0, 0.1), ConfigError);
}

TEST_CASE("geometric ladder") {
  std::vector<double> l = ladder(1.0, 0.5, 3);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == 0.5);
  CHECK(l[1] == 0.25);
  CHECK(l[2] == 0.125);
  CHECK_THROWS_AS(ladder(0.0, 0.5, 3), ConfigError);
}

namespace {

Polytope box1d(double lo, double hi) {
  return Polytope::from_halfspaces(
      {Halfspace::make(Vec{1.0}, hi), Halfspace::make(Vec{-1.0}, -lo)});
}

}  // namespace

TEST_CASE("piecewise density: max rule, cdf, breakpoints") {
  std::vector<LevelPiece> pieces;
  pieces.push_back(LevelPiece{1.0, box1d(0.0, 2.0)});
  pieces.push_back(LevelPiece{2.0, box1d(0.5, 1.5)});
  PiecewisePolytopeDensity g(1, std::move(pieces));

  CHECK(g.top_height() == 2.0);  // sorted descending regardless of input order
  CHECK(g.eval(Vec{0.25}) == 1.0);
  CHECK(g.eval(Vec{1.0}) == 2.0);
  CHECK(g.eval(Vec{2.5}) == 0.0);
  CHECK(g.eval(Vec{1.0}) == g.eval_first_hit(Vec{1.0}));
  CHECK(g.step_function_1d());

  REQUIRE(g.cdf1d(1.0).has_value());
  CHECK(*g.cdf1d(1.0) == doctest::Approx(1.5).epsilon(1e-14));   // 0.5*1 + 0.5*2
  CHECK(*g.cdf1d(100.0) == doctest::Approx(3.0).epsilon(1e-14)); // total mass
  auto bp = g.breakpoints1d();
  REQUIRE(bp.has_value());
  CHECK(bp->size() == 4);

  SetPredicate top = g.superlevel_predicate(1.5);
  CHECK(top.contains(Vec{1.0}));
  CHECK_FALSE(top.contains(Vec{0.25}));
}

TEST_CASE("one dimensional ladder approximation dominates and packs mass") {
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1));
  ApproxConfig cfg;
  cfg.epsilon = 0.3;
  cfg.c_L = 1.0;
  Approximation ap = build_approximation(f, cfg);
  REQUIRE(ap.density != nullptr);
  CHECK(ap.levels.size() == ap.params.levels);  // no top level for a gaussian peak
  CHECK_FALSE(ap.density->pieces().empty());

  // domination on a deterministic grid
  for (int i = -300; i <= 300; ++i) {
    Vec x{i * 0.02};
    CHECK(ap.density->eval(x) <= f.eval(x) * (1.0 + 1e-9));
  }
  // each diagnostic is certified
  for (const LevelDiagnostics& d : ap.diagnostics) {
    if (d.skipped || d.merged) continue;
    CHECK(d.target_met);
  }
  // mass below one, but not vanishing
  L1Report l1 = approximation_l1_error(f, *ap.density, 100000, 5);
  CHECK(l1.mass <= 1.0 + 1e-9);
  CHECK(l1.mass > 0.5);
  CHECK(l1.domination_violations == 0);
  CHECK(l1.l1 < 1.0);
}

TEST_CASE("two dimensional approximation stays under the density") {
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  ApproxConfig cfg;
  cfg.epsilon = 0.4;
  cfg.mc_budget = 50000;
  Approximation ap = build_approximation(f, cfg);
  L1Report l1 = approximation_l1_error(f, *ap.density, 50000, 11);
  CHECK(l1.domination_violations == 0);
  CHECK(l1.mass <= 1.0 + 1e-9);
  CHECK(l1.l1 < 1.5);

  // policy independence, bit for bit
  ApproxConfig scfg = cfg;
  scfg.exec = Exec::Serial;
  Approximation as = build_approximation(f, scfg);
  REQUIRE(as.density->pieces().size() == ap.density->pieces().size());
  for (std::size_t i = 0; i < as.density->pieces().size(); ++i)
    CHECK(as.density->pieces()[i].y == ap.density->pieces()[i].y);
  L1Report l1s = approximation_l1_error(f, *as.density, 50000, 11, Exec::Serial);
  CHECK(l1s.l1 == l1.l1);
  CHECK(l1s.mass == l1.mass);
}

TEST_CASE("uniform density collapses to a single piece") {
  LogConcaveDensity u =
      LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{0.0, 0.0}, Vec{1.0, 2.0}));
  ApproxConfig cfg;
  cfg.epsilon = 0.2;
  Approximation ap = build_approximation(u, cfg);
  // every level set equals the support, so the pieces collapse to one
  CHECK(ap.density->pieces().size() == 1);
  CHECK(ap.density->pieces()[0].y == doctest::Approx(0.5).epsilon(1e-12));
  L1Report l1 = approximation_l1_error(u, *ap.density, 50000, 3);
  CHECK(l1.l1 < 1e-6);
}

TEST_CASE("tail mass at extreme cuts") {
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1));
  TailMassEstimate low = tail_mass(f, 1e-9, 100000, 7);
  CHECK(low.value < 1e-3);
  TailMassEstimate high = tail_mass(f, f.max_value(), 100000, 7);
  CHECK(std::abs(high.value - 1.0) < 4.0 * high.std_err + 1e-6);
}

TEST_CASE("volume sandwich holds for a certified ladder") {
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  ApproxConfig cfg;
  cfg.epsilon = 0.2;
  Approximation ap = build_approximation(f, cfg);
  const double y1 = ap.levels.front();
  const double yl = ap.levels.back();
  std::vector<double> heights = {yl * 2.0, std::sqrt(y1 * yl), y1 * 0.5};
  SandwichReport r = volume_sandwich_check(f, *ap.density, 0.2, heights, 100000, 13);
  CHECK(r.points.size() == 3);
  CHECK(r.all_pass);
}
