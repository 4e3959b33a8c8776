#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "logcave/densities.hpp"
#include "logcave/linalg.hpp"

using namespace logcave;

TEST_CASE("standard gaussian closed forms") {
  LogConcaveDensity g = LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1));
  CHECK(g.eval(Vec{0.0}) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(g.max_value() == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  REQUIRE(g.cdf1d(0.0).has_value());
  CHECK(*g.cdf1d(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(*g.cdf1d(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK_FALSE(g.step_function_1d());

  LogConcaveDensity g2 = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  CHECK(g2.max_value() == doctest::Approx(0.15915494309189535).epsilon(1e-14));
  CHECK_FALSE(g2.cdf1d(0.0).has_value());
  CHECK_THROWS_AS(LogConcaveDensity::gaussian(Vec{0.0, 0.0}, Mat::identity(3)), ConfigError);
}

TEST_CASE("gaussian sampling moments") {
  LogConcaveDensity g = LogConcaveDensity::gaussian(Vec{1.0}, Mat::identity(1));
  std::vector<Vec> xs = sample(g, 42, 20000);
  REQUIRE(xs.size() == 20000);
  double mean = 0.0, var = 0.0;
  for (const Vec& x : xs) mean += x[0];
  mean /= 20000.0;
  for (const Vec& x : xs) var += (x[0] - mean) * (x[0] - mean);
  var /= 19999.0;
  CHECK(std::abs(mean - 1.0) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.06);
}

TEST_CASE("gaussian level sets are balls with exact volume") {
  LogConcaveDensity g = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  auto ls = g.level_set(g.max_value() / 2.0);
  REQUIRE(ls.has_value());
  // radius^2 = 2 ln 2
  const double r = std::sqrt(2.0 * std::log(2.0));
  CHECK(ls->member(Vec{0.999 * r, 0.0}));
  CHECK_FALSE(ls->member(Vec{1.001 * r, 0.0}));
  REQUIRE(ls->exact_volume.has_value());
  CHECK(*ls->exact_volume == doctest::Approx(4.355172180607204).epsilon(1e-12));
  CHECK_FALSE(g.level_set(g.max_value() * 1.01).has_value());
}

TEST_CASE("uniform density over a box") {
  LogConcaveDensity u = LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{0.0}, Vec{2.0}));
  CHECK(u.eval(Vec{1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(u.eval(Vec{2.5}) == 0.0);
  CHECK(u.step_function_1d());
  REQUIRE(u.cdf1d(1.0).has_value());
  CHECK(*u.cdf1d(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  auto bp = u.breakpoints1d();
  REQUIRE(bp.has_value());
  CHECK(bp->size() == 2);
  std::vector<Vec> xs = sample(u, 9, 5000);
  for (const Vec& x : xs) {
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 2.0);
  }
}

TEST_CASE("product exponential closed forms") {
  LogConcaveDensity e = LogConcaveDensity::product_exponential(Vec{2.0});
  CHECK(e.eval(Vec{0.5}) == doctest::Approx(0.7357588823428847).epsilon(1e-14));
  CHECK(e.eval(Vec{-0.1}) == 0.0);
  REQUIRE(e.cdf1d(0.5).has_value());
  CHECK(*e.cdf1d(0.5) == doctest::Approx(0.6321205588285577).epsilon(1e-14));
  CHECK(e.max_value() == doctest::Approx(2.0));
  CHECK_THROWS_AS(LogConcaveDensity::product_exponential(Vec{-1.0}), ConfigError);
}

TEST_CASE("product laplace closed forms") {
  LogConcaveDensity l = LogConcaveDensity::product_laplace(Vec{1.0}, Vec{1.0});
  CHECK(l.eval(Vec{1.0}) == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(l.cdf1d(2.0).has_value());
  CHECK(*l.cdf1d(2.0) == doctest::Approx(0.8160602794142788).epsilon(1e-12));
  std::vector<Vec> xs = sample(l, 3, 20000);
  double mean = 0.0;
  for (const Vec& x : xs) mean += x[0];
  CHECK(std::abs(mean / 20000.0 - 1.0) < 0.05);
}

TEST_CASE("generic density evaluates but cannot sample") {
  LogConcaveDensity q = LogConcaveDensity::generic(
      1, [](const Vec& x) { return -std::pow(std::abs(x[0]), 4.0); }, Vec{0.0},
      Box{Vec{-3.0}, Vec{3.0}});
  CHECK(q.eval(Vec{0.0}) == doctest::Approx(1.0));
  CHECK(q.eval(Vec{1.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK_FALSE(q.has_sampler());
  Rng rng = make_rng(1);
  std::vector<Vec> out;
  CHECK_THROWS(q.sample_into(rng, out, 3));
}

TEST_CASE("contaminated mixture evaluates and samples as a blend") {
  auto cont = std::make_shared<LogConcaveDensity>(
      LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{10.0}, Vec{11.0})));
  ContaminatedDensity mix(LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1)), cont, 0.1);
  CHECK(mix.eval(Vec{0.0}) == doctest::Approx(0.9 * 0.3989422804014327).epsilon(1e-12));
  CHECK(mix.eval(Vec{10.5}) == doctest::Approx(0.1 * 1.0).epsilon(1e-12));
  REQUIRE(mix.cdf1d(20.0).has_value());
  CHECK(*mix.cdf1d(20.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*mix.cdf1d(9.0) == doctest::Approx(0.9).epsilon(1e-9));
  auto bp = mix.breakpoints1d();
  REQUIRE(bp.has_value());
  CHECK(bp->size() >= 2);  // contaminant support endpoints
  CHECK_FALSE(mix.step_function_1d());

  std::vector<Vec> xs = sample(mix, 77, 20000);
  std::size_t high = 0;
  for (const Vec& x : xs) high += x[0] > 9.0 ? 1 : 0;
  const double frac = static_cast<double>(high) / 20000.0;
  CHECK(std::abs(frac - 0.1) < 4.0 * std::sqrt(0.1 * 0.9 / 20000.0));

  CHECK_THROWS_AS(
      ContaminatedDensity(LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1)), cont, 1.5),
      ConfigError);
}

TEST_CASE("sampling is deterministic in the seed") {
  LogConcaveDensity g = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  std::vector<Vec> a = sample(g, 123, 50);
  std::vector<Vec> b = sample(g, 123, 50);
  CHECK(a == b);
  std::vector<Vec> c = sample(g, 124, 50);
  CHECK(a != c);
}
