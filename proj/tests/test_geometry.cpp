#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logcave/geometry.hpp"

using namespace logcave;

TEST_CASE("halfspace normalization") {
  Halfspace h = Halfspace::make(Vec{3.0, 4.0}, 10.0);
  CHECK(std::abs(norm(h.normal) - 1.0) < 1e-15);
  CHECK(h.offset == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h.contains(Vec{0.0, 0.0}));
  CHECK(h.contains(Vec{1.2, 1.6}));  // boundary point
  CHECK_FALSE(h.contains(Vec{2.0, 2.0}));
  CHECK_THROWS_AS(Halfspace::make(Vec{0.0, 0.0}, 1.0), ConfigError);
}

TEST_CASE("hull of the unit square") {
  Polytope p = Polytope::hull_of({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
  CHECK(p.dim() == 2);
  CHECK(p.facet_count() == 4);
  CHECK(p.bounded);
  CHECK(p.contains(Vec{0.5, 0.5}));
  CHECK(p.contains(Vec{1.0, 1.0}));
  CHECK_FALSE(p.contains(Vec{1.01, 0.5}));
  Box b = p.bounding_box();
  CHECK(b.lo[0] == doctest::Approx(0.0));
  CHECK(b.hi[1] == doctest::Approx(1.0));
  CHECK_THROWS(Polytope::hull_of({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}));  // collinear
}

TEST_CASE("halfspace list recovers square vertices in 2-D") {
  std::vector<Halfspace> hs = {
      Halfspace::make(Vec{1.0, 0.0}, 1.0),  Halfspace::make(Vec{-1.0, 0.0}, 0.0),
      Halfspace::make(Vec{0.0, 1.0}, 1.0),  Halfspace::make(Vec{0.0, -1.0}, 0.0),
      Halfspace::make(Vec{2.0, 0.0}, 2.0),  // duplicate of the first once normalized
  };
  Polytope p = Polytope::from_halfspaces(hs);
  CHECK(p.facet_count() == 4);
  CHECK(p.bounded);
  REQUIRE(p.vertices.has_value());
  CHECK(p.vertices->size() == 4);
}

TEST_CASE("shoelace area of a right triangle") {
  CHECK(shoelace_area({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sphere directions are unit and well spread") {
  std::vector<Vec> d2 = sphere_directions(2, 8);
  REQUIRE(d2.size() == 8);
  for (const Vec& u : d2) CHECK(std::abs(norm(u) - 1.0) < 1e-12);
  std::vector<Vec> d3 = sphere_directions(3, 32);
  REQUIRE(d3.size() == 32);
  for (const Vec& u : d3) CHECK(std::abs(norm(u) - 1.0) < 1e-12);
  CHECK_THROWS_AS(sphere_directions(2, 2), ConfigError);  // below d+1
}

TEST_CASE("ray boundary of the unit disk") {
  ConvexBody disk = ConvexBody::ball(2, Vec{0.0, 0.0}, 1.0);
  Vec p = ray_boundary(disk, Vec{0.0, 0.0}, Vec{1.0, 0.0});
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(p[1]) < 1e-12);
  CHECK_THROWS(ray_boundary(disk, Vec{2.0, 0.0}, Vec{1.0, 0.0}));  // origin outside
}

TEST_CASE("inscribed hexagon has the closed-form area") {
  ConvexBody disk = ConvexBody::ball(2, Vec{0.0, 0.0}, 1.0);
  Polytope hex = inscribed_polytope(disk, 6);
  VolumeEstimate v = volume(hex, VolumeMethod::Exact2D);
  CHECK(std::abs(v.value - 2.598076211353316) <= 1e-9);
  CHECK(v.std_err == 0.0);
}

TEST_CASE("volume paths agree on simple bodies") {
  ConvexBody box = ConvexBody::make_box(Vec{0.0, 0.0}, Vec{2.0, 0.5});
  CHECK(volume(box).value == doctest::Approx(1.0).epsilon(1e-12));

  ConvexBody disk = ConvexBody::ball(2, Vec{0.0, 0.0}, 1.0);
  VolumeEstimate mc = volume(disk, VolumeMethod::MonteCarlo, 200000, 11);
  CHECK(std::abs(mc.value - 3.141592653589793) < 4.0 * mc.std_err);

  ConvexBody seg = ConvexBody::make_box(Vec{-1.0}, Vec{3.0});
  CHECK(volume(seg, VolumeMethod::Exact1D).value == doctest::Approx(4.0));
}

TEST_CASE("joint deficit estimate matches the direct difference") {
  ConvexBody disk = ConvexBody::ball(2, Vec{0.0, 0.0}, 1.0);
  Polytope square = inscribed_polytope(disk, 4);
  DeficitEstimate de = mc_deficit(disk, square, 400000, 5);
  const double truth = 3.141592653589793 - 2.0;  // disk minus inscribed square
  CHECK(std::abs(de.deficit_abs - truth) < 4.0 * de.deficit_abs_err);
  CHECK(de.deficit_abs_err < 0.02);
  CHECK(std::abs(de.vol_body - 3.141592653589793) < 4.0 * de.vol_body_err);
}

TEST_CASE("serial and parallel volume kernels agree bitwise") {
  ConvexBody ball = ConvexBody::ball(3, Vec(3, 0.0), 1.0);
  Polytope p = inscribed_polytope(ball, 32);
  VolumeEstimate a = volume(p, VolumeMethod::MonteCarlo, 300000, 17, Exec::Serial);
  VolumeEstimate b = volume(p, VolumeMethod::MonteCarlo, 300000, 17, Exec::Parallel);
  CHECK(a.value == b.value);
  CHECK(a.std_err == b.std_err);
  DeficitEstimate ds = mc_deficit(ball, p, 300000, 17, Exec::Serial);
  DeficitEstimate dp = mc_deficit(ball, p, 300000, 17, Exec::Parallel);
  CHECK(ds.deficit_abs == dp.deficit_abs);
  CHECK(ds.vol_body == dp.vol_body);
}

TEST_CASE("deficit shrinks as directions grow") {
  ConvexBody disk = ConvexBody::ball(2, Vec{0.0, 0.0}, 1.0);
  double prev = 1.0;
  for (int m : {8, 16, 32}) {
    Polytope p = inscribed_polytope(disk, m);
    double deficit = 1.0 - volume(p, VolumeMethod::Exact2D).value / 3.141592653589793;
    CHECK(deficit > 0.0);
    CHECK(deficit < prev);
    prev = deficit;
  }
}
