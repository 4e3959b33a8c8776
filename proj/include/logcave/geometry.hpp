#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "logcave/common.hpp"
#include "logcave/parallel.hpp"

namespace logcave {

// Default relative tolerance for membership queries.
inline constexpr double kContainTol = 1e-12;

// Closed halfspace {x : normal . x <= offset} with unit normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  // Normalizes the normal (and rescales the offset to match); throws
  // ConfigError on a zero normal.
  static Halfspace make(Vec a, double b);

  int dim() const { return static_cast<int>(normal.size()); }

  // Signed slack: >= 0 inside, < 0 outside.
  double slack(const Vec& x) const { return offset - dot(normal, x); }

  // Membership with relative tolerance: a.x <= b + tol * scale where scale
  // covers the magnitude of the numbers involved.
  bool contains(const Vec& x, double rel_tol = kContainTol) const;
};

// Intersection of halfspaces. An empty list means the whole space. The
// vertex cache is populated by the constructions that know the vertices
// (interval solving in d=1, hulls and halfspace intersection in d=2,
// hulls in d=3); manual d>=3 halfspace lists have no cache.
struct Polytope {
  std::vector<Halfspace> facets;
  std::optional<std::vector<Vec>> vertices;
  bool bounded = false;
  int dimension = 0;

  int dim() const { return dimension; }
  int facet_count() const { return static_cast<int>(facets.size()); }

  double slack(const Vec& x) const;  // min facet slack (+inf convention for no facets)
  bool contains(const Vec& x, double rel_tol = kContainTol) const;

  // Requires the vertex cache.
  Box bounding_box() const;

  // Builds from a halfspace list: deduplicates near-identical facets, and
  // for d <= 2 recovers vertices and boundedness exactly.
  static Polytope from_halfspaces(std::vector<Halfspace> hs);

  // Convex hull of a point set (d <= 3). Throws if the points are affinely
  // dependent (degenerate hull).
  static Polytope hull_of(const std::vector<Vec>& points);
};

// Convex body given by an exact membership oracle plus the geometry needed
// to probe it: a strictly interior point and a finite bounding box.
// signed_slack is any continuous function positive inside / negative
// outside; membership is slack >= 0 (boundary included).
struct ConvexBody {
  int dimension = 0;
  std::function<double(const Vec&)> signed_slack;
  Vec interior_point;
  Box box;
  std::optional<double> exact_volume;
  std::optional<Polytope> polytope_form;

  int dim() const { return dimension; }
  bool member(const Vec& x) const { return signed_slack(x) >= 0.0; }

  static ConvexBody ball(int d, Vec center, double radius);
  // {x : (x-c)^T A (x-c) <= r2}, A SPD given with its det for exact volume.
  static ConvexBody ellipsoid(Vec center, const struct Mat& A, double r2);
  static ConvexBody make_box(Vec lo, Vec hi);
  static ConvexBody from_polytope(Polytope p);
};

enum class DirScheme { Auto, UniformAngle, FibonacciSphere, QuasiRandom };

// m unit vectors in R^d: evenly spaced angles for d=2, a Fibonacci spiral
// for d=3, seeded normalized Gaussians for d>=4 (and d=1 alternates +-1).
// Requires m >= d+1 so a full-dimensional hull is possible.
std::vector<Vec> sphere_directions(int d, int m, DirScheme scheme = DirScheme::Auto,
                                   std::uint64_t seed = 0);

// Walks from an interior point along direction u to the boundary of K by
// bracketing + bisection; returns origin + t* u where membership holds at
// t* - tol and fails at t* + tol. Throws if origin is not strictly inside
// or the bounding box does not actually bound K along the ray.
Vec ray_boundary(const ConvexBody& K, const Vec& origin, const Vec& u, double tol = 1e-12);

// Convex hull of the m ray-boundary points along sphere_directions from the
// interior point: an inscribed polytope of K with at most ~2m facets.
Polytope inscribed_polytope(const ConvexBody& K, int m, std::uint64_t seed = 0,
                            double tol = 1e-12, DirScheme scheme = DirScheme::Auto);

enum class VolumeMethod { Auto, Exact1D, Exact2D, MonteCarlo };

struct VolumeEstimate {
  double value = 0.0;
  double std_err = 0.0;
  VolumeMethod method = VolumeMethod::Auto;
  std::size_t sample_count = 0;
};

// Exact interval length (d=1), exact shoelace area (d=2 with vertices), or
// hit-fraction Monte Carlo over the bounding box. Auto picks the best
// available. MC is chunk-deterministic in the seed.
VolumeEstimate volume(const ConvexBody& K, VolumeMethod method = VolumeMethod::Auto,
                      std::size_t mc_samples = 100000, std::uint64_t seed = 0,
                      Exec exec = Exec::Parallel);
VolumeEstimate volume(const Polytope& P, VolumeMethod method = VolumeMethod::Auto,
                      std::size_t mc_samples = 100000, std::uint64_t seed = 0,
                      Exec exec = Exec::Parallel);

// Joint Monte Carlo estimate of (vol(K), vol(K \ P)) for P inside K, using
// one stream of common random points over K's bounding box; the deficit
// difference is a direct Bernoulli estimate, far tighter than subtracting
// two independent volumes.
struct DeficitEstimate {
  double vol_body = 0.0, vol_body_err = 0.0;
  double deficit_abs = 0.0, deficit_abs_err = 0.0;
  std::size_t sample_count = 0;
};
DeficitEstimate mc_deficit(const ConvexBody& K, const Polytope& P, std::size_t mc_samples,
                           std::uint64_t seed, Exec exec = Exec::Parallel);

// Exact area of a simple polygon given as an ordered vertex cycle.
double shoelace_area(const std::vector<Vec>& cycle);

}  // namespace logcave
