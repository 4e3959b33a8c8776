#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "logcave/densities.hpp"
#include "logcave/geometry.hpp"
#include "logcave/metrics.hpp"
#include "logcave/parallel.hpp"

namespace logcave {

// Size of the approximating class: number of ladder levels, facet budget per
// polytope, and the relative height below which the density tail is ignored.
struct ClassParams {
  std::size_t levels = 0;             // L
  std::size_t facets_per_polytope = 0;  // H
  double delta = 0.0;                 // relative cutoff height
};

// levels  = ceil(c_L * ((1/eps) log(1/eps) + d log d))
// facets  = ceil(c_H * (d/eps)^((d-1)/2))
// delta   = eps^2 / (c_delta * d)^(2d)
ClassParams class_params(int dim, double epsilon, double c_L = 6.0, double c_H = 4.0,
                         double c_delta = 2.0);

// Geometric height ladder y_i = max_value * (1-eps)^i for i = 1..levels.
std::vector<double> ladder(double max_value, double epsilon, std::size_t levels);

struct ApproxConfig {
  double epsilon = 0.1;
  double c_L = 6.0;
  double c_H = 4.0;
  double c_delta = 2.0;
  std::optional<std::size_t> level_override;  // use instead of the L formula
  std::optional<std::size_t> facet_override;  // use instead of the H formula
  bool include_top_level = true;  // add y_0 = max f when its level set has volume
  std::size_t mc_budget = 200000; // per-level budget for volume estimates
  double tol = 1e-12;             // boundary-point tolerance
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

// One rung of the approximation: constant height on a polytope.
struct LevelPiece {
  double y = 0.0;
  Polytope polytope;
};

// Piecewise-constant function x -> max{ y_j : x in P_j }, zero outside all
// pieces. Pieces are kept sorted by descending height, which makes the
// first-hit rule agree with the max rule.
class PiecewisePolytopeDensity final : public Density {
 public:
  PiecewisePolytopeDensity(int dim, std::vector<LevelPiece> pieces);

  int dim() const override { return dim_; }
  double eval(const Vec& x) const override;       // max over containing pieces
  double eval_first_hit(const Vec& x) const;      // first containing piece in stored order
  Box integration_box() const override { return box_; }
  std::optional<double> cdf1d(double x) const override;
  std::optional<std::vector<double>> breakpoints1d() const override;
  bool step_function_1d() const override { return dim_ == 1; }

  const std::vector<LevelPiece>& pieces() const { return pieces_; }
  double top_height() const { return pieces_.front().y; }

  // Indicator of { x : g(x) >= y } = union of pieces at height >= y.
  SetPredicate superlevel_predicate(double y) const;
  // Joint bounding box of the pieces at height >= y.
  Box superlevel_box(double y) const;

 private:
  int dim_ = 0;
  std::vector<LevelPiece> pieces_;
  Box box_;
  // 1-D only: sorted endpoints and prefix integrals for the exact CDF.
  std::vector<double> knots_;
  std::vector<double> prefix_;
};

struct LevelDiagnostics {
  double y = 0.0;
  std::size_t facets = 0;
  double deficit = 0.0;      // relative volume missed: 1 - vol(P)/vol(level set)
  double deficit_err = 0.0;
  bool exact = false;        // both volumes computed in closed form
  bool target_met = false;   // deficit certified <= epsilon
  bool skipped = false;      // level set had no volume; no piece emitted
  bool reused_exact_form = false;  // level set already a small-facet polytope
  bool merged = false;       // identical to the piece above; collapsed away
};

struct Approximation {
  std::shared_ptr<PiecewisePolytopeDensity> density;
  ClassParams params;
  std::vector<double> levels;              // ladder actually used
  std::vector<LevelDiagnostics> diagnostics;  // one entry per ladder level
};

// Inscribe a polytope in every level set of f down the ladder. Levels whose
// set has zero volume are skipped; identical consecutive pieces collapse.
Approximation build_approximation(const LogConcaveDensity& f, const ApproxConfig& cfg = {});

// integral of min(f, y_cut): the mass the ladder is allowed to ignore below
// its last rung. Estimated as P(f(X) <= y_cut) + y_cut * vol({f >= y_cut}).
struct TailMassEstimate {
  double value = 0.0;
  double std_err = 0.0;
  double below_prob = 0.0;    // P(f(X) <= y_cut)
  double level_volume = 0.0;  // vol({f >= y_cut})
};
TailMassEstimate tail_mass(const LogConcaveDensity& f, double y_cut, std::size_t budget = 200000,
                           std::uint64_t seed = 0, Exec exec = Exec::Parallel);

// Volume of { g >= y } for a piecewise-polytope g (exact when a single piece
// qualifies and has a closed-form volume; Monte Carlo over the joint box
// otherwise).
VolumeEstimate superlevel_volume(const PiecewisePolytopeDensity& g, double y,
                                 std::size_t budget = 200000, std::uint64_t seed = 0,
                                 Exec exec = Exec::Parallel);

// Check vol({g >= y}) >= (1-eps) * vol({f >= y/(1-eps)}) at the given heights.
struct SandwichPoint {
  double y = 0.0;
  double lhs = 0.0;      // vol({g >= y})
  double lhs_err = 0.0;
  double rhs = 0.0;      // vol({f >= y/(1-eps)})
  double rhs_err = 0.0;
  bool pass = false;
};
struct SandwichReport {
  std::vector<SandwichPoint> points;
  bool all_pass = true;
};
SandwichReport volume_sandwich_check(const LogConcaveDensity& f,
                                     const PiecewisePolytopeDensity& g, double epsilon,
                                     const std::vector<double>& heights,
                                     std::size_t budget = 200000, std::uint64_t seed = 0,
                                     Exec exec = Exec::Parallel);

// L1 gap between f and an approximation g that should sit below f.
struct L1Report {
  double l1 = 0.0;        // integral of |f - g|
  double l1_err = 0.0;
  double mass = 0.0;      // integral of g
  double mass_err = 0.0;
  std::size_t domination_violations = 0;  // points with g(x) > f(x) beyond rounding
};
L1Report approximation_l1_error(const LogConcaveDensity& f, const PiecewisePolytopeDensity& g,
                                std::size_t budget = 200000, std::uint64_t seed = 0,
                                Exec exec = Exec::Parallel);

}  // namespace logcave
