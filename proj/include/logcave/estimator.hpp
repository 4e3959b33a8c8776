#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "logcave/densities.hpp"
#include "logcave/metrics.hpp"
#include "logcave/parallel.hpp"
#include "logcave/structure.hpp"

namespace logcave {

// A finite set of candidate densities sharing one dimension.
struct CandidateClass {
  std::vector<std::shared_ptr<const Density>> members;
  int dim = 0;
};

// All ordered-pair comparison sets { x : g_i(x) >= g_j(x) }, i != j, listed
// with i varying slowest. In one dimension every predicate carries the
// breakpoints where the comparison flips (exact knots when both candidates
// are piecewise, sign-scan plus bisection on a grid of `grid_cells` cells
// otherwise), which unlocks exact integration downstream.
std::vector<SetPredicate> yatracos_family(const CandidateClass& cands,
                                          std::size_t grid_cells = 2048);

// Ordered pair (i, j) addressed by the flat set index used by yatracos_family
// and select().
std::pair<std::size_t, std::size_t> yatracos_pair(std::size_t set_index,
                                                  std::size_t member_count);

// Membership in { g >= g' } computed from the level structure: x qualifies
// iff some piece of g at height y holds x and no piece of g' strictly above
// y does. Agrees pointwise with comparing the two evaluations.
bool yatracos_membership_via_levels(const PiecewisePolytopeDensity& g,
                                    const PiecewisePolytopeDensity& gp, const Vec& x);

// Sample budget n = ceil(c * vc_dim / epsilon^2).
std::size_t required_samples(double vc_dim, double epsilon, double c = 1.0);

struct SelectOptions {
  std::size_t integral_budget = 200000;  // points for candidate integrals
  std::size_t grid_cells = 2048;         // 1-D breakpoint scan resolution
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

struct SelectionResult {
  std::size_t chosen_index = 0;
  std::vector<std::vector<double>> scores;  // [member][set]: |candidate - empirical|
  std::vector<double> row_max;              // worst score per member
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // set index -> (i, j)
  std::size_t sample_count = 0;
  bool exact_integrals = false;
  std::uint64_t seed = 0;
  std::size_t integral_budget = 0;
};

// Minimum-distance selection: pick the candidate whose worst disagreement
// with the empirical measure over the comparison sets is smallest (lowest
// index on ties). One dimension integrates exactly through CDFs; higher
// dimensions reuse a single deterministic point pool with cached candidate
// evaluations, so no density is evaluated twice at the same point.
SelectionResult select(const CandidateClass& cands, const EmpiricalDistribution& data,
                       const SelectOptions& opts = {});

struct GuaranteeTrial {
  std::size_t chosen = 0;
  double tv_chosen = 0.0;
  bool success = false;
};

struct GuaranteeReport {
  std::vector<double> candidate_tv;      // distance of each candidate to the truth
  std::vector<double> candidate_tv_err;
  double opt = 0.0;                      // best achievable distance in the class
  double opt_err = 0.0;
  std::vector<GuaranteeTrial> trials;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::size_t n_samples = 0;
};

struct GuaranteeOptions {
  std::size_t trials = 20;
  std::size_t n_samples = 200;
  std::size_t integral_budget = 200000;
  std::size_t tv_budget = 400000;
  std::size_t grid_cells = 2048;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

// Repeated draw-and-select runs against a known truth. A trial succeeds when
// the chosen candidate lands within 3*opt + epsilon of the truth (plus the
// statistical slack of the distance estimates themselves).
GuaranteeReport guarantee_harness(const Density& truth, const CandidateClass& cands,
                                  double epsilon, const GuaranteeOptions& opts = {});

}  // namespace logcave
