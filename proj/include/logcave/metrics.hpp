#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "logcave/common.hpp"
#include "logcave/densities.hpp"
#include "logcave/parallel.hpp"

namespace logcave {

// A measurable set given by its indicator. Closed-set convention: boundary
// points are members. breakpoints_1d, when present, lists points outside of
// which the indicator is constant on each gap — the hook for the exact
// one-dimensional integration path.
struct SetPredicate {
  int dimension = 0;
  std::function<bool(const Vec&)> contains;
  std::optional<std::vector<double>> breakpoints_1d;
};

// Immutable sample batch defining the empirical measure A -> #{X_i in A}/n.
struct EmpiricalDistribution {
  std::vector<Vec> samples;

  int dim() const { return samples.empty() ? 0 : static_cast<int>(samples[0].size()); }
  std::size_t n() const { return samples.size(); }
};

// Exact count ratio (integer arithmetic; no estimation error).
double empirical_measure(const EmpiricalDistribution& p, const SetPredicate& A);

enum class IntegrationMethod { Auto, Grid1D, MonteCarlo };

struct DistanceEstimate {
  double value = 0.0;
  double std_err = 0.0;  // MC: sampling error; grid: last refinement delta
  IntegrationMethod method = IntegrationMethod::Auto;
};

// Total variation distance (1/2)||f-g||_1. d=1 uses an adaptively refined
// grid (exact piecewise integration when both densities are step functions);
// d>=2 uses Monte Carlo with a half-f/half-g mixture proposal when both
// densities have samplers, otherwise uniform sampling over the joint box.
DistanceEstimate tv_distance(const Density& f, const Density& g,
                             IntegrationMethod method = IntegrationMethod::Auto,
                             std::size_t budget = 400000, std::uint64_t seed = 0,
                             Exec exec = Exec::Parallel);

// Squared Hellinger distance int (sqrt f - sqrt g)^2, same machinery.
DistanceEstimate hellinger_squared(const Density& f, const Density& g,
                                   IntegrationMethod method = IntegrationMethod::Auto,
                                   std::size_t budget = 400000, std::uint64_t seed = 0,
                                   Exec exec = Exec::Parallel);

struct HellingerEstimate {
  double h = 0.0;         // Hellinger distance
  DistanceEstimate h2;    // its square, with error bar
};
HellingerEstimate hellinger(const Density& f, const Density& g,
                            IntegrationMethod method = IntegrationMethod::Auto,
                            std::size_t budget = 400000, std::uint64_t seed = 0,
                            Exec exec = Exec::Parallel);

struct IntegralEstimate {
  double value = 0.0;
  double std_err = 0.0;
  bool exact = false;
  std::size_t evals = 0;
};

// int_A g. Exact when g has a 1-D CDF and A carries breakpoints; otherwise
// Monte Carlo over g's integration box (or box_override when given, which
// lets callers share one point stream across several integrals).
IntegralEstimate set_integral(const Density& g, const SetPredicate& A, std::size_t budget,
                              std::uint64_t seed = 0, Exec exec = Exec::Parallel,
                              const std::optional<Box>& box_override = std::nullopt);

// Probability measure argument for the A-norm: a density or an empirical
// distribution.
using Measure = std::variant<const Density*, const EmpiricalDistribution*>;

// ||p - q||_A = sup_{A in family} |p(A) - q(A)| over a finite family.
// Density measures share one common-random-number stream so the differences
// are tight; empirical measures are exact.
double anorm(Measure p, Measure q, const std::vector<SetPredicate>& family,
             std::size_t budget = 200000, std::uint64_t seed = 0, Exec exec = Exec::Parallel);

}  // namespace logcave
