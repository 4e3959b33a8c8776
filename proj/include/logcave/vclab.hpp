#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "logcave/densities.hpp"
#include "logcave/metrics.hpp"
#include "logcave/parallel.hpp"

namespace logcave {

// Set families whose dichotomies on a finite point set can be enumerated.
enum class SetFamilyKind {
  Intervals1D,  // closed intervals [a, b] on the line (plus the empty set)
  Halfspaces,   // {x : a.x <= b}, dimension 1 or 2
  FiniteList,   // exactly the listed predicates
};

struct SetFamilyHandle {
  SetFamilyKind kind = SetFamilyKind::FiniteList;
  int dimension = 1;
  std::vector<SetPredicate> sets;  // FiniteList only

  static SetFamilyHandle intervals_1d();
  static SetFamilyHandle halfspaces(int dimension);
  static SetFamilyHandle finite_list(int dimension, std::vector<SetPredicate> sets);
};

// Number of distinct subsets of `points` the family can pick out. Exact
// combinatorial enumeration for intervals and halfspaces (projection sweep);
// direct evaluation for finite lists. Points must be distinct; at most 20.
std::size_t dichotomy_count(const SetFamilyHandle& family, const std::vector<Vec>& points);

// True when every one of the 2^n subsets is realized.
bool shatters(const SetFamilyHandle& family, const std::vector<Vec>& points);

struct ShatterReport {
  std::size_t shattered_size = 0;  // largest witnessed shattered subset
  std::vector<Vec> witness;
  bool exhaustive = false;  // all subsets one size larger were refuted
  std::size_t tested_sets = 0;
};

// Largest shattered subset drawn from a candidate pool. Subset enumeration is
// exhaustive while the count stays under `subset_cap`; beyond that a seeded
// random sample of subsets is tried and the result is only a lower bound.
ShatterReport vc_estimate(const SetFamilyHandle& family, const std::vector<Vec>& pool,
                          std::size_t max_size = 8, std::size_t subset_cap = 200000,
                          std::uint64_t seed = 0);

// log of the theoretical ceiling (2L)! * (c n)^(2 d L H) on the number of
// dichotomies n points admit from level-set differences.
double growth_bound_log(std::size_t n, int dim, std::size_t levels, std::size_t facets,
                        double c = 1.0);

struct GrowthReport {
  std::size_t points = 0;
  std::size_t distinct = 0;   // dichotomies realized by the given sets
  double log_distinct = 0.0;
  double log_bound = 0.0;     // growth_bound_log at the same size
  bool within = false;
};

GrowthReport growth_count(const std::vector<SetPredicate>& family, const std::vector<Vec>& points,
                          int dim, std::size_t levels, std::size_t facets, double c = 1.0);

// Exact sup over closed intervals of |empirical([a,b]) - true([a,b])| for a
// one-dimensional sample against a reference CDF. O(n log n).
double interval_sup_statistic(std::vector<double> samples,
                              const std::function<double(double)>& cdf);

struct RatePoint {
  std::size_t n = 0;
  double mean_sup = 0.0;
  double std_err = 0.0;
  std::size_t replicates = 0;
};

struct RateReport {
  std::vector<RatePoint> points;
  double slope = 0.0;      // of log mean_sup against log n; theory: -1/2
  double intercept = 0.0;
};

// Empirical-process decay: draw samples of increasing size from f, measure
// the interval sup statistic, fit the log-log slope.
RateReport vc_rate_experiment(const LogConcaveDensity& f, const std::vector<std::size_t>& sizes,
                              std::size_t replicates, std::uint64_t seed = 0,
                              Exec exec = Exec::Parallel);

}  // namespace logcave
