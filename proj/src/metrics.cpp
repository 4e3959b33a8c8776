#include "logcave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logcave/mc.hpp"

namespace logcave {

double empirical_measure(const EmpiricalDistribution& p, const SetPredicate& A) {
  if (p.samples.empty()) throw ConfigError("empirical_measure: empty sample set");
  std::size_t hits = 0;
  for (const Vec& x : p.samples)
    if (A.contains(x)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(p.n());
}

namespace {

// Union of the two densities' breakpoint lists (possibly empty).
std::vector<double> merged_breakpoints(const Density& f, const Density& g) {
  std::vector<double> b;
  if (auto bf = f.breakpoints1d()) b.insert(b.end(), bf->begin(), bf->end());
  if (auto bg = g.breakpoints1d()) b.insert(b.end(), bg->begin(), bg->end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Exact integral of integrand(f(x), g(x)) when both are step functions:
// constant on every gap between merged breakpoints, zero outside them.
template <typename Integrand>
double exact_step_integral(const Density& f, const Density& g, const std::vector<double>& bps,
                           Integrand&& integrand) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    double lo = bps[i], hi = bps[i + 1];
    if (!(hi > lo)) continue;
    Vec mid{0.5 * (lo + hi)};
    total += (hi - lo) * integrand(f.eval(mid), g.eval(mid));
  }
  return total;
}

struct RefineResult {
  double value = 0.0;
  double delta = 0.0;  // size of the last refinement step
  std::size_t evals = 0;
  bool converged = false;
};

// Trapezoid refinement with Simpson extrapolation until successive Simpson
// values agree. Never throws: the caller inspects `converged`.
template <typename Fn>
RefineResult refine_1d(Fn&& fn, double lo, double hi, std::size_t budget, double tol,
                       std::size_t min_intervals) {
  RefineResult out;
  out.evals = 2;
  double trap = 0.5 * (hi - lo) * (fn(lo) + fn(hi));
  double simpson = trap;
  std::size_t intervals = 1;
  for (int level = 0; level < 48; ++level) {
    if (out.evals + intervals > budget) break;
    double h = (hi - lo) / static_cast<double>(intervals);
    double mids = 0.0;
    for (std::size_t i = 0; i < intervals; ++i) mids += fn(lo + (static_cast<double>(i) + 0.5) * h);
    out.evals += intervals;
    double trap_next = 0.5 * trap + 0.5 * h * mids;
    double simpson_next = (4.0 * trap_next - trap) / 3.0;
    out.delta = std::fabs(simpson_next - simpson);
    simpson = simpson_next;
    trap = trap_next;
    intervals *= 2;
    if (intervals >= min_intervals && out.delta <= std::max(tol, 1e-13 * std::fabs(simpson))) {
      out.converged = true;
      break;
    }
  }
  out.value = simpson;
  return out;
}

template <typename Integrand>
DistanceEstimate integral_distance(const Density& f, const Density& g, Integrand&& integrand,
                                   IntegrationMethod method, std::size_t budget,
                                   std::uint64_t seed, Exec exec) {
  if (f.dim() != g.dim()) throw ConfigError("distance: dimension mismatch");
  const int d = f.dim();
  if (method == IntegrationMethod::Auto)
    method = d == 1 ? IntegrationMethod::Grid1D : IntegrationMethod::MonteCarlo;

  if (method == IntegrationMethod::Grid1D) {
    if (d != 1) throw ConfigError("grid-1d integration requested for d != 1");
    std::vector<double> knots = merged_breakpoints(f, g);
    if (f.step_function_1d() && g.step_function_1d())
      return DistanceEstimate{exact_step_integral(f, g, knots, integrand), 0.0,
                              IntegrationMethod::Grid1D};

    // Split the domain at every known discontinuity, then refine each smooth
    // segment adaptively.
    Box box = box_union(f.integration_box(), g.integration_box());
    std::vector<double> cuts{box.lo[0]};
    for (double k : knots)
      if (k > box.lo[0] && k < box.hi[0]) cuts.push_back(k);
    cuts.push_back(box.hi[0]);
    const std::size_t nseg = cuts.size() - 1;
    const std::size_t per_budget = std::max<std::size_t>(72, budget / nseg);
    const double per_tol = 1e-9 / static_cast<double>(nseg);
    const std::size_t min_intervals = nseg == 1 ? (1 << 10) : 16;

    auto fn = [&](double x) {
      Vec p{x};
      return integrand(f.eval(p), g.eval(p));
    };
    double total = 0.0, total_delta = 0.0;
    bool all_converged = true;
    for (std::size_t s = 0; s < nseg; ++s) {
      if (!(cuts[s + 1] > cuts[s])) continue;
      // The integrand may jump exactly at a cut; evaluate endpoints a hair
      // inside the segment so each segment sees only its own branch.
      const double lo_cut = cuts[s], hi_cut = cuts[s + 1];
      const double inset = 1e-9 * (hi_cut - lo_cut);
      auto seg_fn = [&](double x) {
        if (x <= lo_cut)
          x = lo_cut + inset;
        else if (x >= hi_cut)
          x = hi_cut - inset;
        return fn(x);
      };
      RefineResult r = refine_1d(seg_fn, cuts[s], cuts[s + 1], per_budget, per_tol, min_intervals);
      total += r.value;
      total_delta += r.delta;
      all_converged = all_converged && r.converged;
    }
    if (!all_converged && total_delta > 1e-6)
      throw BudgetError("grid-1d integration: budget exhausted before tolerance was reached");
    return DistanceEstimate{total, total_delta, IntegrationMethod::Grid1D};
  }

  // Monte Carlo. Mixture proposal (f+g)/2 keeps the integrand ratio bounded;
  // without samplers fall back to uniform sampling over the joint box.
  if (budget == 0) throw ConfigError("distance: Monte Carlo budget must be positive");
  const bool mixture = f.has_sampler() && g.has_sampler();
  Box box = box_union(f.integration_box(), g.integration_box());
  McSums<1> s = mc_mean(budget, seed, exec, [&](Rng& rng) {
    if (mixture) {
      std::vector<Vec> buf;
      bool from_f = uniform01(rng) < 0.5;
      (from_f ? f : g).sample_into(rng, buf, 1);
      const Vec& x = buf[0];
      double ff = f.eval(x), gg = g.eval(x);
      double q = 0.5 * (ff + gg);
      return q > 0.0 ? integrand(ff, gg) / q : 0.0;
    }
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
    return box.volume() * integrand(f.eval(x), g.eval(x));
  });
  return DistanceEstimate{s.mean(), s.std_err(), IntegrationMethod::MonteCarlo};
}

}  // namespace

DistanceEstimate tv_distance(const Density& f, const Density& g, IntegrationMethod method,
                             std::size_t budget, std::uint64_t seed, Exec exec) {
  return integral_distance(
      f, g, [](double a, double b) { return 0.5 * std::fabs(a - b); }, method, budget, seed, exec);
}

DistanceEstimate hellinger_squared(const Density& f, const Density& g, IntegrationMethod method,
                                   std::size_t budget, std::uint64_t seed, Exec exec) {
  return integral_distance(
      f, g,
      [](double a, double b) {
        double t = std::sqrt(a) - std::sqrt(b);
        return t * t;
      },
      method, budget, seed, exec);
}

HellingerEstimate hellinger(const Density& f, const Density& g, IntegrationMethod method,
                            std::size_t budget, std::uint64_t seed, Exec exec) {
  DistanceEstimate h2 = hellinger_squared(f, g, method, budget, seed, exec);
  return HellingerEstimate{std::sqrt(std::max(0.0, h2.value)), h2};
}

IntegralEstimate set_integral(const Density& g, const SetPredicate& A, std::size_t budget,
                              std::uint64_t seed, Exec exec,
                              const std::optional<Box>& box_override) {
  if (A.dimension != g.dim()) throw ConfigError("set_integral: dimension mismatch");
  const int d = g.dim();

  if (d == 1 && A.breakpoints_1d && g.cdf1d(0.0)) {
    // Indicator constant on every gap; CDF differences make each gap exact.
    std::vector<double> b = *A.breakpoints_1d;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    // g may be unnormalized, so the total mass is cdf at +infinity, not 1.
    const double mass = *g.cdf1d(std::numeric_limits<double>::infinity());
    if (b.empty()) {
      double whole = A.contains(Vec{0.0}) ? mass : 0.0;
      return IntegralEstimate{whole, 0.0, true, 1};
    }
    double total = 0.0;
    if (A.contains(Vec{b.front() - 1.0})) total += *g.cdf1d(b.front());
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      if (A.contains(Vec{0.5 * (b[i] + b[i + 1])})) total += *g.cdf1d(b[i + 1]) - *g.cdf1d(b[i]);
    if (A.contains(Vec{b.back() + 1.0})) total += mass - *g.cdf1d(b.back());
    return IntegralEstimate{total, 0.0, true, b.size() + 1};
  }

  if (budget == 0) throw ConfigError("set_integral: Monte Carlo budget must be positive");
  Box box = box_override ? *box_override : g.integration_box();
  const double bv = box.volume();
  McSums<1> s = mc_mean(budget, seed, exec, [&](Rng& rng) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
    return A.contains(x) ? bv * g.eval(x) : 0.0;
  });
  return IntegralEstimate{s.mean(), s.std_err(), false, budget};
}

namespace {

double measure_of(Measure m, const SetPredicate& A, std::size_t budget, std::uint64_t seed,
                  Exec exec, const std::optional<Box>& shared_box) {
  if (std::holds_alternative<const EmpiricalDistribution*>(m))
    return empirical_measure(*std::get<const EmpiricalDistribution*>(m), A);
  return set_integral(*std::get<const Density*>(m), A, budget, seed, exec, shared_box).value;
}

}  // namespace

double anorm(Measure p, Measure q, const std::vector<SetPredicate>& family, std::size_t budget,
             std::uint64_t seed, Exec exec) {
  if (family.empty()) throw ConfigError("anorm: empty set family");

  // Densities share one box (and one point stream via the common seed) so
  // the difference per set rides on common random numbers.
  std::optional<Box> shared_box;
  const Density* pd =
      std::holds_alternative<const Density*>(p) ? std::get<const Density*>(p) : nullptr;
  const Density* qd =
      std::holds_alternative<const Density*>(q) ? std::get<const Density*>(q) : nullptr;
  if (pd && qd)
    shared_box = box_union(pd->integration_box(), qd->integration_box());

  double best = 0.0;
  for (const SetPredicate& A : family) {
    double pv = measure_of(p, A, budget, seed, exec, shared_box);
    double qv = measure_of(q, A, budget, seed, exec, shared_box);
    best = std::max(best, std::fabs(pv - qv));
  }
  return best;
}

}  // namespace logcave
