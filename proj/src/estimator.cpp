#include "logcave/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logcave/mc.hpp"
#include "logcave/rng.hpp"

namespace logcave {

namespace {

void validate_class(const CandidateClass& cands) {
  if (cands.members.size() < 2)
    throw ConfigError("candidate class: need at least two members");
  for (const auto& m : cands.members) {
    if (!m) throw ConfigError("candidate class: null member");
    if (m->dim() != cands.dim) throw ConfigError("candidate class: dimension mismatch");
  }
}

// 1-D: locate the points where g_i - g_j changes sign, by scanning a grid
// over the joint box and bisecting every bracketing cell.
std::vector<double> comparison_breakpoints(const Density& gi, const Density& gj,
                                           std::size_t grid_cells) {
  auto bi = gi.breakpoints1d();
  auto bj = gj.breakpoints1d();
  if (bi && bj) {
    std::vector<double> b = *bi;
    b.insert(b.end(), bj->begin(), bj->end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }
  if (grid_cells < 2) throw ConfigError("yatracos_family: grid_cells must be >= 2");
  Box box = box_union(gi.integration_box(), gj.integration_box());
  const double lo = box.lo[0], hi = box.hi[0];
  auto above = [&](double x) { return gi.eval(Vec{x}) >= gj.eval(Vec{x}); };
  std::vector<double> bps{lo, hi};
  const double h = (hi - lo) / static_cast<double>(grid_cells);
  bool prev = above(lo);
  for (std::size_t k = 1; k <= grid_cells; ++k) {
    double x = lo + static_cast<double>(k) * h;
    bool cur = above(x);
    if (cur != prev) {
      double a = x - h, b = x;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (a + b);
        if (above(mid) == prev)
          a = mid;
        else
          b = mid;
      }
      bps.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

std::uint64_t salted_seed(std::uint64_t base, std::uint64_t salt, std::size_t k) {
  return mix64(base ^ mix64(salt + 0x9e3779b97f4a7c15ull * (k + 1)));
}

}  // namespace

std::pair<std::size_t, std::size_t> yatracos_pair(std::size_t set_index,
                                                  std::size_t member_count) {
  if (member_count < 2) throw ConfigError("yatracos_pair: need at least two members");
  if (set_index >= member_count * (member_count - 1))
    throw ConfigError("yatracos_pair: set index out of range");
  std::size_t i = set_index / (member_count - 1);
  std::size_t r = set_index % (member_count - 1);
  std::size_t j = r < i ? r : r + 1;
  return {i, j};
}

std::vector<SetPredicate> yatracos_family(const CandidateClass& cands, std::size_t grid_cells) {
  validate_class(cands);
  const std::size_t n = cands.members.size();
  std::vector<SetPredicate> family;
  family.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      SetPredicate pred;
      pred.dimension = cands.dim;
      std::shared_ptr<const Density> gi = cands.members[i], gj = cands.members[j];
      pred.contains = [gi, gj](const Vec& x) { return gi->eval(x) >= gj->eval(x); };
      if (cands.dim == 1) pred.breakpoints_1d = comparison_breakpoints(*gi, *gj, grid_cells);
      family.push_back(std::move(pred));
    }
  return family;
}

bool yatracos_membership_via_levels(const PiecewisePolytopeDensity& g,
                                    const PiecewisePolytopeDensity& gp, const Vec& x) {
  // Height of g at x, then look for a strictly higher piece of g'.
  const double y = g.eval(x);
  for (const LevelPiece& p : gp.pieces()) {
    if (p.y <= y) break;  // sorted descending: nothing strictly higher remains
    if (p.polytope.contains(x)) return false;
  }
  return true;
}

std::size_t required_samples(double vc_dim, double epsilon, double c) {
  if (!(vc_dim > 0.0)) throw ConfigError("required_samples: dimension proxy must be positive");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ConfigError("required_samples: epsilon must lie in (0,1)");
  if (!(c > 0.0)) throw ConfigError("required_samples: constant must be positive");
  return static_cast<std::size_t>(std::ceil(c * vc_dim / (epsilon * epsilon)));
}

SelectionResult select(const CandidateClass& cands, const EmpiricalDistribution& data,
                       const SelectOptions& opts) {
  validate_class(cands);
  if (data.samples.empty()) throw ConfigError("select: empty sample set");
  if (data.dim() != cands.dim) throw ConfigError("select: sample dimension mismatch");
  const std::size_t n_members = cands.members.size();
  const std::size_t n_sets = n_members * (n_members - 1);
  const int d = cands.dim;

  SelectionResult res;
  res.sample_count = data.n();
  res.seed = opts.seed;
  res.integral_budget = opts.integral_budget;
  res.scores.assign(n_members, std::vector<double>(n_sets, 0.0));
  res.pairs.resize(n_sets);
  for (std::size_t k = 0; k < n_sets; ++k) res.pairs[k] = yatracos_pair(k, n_members);

  if (d == 1) {
    std::vector<SetPredicate> family = yatracos_family(cands, opts.grid_cells);
    std::vector<double> emp(n_sets);
    for (std::size_t k = 0; k < n_sets; ++k) emp[k] = empirical_measure(data, family[k]);
    bool all_exact = true;
    for (std::size_t m = 0; m < n_members; ++m)
      for (std::size_t k = 0; k < n_sets; ++k) {
        IntegralEstimate est =
            set_integral(*cands.members[m], family[k], opts.integral_budget,
                         salted_seed(opts.seed, 0x5e7u, m * n_sets + k), opts.exec);
        res.scores[m][k] = std::fabs(est.value - emp[k]);
        all_exact = all_exact && est.exact;
      }
    res.exact_integrals = all_exact;
  } else {
    if (opts.integral_budget == 0) throw ConfigError("select: integral budget must be positive");
    // One deterministic uniform pool over the joint box; every candidate is
    // evaluated once per point and all comparisons reuse those values.
    Box box = cands.members.front()->integration_box();
    for (std::size_t m = 1; m < n_members; ++m)
      box = box_union(box, cands.members[m]->integration_box());
    const double bv = box.volume();
    const std::size_t n_pool = opts.integral_budget;
    const std::size_t n_chunks = (n_pool + kMcChunk - 1) / kMcChunk;

    std::vector<double> pool(n_pool * static_cast<std::size_t>(d));
    for_each_index(n_chunks, opts.exec, [&](std::size_t c) {
      Rng rng = make_rng(opts.seed, c);
      const std::size_t begin = c * kMcChunk;
      const std::size_t end = std::min(begin + kMcChunk, n_pool);
      for (std::size_t p = begin; p < end; ++p)
        for (int k = 0; k < d; ++k)
          pool[p * d + k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
    });

    std::vector<double> evals(n_members * n_pool);
    for_each_index(n_members * n_chunks, opts.exec, [&](std::size_t idx) {
      const std::size_t m = idx / n_chunks;
      const std::size_t c = idx % n_chunks;
      const std::size_t begin = c * kMcChunk;
      const std::size_t end = std::min(begin + kMcChunk, n_pool);
      Vec x(d);
      for (std::size_t p = begin; p < end; ++p) {
        for (int k = 0; k < d; ++k) x[k] = pool[p * d + k];
        evals[m * n_pool + p] = cands.members[m]->eval(x);
      }
    });

    const std::size_t n_data = data.n();
    std::vector<double> data_evals(n_members * n_data);
    for_each_index(n_members, opts.exec, [&](std::size_t m) {
      for (std::size_t p = 0; p < n_data; ++p)
        data_evals[m * n_data + p] = cands.members[m]->eval(data.samples[p]);
    });

    for_each_index(n_sets, opts.exec, [&](std::size_t k) {
      const auto [i, j] = res.pairs[k];
      const double* ei = evals.data() + i * n_pool;
      const double* ej = evals.data() + j * n_pool;
      std::vector<double> integrals(n_members, 0.0);
      for (std::size_t p = 0; p < n_pool; ++p) {
        if (ei[p] >= ej[p])
          for (std::size_t m = 0; m < n_members; ++m) integrals[m] += evals[m * n_pool + p];
      }
      std::size_t hits = 0;
      for (std::size_t p = 0; p < n_data; ++p)
        if (data_evals[i * n_data + p] >= data_evals[j * n_data + p]) ++hits;
      const double emp = static_cast<double>(hits) / static_cast<double>(n_data);
      for (std::size_t m = 0; m < n_members; ++m)
        res.scores[m][k] =
            std::fabs(bv * integrals[m] / static_cast<double>(n_pool) - emp);
    });
    res.exact_integrals = false;
  }

  res.row_max.resize(n_members);
  for (std::size_t m = 0; m < n_members; ++m)
    res.row_max[m] = *std::max_element(res.scores[m].begin(), res.scores[m].end());
  res.chosen_index = static_cast<std::size_t>(
      std::min_element(res.row_max.begin(), res.row_max.end()) - res.row_max.begin());
  for (double v : res.row_max)
    if (v < res.row_max[res.chosen_index])
      throw std::logic_error("select: argmin postcondition violated");
  return res;
}

GuaranteeReport guarantee_harness(const Density& truth, const CandidateClass& cands,
                                  double epsilon, const GuaranteeOptions& opts) {
  validate_class(cands);
  if (truth.dim() != cands.dim) throw ConfigError("guarantee_harness: dimension mismatch");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ConfigError("guarantee_harness: epsilon must lie in (0,1)");
  if (opts.trials == 0 || opts.n_samples == 0)
    throw ConfigError("guarantee_harness: trials and sample size must be positive");
  if (!truth.has_sampler()) throw ConfigError("guarantee_harness: truth has no sampler");

  GuaranteeReport rep;
  rep.n_samples = opts.n_samples;
  const std::size_t n_members = cands.members.size();
  rep.candidate_tv.resize(n_members);
  rep.candidate_tv_err.resize(n_members);
  for (std::size_t m = 0; m < n_members; ++m) {
    DistanceEstimate tv =
        tv_distance(*cands.members[m], truth, IntegrationMethod::Auto, opts.tv_budget,
                    salted_seed(opts.seed, 0x7d15u, m), opts.exec);
    rep.candidate_tv[m] = tv.value;
    rep.candidate_tv_err[m] = tv.std_err;
  }
  std::size_t best = static_cast<std::size_t>(
      std::min_element(rep.candidate_tv.begin(), rep.candidate_tv.end()) -
      rep.candidate_tv.begin());
  rep.opt = rep.candidate_tv[best];
  rep.opt_err = rep.candidate_tv_err[best];

  for (std::size_t t = 0; t < opts.trials; ++t) {
    std::vector<Vec> draws = sample(truth, salted_seed(opts.seed, 0xd4a3u, t), opts.n_samples);
    EmpiricalDistribution data{std::move(draws)};
    SelectOptions sopts;
    sopts.integral_budget = opts.integral_budget;
    sopts.grid_cells = opts.grid_cells;
    sopts.seed = salted_seed(opts.seed, 0x5e1ec7u, t);
    sopts.exec = opts.exec;
    SelectionResult sel = select(cands, data, sopts);

    GuaranteeTrial trial;
    trial.chosen = sel.chosen_index;
    trial.tv_chosen = rep.candidate_tv[sel.chosen_index];
    double slack = 2.0 * (rep.candidate_tv_err[sel.chosen_index] + rep.opt_err);
    trial.success = trial.tv_chosen <= 3.0 * rep.opt + epsilon + slack;
    rep.successes += trial.success ? 1 : 0;
    rep.trials.push_back(trial);
  }
  rep.success_rate = static_cast<double>(rep.successes) / static_cast<double>(opts.trials);
  return rep;
}

}  // namespace logcave
