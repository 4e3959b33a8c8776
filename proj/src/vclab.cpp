#include "logcave/vclab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "logcave/rng.hpp"

namespace logcave {

SetFamilyHandle SetFamilyHandle::intervals_1d() {
  SetFamilyHandle h;
  h.kind = SetFamilyKind::Intervals1D;
  h.dimension = 1;
  return h;
}

SetFamilyHandle SetFamilyHandle::halfspaces(int dimension) {
  if (dimension != 1 && dimension != 2)
    throw ConfigError("halfspace family: exact enumeration needs dimension 1 or 2");
  SetFamilyHandle h;
  h.kind = SetFamilyKind::Halfspaces;
  h.dimension = dimension;
  return h;
}

SetFamilyHandle SetFamilyHandle::finite_list(int dimension, std::vector<SetPredicate> sets) {
  if (sets.empty()) throw ConfigError("finite set family: empty list");
  for (const SetPredicate& s : sets)
    if (s.dimension != dimension) throw ConfigError("finite set family: dimension mismatch");
  SetFamilyHandle h;
  h.kind = SetFamilyKind::FiniteList;
  h.dimension = dimension;
  h.sets = std::move(sets);
  return h;
}

namespace {

using Mask = std::uint32_t;

void validate_points(const std::vector<Vec>& points, int dim) {
  if (points.empty()) throw ConfigError("dichotomy enumeration: no points");
  if (points.size() > 20) throw ConfigError("dichotomy enumeration: at most 20 points");
  for (const Vec& p : points) check_dim(p, dim, "dichotomy enumeration");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw ConfigError("dichotomy enumeration: duplicate point");
}

std::vector<std::size_t> order_by_projection(const std::vector<Vec>& points, const Vec& u) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dot(points[a], u) < dot(points[b], u);
  });
  return order;
}

void insert_prefixes(const std::vector<std::size_t>& order, std::unordered_set<Mask>& masks) {
  Mask m = 0;
  masks.insert(m);
  for (std::size_t idx : order) {
    m |= Mask{1} << idx;
    masks.insert(m);
  }
}

std::unordered_set<Mask> enumerate_masks(const SetFamilyHandle& family,
                                         const std::vector<Vec>& points) {
  const std::size_t n = points.size();
  std::unordered_set<Mask> masks;
  switch (family.kind) {
    case SetFamilyKind::Intervals1D: {
      std::vector<std::size_t> order = order_by_projection(points, Vec{1.0});
      masks.insert(0);  // the empty set is an interval dichotomy
      for (std::size_t i = 0; i < n; ++i) {
        Mask m = 0;
        for (std::size_t j = i; j < n; ++j) {
          m |= Mask{1} << order[j];
          masks.insert(m);
        }
      }
      break;
    }
    case SetFamilyKind::Halfspaces: {
      if (family.dimension == 1) {
        std::vector<std::size_t> asc = order_by_projection(points, Vec{1.0});
        insert_prefixes(asc, masks);
        std::reverse(asc.begin(), asc.end());
        insert_prefixes(asc, masks);
        break;
      }
      // Sweep: between two critical directions the projection order is
      // fixed, so its prefixes are exactly the halfplane dichotomies there.
      std::vector<double> angles;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          Vec diff = sub(points[j], points[i]);
          double base = std::atan2(diff[1], diff[0]);
          for (double a : {base + M_PI / 2.0, base - M_PI / 2.0}) {
            while (a < 0.0) a += 2.0 * M_PI;
            while (a >= 2.0 * M_PI) a -= 2.0 * M_PI;
            angles.push_back(a);
          }
        }
      std::sort(angles.begin(), angles.end());
      angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
      std::vector<double> dirs;
      if (angles.empty()) {
        dirs.push_back(0.0);
      } else {
        for (std::size_t k = 0; k < angles.size(); ++k) {
          double next = k + 1 < angles.size() ? angles[k + 1] : angles.front() + 2.0 * M_PI;
          dirs.push_back(0.5 * (angles[k] + next));
        }
      }
      for (double theta : dirs) {
        Vec u{std::cos(theta), std::sin(theta)};
        insert_prefixes(order_by_projection(points, u), masks);
      }
      break;
    }
    case SetFamilyKind::FiniteList: {
      for (const SetPredicate& s : family.sets) {
        Mask m = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (s.contains(points[i])) m |= Mask{1} << i;
        masks.insert(m);
      }
      break;
    }
  }
  return masks;
}

}  // namespace

std::size_t dichotomy_count(const SetFamilyHandle& family, const std::vector<Vec>& points) {
  validate_points(points, family.dimension);
  return enumerate_masks(family, points).size();
}

bool shatters(const SetFamilyHandle& family, const std::vector<Vec>& points) {
  validate_points(points, family.dimension);
  return enumerate_masks(family, points).size() == (std::size_t{1} << points.size());
}

namespace {

double choose(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit visit) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(idx)) return;
    // advance the rightmost index that still has room
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] + (k - i) < n) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

ShatterReport vc_estimate(const SetFamilyHandle& family, const std::vector<Vec>& pool,
                          std::size_t max_size, std::size_t subset_cap, std::uint64_t seed) {
  validate_points(pool, family.dimension);
  if (max_size == 0 || max_size > 20) throw ConfigError("vc_estimate: max_size must be in 1..20");
  ShatterReport rep;
  for (std::size_t s = 1; s <= max_size; ++s) {
    if (s > pool.size()) {
      rep.exhaustive = true;  // no subset of this size exists at all
      return rep;
    }
    bool found = false;
    std::vector<Vec> witness;
    auto try_subset = [&](const std::vector<std::size_t>& idx) {
      std::vector<Vec> pts;
      pts.reserve(s);
      for (std::size_t i : idx) pts.push_back(pool[i]);
      ++rep.tested_sets;
      if (shatters(family, pts)) {
        found = true;
        witness = std::move(pts);
        return false;  // stop enumeration
      }
      return true;
    };
    const bool exhaustive_pass = choose(pool.size(), s) <= static_cast<double>(subset_cap);
    if (exhaustive_pass) {
      for_each_combination(pool.size(), s, try_subset);
    } else {
      Rng rng = make_rng(seed, s);
      std::vector<std::size_t> all(pool.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      for (std::size_t t = 0; t < subset_cap && !found; ++t) {
        for (std::size_t i = 0; i < s; ++i) {
          std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
          std::swap(all[i], all[pick(rng)]);
        }
        std::vector<std::size_t> idx(all.begin(), all.begin() + s);
        std::sort(idx.begin(), idx.end());
        try_subset(idx);
      }
    }
    if (found) {
      rep.shattered_size = s;
      rep.witness = std::move(witness);
    } else {
      rep.exhaustive = exhaustive_pass;
      return rep;
    }
  }
  return rep;  // shattered at max_size; larger sizes untested
}

double growth_bound_log(std::size_t n, int dim, std::size_t levels, std::size_t facets, double c) {
  if (n == 0 || dim < 1 || levels == 0 || facets == 0 || !(c > 0.0))
    throw ConfigError("growth_bound_log: all parameters must be positive");
  double L = static_cast<double>(levels);
  return std::lgamma(2.0 * L + 1.0) +
         2.0 * dim * L * static_cast<double>(facets) * std::log(c * static_cast<double>(n));
}

GrowthReport growth_count(const std::vector<SetPredicate>& family, const std::vector<Vec>& points,
                          int dim, std::size_t levels, std::size_t facets, double c) {
  if (family.empty()) throw ConfigError("growth_count: empty set family");
  SetFamilyHandle h = SetFamilyHandle::finite_list(dim, family);
  GrowthReport rep;
  rep.points = points.size();
  rep.distinct = dichotomy_count(h, points);
  rep.log_distinct = std::log(static_cast<double>(rep.distinct));
  rep.log_bound = growth_bound_log(points.size(), dim, levels, facets, c);
  rep.within = rep.log_distinct <= rep.log_bound + 1e-9;
  return rep;
}

double interval_sup_statistic(std::vector<double> samples,
                              const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ConfigError("interval_sup_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const double dn = static_cast<double>(n);

  // a-candidates and b-candidates both live at sample points (or infinity):
  // a[i] = F_hat(x_i-) - F(x_i), b[i] = F_hat(x_i) - F(x_i), with zero
  // sentinels for the unbounded ends. The sup factors through prefix scans.
  std::vector<double> A(n + 2, 0.0), B(n + 2, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double F = cdf(samples[i - 1]);
    A[i] = static_cast<double>(i) / dn - F;
    B[i] = static_cast<double>(i - 1) / dn - F;
  }

  double sup = 0.0;
  double min_b = B[0], max_a = A[0], max_b = B[0];
  for (std::size_t i = 0; i < n + 2; ++i) {
    min_b = std::min(min_b, B[i]);
    sup = std::max(sup, A[i] - min_b);        // empirical above true
    if (i > 0) sup = std::max(sup, max_a - B[i]);  // strict past index: a < b
    max_b = std::max(max_b, B[i]);
    sup = std::max(sup, max_b - B[i]);
    max_a = std::max(max_a, A[i]);
    sup = std::max(sup, max_a - A[i]);
    sup = std::max(sup, max_b - A[i]);
  }
  return sup;
}

RateReport vc_rate_experiment(const LogConcaveDensity& f, const std::vector<std::size_t>& sizes,
                              std::size_t replicates, std::uint64_t seed, Exec exec) {
  if (f.dim() != 1) throw ConfigError("vc_rate_experiment: one-dimensional densities only");
  if (!f.cdf1d(0.0)) throw ConfigError("vc_rate_experiment: density needs a closed-form CDF");
  if (!f.has_sampler()) throw ConfigError("vc_rate_experiment: density needs a sampler");
  if (sizes.size() < 2) throw ConfigError("vc_rate_experiment: need at least two sample sizes");
  if (replicates == 0) throw ConfigError("vc_rate_experiment: need at least one replicate");
  for (std::size_t n : sizes)
    if (n == 0) throw ConfigError("vc_rate_experiment: sample sizes must be positive");

  auto cdf = [&f](double x) { return *f.cdf1d(x); };
  std::vector<double> sups(sizes.size() * replicates, 0.0);
  for_each_index(sizes.size() * replicates, exec, [&](std::size_t flat) {
    const std::size_t si = flat / replicates;
    const std::size_t r = flat % replicates;
    std::vector<Vec> draws = sample(f, mix64(seed ^ (flat * 0x9e3779b97f4a7c15ull + 0xc4a7ull)),
                                    sizes[si]);
    std::vector<double> xs(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) xs[i] = draws[i][0];
    sups[si * replicates + r] = interval_sup_statistic(std::move(xs), cdf);
  });

  RateReport rep;
  std::vector<double> log_n, log_mean;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    double mean = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) mean += sups[si * replicates + r];
    mean /= static_cast<double>(replicates);
    double var = 0.0;
    for (std::size_t r = 0; r < replicates; ++r) {
      double d = sups[si * replicates + r] - mean;
      var += d * d;
    }
    var = replicates > 1 ? var / static_cast<double>(replicates - 1) : 0.0;
    RatePoint pt;
    pt.n = sizes[si];
    pt.mean_sup = mean;
    pt.std_err = std::sqrt(var / static_cast<double>(replicates));
    pt.replicates = replicates;
    rep.points.push_back(pt);
    log_n.push_back(std::log(static_cast<double>(sizes[si])));
    log_mean.push_back(std::log(mean));
  }
  LineFit fit = fit_line(log_n, log_mean);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  return rep;
}

}  // namespace logcave
