#include "logcave/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logcave/mc.hpp"
#include "logcave/rng.hpp"

namespace logcave {

ClassParams class_params(int dim, double epsilon, double c_L, double c_H, double c_delta) {
  if (dim < 1) throw ConfigError("class_params: dimension must be >= 1");
  if (!(epsilon > 0.0) || epsilon > 0.5)
    throw ConfigError("class_params: epsilon must lie in (0, 1/2]");
  if (!(c_L > 0.0) || !(c_H > 0.0) || !(c_delta > 0.0))
    throw ConfigError("class_params: constants must be positive");
  const double d = static_cast<double>(dim);
  ClassParams p;
  double lvl = c_L * ((1.0 / epsilon) * std::log(1.0 / epsilon) + d * std::log(d));
  p.levels = static_cast<std::size_t>(std::ceil(lvl));
  double fac = c_H * std::pow(d / epsilon, 0.5 * (d - 1.0));
  p.facets_per_polytope = static_cast<std::size_t>(std::ceil(fac));
  p.delta = epsilon * epsilon / std::pow(c_delta * d, 2.0 * d);
  return p;
}

std::vector<double> ladder(double max_value, double epsilon, std::size_t levels) {
  if (!(max_value > 0.0) || !std::isfinite(max_value))
    throw ConfigError("ladder: max_value must be positive and finite");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw ConfigError("ladder: epsilon must lie in (0,1)");
  if (levels == 0) throw ConfigError("ladder: need at least one level");
  std::vector<double> ys(levels);
  double y = max_value;
  for (std::size_t i = 0; i < levels; ++i) {
    y *= 1.0 - epsilon;
    ys[i] = y;
  }
  return ys;
}

PiecewisePolytopeDensity::PiecewisePolytopeDensity(int dim, std::vector<LevelPiece> pieces)
    : dim_(dim), pieces_(std::move(pieces)) {
  if (dim_ < 1) throw ConfigError("piecewise density: dimension must be >= 1");
  if (pieces_.empty()) throw ConfigError("piecewise density: need at least one piece");
  for (const LevelPiece& p : pieces_) {
    if (!(p.y > 0.0) || !std::isfinite(p.y))
      throw ConfigError("piecewise density: heights must be positive and finite");
    if (p.polytope.dimension != dim_)
      throw ConfigError("piecewise density: piece dimension mismatch");
  }
  std::stable_sort(pieces_.begin(), pieces_.end(),
                   [](const LevelPiece& a, const LevelPiece& b) { return a.y > b.y; });
  box_ = pieces_.front().polytope.bounding_box();
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    box_ = box_union(box_, pieces_[i].polytope.bounding_box());

  if (dim_ == 1) {
    for (const LevelPiece& p : pieces_) {
      knots_.push_back(p.polytope.bounding_box().lo[0]);
      knots_.push_back(p.polytope.bounding_box().hi[0]);
    }
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    prefix_.assign(knots_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      double v = eval(Vec{0.5 * (knots_[i] + knots_[i + 1])});
      prefix_[i + 1] = prefix_[i] + v * (knots_[i + 1] - knots_[i]);
    }
  }
}

double PiecewisePolytopeDensity::eval(const Vec& x) const {
  check_dim(x, dim_, "piecewise density eval");
  double best = 0.0;
  for (const LevelPiece& p : pieces_) {
    if (p.y <= best) break;  // sorted descending: nothing better can follow
    if (p.polytope.contains(x)) best = p.y;
  }
  return best;
}

double PiecewisePolytopeDensity::eval_first_hit(const Vec& x) const {
  check_dim(x, dim_, "piecewise density eval");
  for (const LevelPiece& p : pieces_)
    if (p.polytope.contains(x)) return p.y;
  return 0.0;
}

std::optional<double> PiecewisePolytopeDensity::cdf1d(double x) const {
  if (dim_ != 1) return std::nullopt;
  if (std::isnan(x)) throw ConfigError("cdf1d: NaN argument");
  if (x <= knots_.front()) return 0.0;
  if (x >= knots_.back()) return prefix_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  double v = eval(Vec{0.5 * (knots_[i] + knots_[i + 1])});
  return prefix_[i] + v * (x - knots_[i]);
}

std::optional<std::vector<double>> PiecewisePolytopeDensity::breakpoints1d() const {
  if (dim_ != 1) return std::nullopt;
  return knots_;
}

SetPredicate PiecewisePolytopeDensity::superlevel_predicate(double y) const {
  if (!(y > 0.0)) throw ConfigError("superlevel_predicate: height must be positive");
  auto qualifying = std::make_shared<std::vector<Polytope>>();
  for (const LevelPiece& p : pieces_)
    if (p.y >= y) qualifying->push_back(p.polytope);
  SetPredicate pred;
  pred.dimension = dim_;
  pred.contains = [qualifying](const Vec& x) {
    for (const Polytope& p : *qualifying)
      if (p.contains(x)) return true;
    return false;
  };
  if (dim_ == 1) {
    std::vector<double> bps;
    for (const Polytope& p : *qualifying) {
      bps.push_back(p.bounding_box().lo[0]);
      bps.push_back(p.bounding_box().hi[0]);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    pred.breakpoints_1d = std::move(bps);
  }
  return pred;
}

Box PiecewisePolytopeDensity::superlevel_box(double y) const {
  std::optional<Box> box;
  for (const LevelPiece& p : pieces_)
    if (p.y >= y) box = box ? box_union(*box, p.polytope.bounding_box()) : p.polytope.bounding_box();
  if (!box) throw ConfigError("superlevel_box: no piece reaches the requested height");
  return *box;
}

namespace {

std::uint64_t level_seed(std::uint64_t base, std::size_t level) {
  return mix64(base ^ (0x5eedb0a7ull + 0x9e3779b97f4a7c15ull * (level + 1)));
}

// Vertex-set comparison; used only to collapse consecutive identical pieces,
// so a false negative is harmless.
bool same_polytope(const Polytope& a, const Polytope& b) {
  if (a.facet_count() != b.facet_count()) return false;
  if (!a.vertices || !b.vertices || a.vertices->size() != b.vertices->size()) return false;
  std::vector<Vec> va = *a.vertices, vb = *b.vertices;
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t k = 0; k < va[i].size(); ++k) {
      double scale = std::max({1.0, std::fabs(va[i][k]), std::fabs(vb[i][k])});
      if (std::fabs(va[i][k] - vb[i][k]) > 1e-9 * scale) return false;
    }
  return true;
}

// A level set counts as degenerate when it has (numerically) no volume.
bool has_volume(const ConvexBody& body, double tol) {
  if (body.exact_volume) return *body.exact_volume > tol;
  // Probe: some ray from the interior point must travel a positive distance.
  try {
    std::vector<Vec> dirs = sphere_directions(body.dimension, body.dimension + 1);
    double extent = 0.0;
    for (const Vec& u : dirs) {
      Vec p = ray_boundary(body, body.interior_point, u);
      extent = std::max(extent, norm(sub(p, body.interior_point)));
    }
    return extent > 1e-9 * (1.0 + norm(body.interior_point));
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

Approximation build_approximation(const LogConcaveDensity& f, const ApproxConfig& cfg) {
  const int d = f.dim();
  if (d > 3) throw ConfigError("build_approximation: dimension must be 1, 2 or 3");
  ClassParams params = class_params(d, cfg.epsilon, cfg.c_L, cfg.c_H, cfg.c_delta);
  if (cfg.level_override) {
    if (*cfg.level_override == 0) throw ConfigError("build_approximation: level override is zero");
    params.levels = *cfg.level_override;
  }
  if (cfg.facet_override) {
    if (*cfg.facet_override == 0) throw ConfigError("build_approximation: facet override is zero");
    params.facets_per_polytope = *cfg.facet_override;
  }
  // A d-polytope with volume needs at least d+1 facets, whatever the formula says.
  const std::size_t h_eff = std::max<std::size_t>(params.facets_per_polytope, d + 1);

  const double top = f.max_value();
  if (!(top > 0.0) || !std::isfinite(top))
    throw ConfigError("build_approximation: density maximum must be positive and finite");

  std::vector<double> ys = ladder(top, cfg.epsilon, params.levels);
  if (cfg.include_top_level) {
    // The flat-top case: when the mode itself spans a body of positive
    // volume, a level there makes that plateau recoverable exactly.
    if (auto k0 = f.level_set(top); k0 && has_volume(*k0, cfg.tol))
      ys.insert(ys.begin(), top);
  }

  const std::size_t n_levels = ys.size();
  std::vector<LevelDiagnostics> diags(n_levels);
  std::vector<std::optional<LevelPiece>> slots(n_levels);

  for_each_index(n_levels, cfg.exec, [&](std::size_t i) {
    const double y = ys[i];
    LevelDiagnostics& diag = diags[i];
    diag.y = y;
    std::optional<ConvexBody> kopt = f.level_set(y);
    if (!kopt || !has_volume(*kopt, cfg.tol)) {
      diag.skipped = true;
      return;
    }
    const ConvexBody& body = *kopt;
    const std::uint64_t lseed = level_seed(cfg.seed, i);

    // If the level set already is a polytope within budget, use it as is.
    if (body.polytope_form &&
        static_cast<std::size_t>(body.polytope_form->facet_count()) <= h_eff) {
      diag.facets = body.polytope_form->facet_count();
      diag.exact = true;
      diag.target_met = true;
      diag.reused_exact_form = true;
      slots[i] = LevelPiece{y, *body.polytope_form};
      return;
    }

    // Closed-form reference volume when the family provides one.
    std::optional<double> exact_vol = body.exact_volume;
    double vol_ref = 0.0, vol_ref_err = 0.0;
    if (exact_vol) {
      vol_ref = *exact_vol;
    } else if (d <= 2) {
      VolumeEstimate ve = volume(body, VolumeMethod::Auto, cfg.mc_budget, lseed, cfg.exec);
      vol_ref = ve.value;
      vol_ref_err = ve.std_err;
      if (ve.method != VolumeMethod::MonteCarlo) exact_vol = ve.value;
    }

    // Grow the direction count until the deficit target is met or the facet
    // budget is exhausted. In 3-D a hull on m vertices has about 2m-4 facets.
    std::size_t m_max = d <= 2 ? h_eff : std::max<std::size_t>(d + 2, (h_eff + 4) / 2);
    std::size_t m = std::min<std::size_t>(m_max, std::max<std::size_t>(d + 1, 8));
    while (true) {
      Polytope poly = inscribed_polytope(body, m, lseed, cfg.tol);
      double deficit, deficit_err;
      bool exact;
      if (d <= 2) {
        VolumeEstimate pv = volume(poly, VolumeMethod::Auto, cfg.mc_budget, lseed, cfg.exec);
        deficit = 1.0 - pv.value / vol_ref;
        deficit_err = (pv.std_err + vol_ref_err) / vol_ref;
        exact = pv.method != VolumeMethod::MonteCarlo && exact_vol.has_value();
      } else {
        DeficitEstimate de = mc_deficit(body, poly, cfg.mc_budget, lseed, cfg.exec);
        double denom = exact_vol ? *exact_vol : de.vol_body;
        deficit = denom > 0.0 ? de.deficit_abs / denom : 0.0;
        deficit_err = denom > 0.0 ? de.deficit_abs_err / denom : 0.0;
        exact = false;
      }
      bool met = exact ? deficit <= cfg.epsilon : deficit + 2.0 * deficit_err <= cfg.epsilon;
      if (met || m >= m_max) {
        diag.facets = poly.facet_count();
        diag.deficit = std::max(0.0, deficit);
        diag.deficit_err = deficit_err;
        diag.exact = exact;
        diag.target_met = met;
        slots[i] = LevelPiece{y, std::move(poly)};
        return;
      }
      m = std::min(m_max, 2 * m);
    }
  });

  // Collapse runs of identical pieces: with heights descending, a duplicate
  // lower piece can never win the max rule.
  std::vector<LevelPiece> pieces;
  for (std::size_t i = 0; i < n_levels; ++i) {
    if (!slots[i]) continue;
    if (!pieces.empty() && same_polytope(pieces.back().polytope, slots[i]->polytope)) {
      diags[i].merged = true;
      continue;
    }
    pieces.push_back(std::move(*slots[i]));
  }
  if (pieces.empty())
    throw ConfigError("build_approximation: every ladder level was degenerate");

  Approximation out;
  out.density = std::make_shared<PiecewisePolytopeDensity>(d, std::move(pieces));
  out.params = params;
  out.levels = std::move(ys);
  out.diagnostics = std::move(diags);
  return out;
}

TailMassEstimate tail_mass(const LogConcaveDensity& f, double y_cut, std::size_t budget,
                           std::uint64_t seed, Exec exec) {
  if (!(y_cut > 0.0)) throw ConfigError("tail_mass: cutoff must be positive");
  if (budget == 0) throw ConfigError("tail_mass: budget must be positive");
  TailMassEstimate out;

  double below, below_err;
  if (f.has_sampler()) {
    McSums<1> s = mc_mean(budget, seed, exec, [&](Rng& rng) {
      std::vector<Vec> buf;
      f.sample_into(rng, buf, 1);
      return f.eval(buf[0]) <= y_cut ? 1.0 : 0.0;
    });
    below = s.mean();
    below_err = s.std_err();
  } else {
    // No sampler: integrate min(f, y_cut) - y_cut * vol directly over the box.
    Box box = f.integration_box();
    const double bv = box.volume();
    const int d = f.dim();
    McSums<1> s = mc_mean(budget, seed, exec, [&](Rng& rng) {
      Vec x(d);
      for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
      double v = f.eval(x);
      return v <= y_cut ? bv * v : 0.0;
    });
    below = s.mean();
    below_err = s.std_err();
  }
  out.below_prob = below;

  double lvol = 0.0, lvol_err = 0.0;
  if (auto body = f.level_set(y_cut)) {
    if (body->exact_volume) {
      lvol = *body->exact_volume;
    } else {
      VolumeEstimate ve = volume(*body, VolumeMethod::Auto, budget, seed + 1, exec);
      lvol = ve.value;
      lvol_err = ve.std_err;
    }
  }
  out.level_volume = lvol;
  out.value = below + y_cut * lvol;
  out.std_err = std::sqrt(below_err * below_err + y_cut * y_cut * lvol_err * lvol_err);
  return out;
}

VolumeEstimate superlevel_volume(const PiecewisePolytopeDensity& g, double y, std::size_t budget,
                                 std::uint64_t seed, Exec exec) {
  if (!(y > 0.0)) throw ConfigError("superlevel_volume: height must be positive");
  std::size_t count = 0;
  const Polytope* only = nullptr;
  for (const LevelPiece& p : g.pieces())
    if (p.y >= y) {
      ++count;
      only = &p.polytope;
    }
  if (count == 0) return VolumeEstimate{0.0, 0.0, VolumeMethod::Exact1D, 0};
  if (count == 1) return volume(*only, VolumeMethod::Auto, budget, seed, exec);

  if (budget == 0) throw ConfigError("superlevel_volume: budget must be positive");
  SetPredicate pred = g.superlevel_predicate(y);
  Box box = g.superlevel_box(y);
  const double bv = box.volume();
  const int d = g.dim();
  McSums<1> s = mc_mean(budget, seed, exec, [&](Rng& rng) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
    return pred.contains(x) ? bv : 0.0;
  });
  return VolumeEstimate{s.mean(), s.std_err(), VolumeMethod::MonteCarlo, budget};
}

SandwichReport volume_sandwich_check(const LogConcaveDensity& f,
                                     const PiecewisePolytopeDensity& g, double epsilon,
                                     const std::vector<double>& heights, std::size_t budget,
                                     std::uint64_t seed, Exec exec) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ConfigError("volume_sandwich_check: epsilon must lie in (0,1)");
  if (heights.empty()) throw ConfigError("volume_sandwich_check: no heights given");
  SandwichReport rep;
  for (std::size_t k = 0; k < heights.size(); ++k) {
    const double y = heights[k];
    if (!(y > 0.0)) throw ConfigError("volume_sandwich_check: heights must be positive");
    SandwichPoint pt;
    pt.y = y;
    VolumeEstimate lhs = superlevel_volume(g, y, budget, level_seed(seed, 2 * k), exec);
    pt.lhs = lhs.value;
    pt.lhs_err = lhs.std_err;
    const double y_up = y / (1.0 - epsilon);
    if (auto body = f.level_set(y_up)) {
      if (body->exact_volume) {
        pt.rhs = *body->exact_volume;
      } else {
        VolumeEstimate rhs =
            volume(*body, VolumeMethod::Auto, budget, level_seed(seed, 2 * k + 1), exec);
        pt.rhs = rhs.value;
        pt.rhs_err = rhs.std_err;
      }
    }
    pt.pass = pt.lhs + 2.0 * pt.lhs_err >=
              (1.0 - epsilon) * (pt.rhs - 2.0 * pt.rhs_err) - 1e-12;
    rep.all_pass = rep.all_pass && pt.pass;
    rep.points.push_back(pt);
  }
  return rep;
}

L1Report approximation_l1_error(const LogConcaveDensity& f, const PiecewisePolytopeDensity& g,
                                std::size_t budget, std::uint64_t seed, Exec exec) {
  if (f.dim() != g.dim()) throw ConfigError("approximation_l1_error: dimension mismatch");
  if (budget == 0) throw ConfigError("approximation_l1_error: budget must be positive");
  L1Report rep;
  if (f.has_sampler()) {
    // Under f, with g <= f: integral of (f-g) equals E[1 - g/f], a bounded kernel.
    McSums<3> s = mc_run<3>(budget, seed, exec, [&](Rng& rng, std::array<double, 3>& acc) {
      std::vector<Vec> buf;
      f.sample_into(rng, buf, 1);
      const Vec& x = buf[0];
      double fx = f.eval(x), gx = g.eval(x);
      double r = fx > 0.0 ? gx / fx : 0.0;
      acc[0] = std::max(0.0, 1.0 - r);
      acc[1] = r;
      acc[2] = gx > fx * (1.0 + 1e-8) ? 1.0 : 0.0;
    });
    rep.l1 = s.mean(0);
    rep.l1_err = s.std_err(0);
    rep.mass = s.mean(1);
    rep.mass_err = s.std_err(1);
    rep.domination_violations = static_cast<std::size_t>(std::llround(s.sum[2]));
  } else {
    Box box = box_union(f.integration_box(), g.integration_box());
    const double bv = box.volume();
    const int d = f.dim();
    McSums<3> s = mc_run<3>(budget, seed, exec, [&](Rng& rng, std::array<double, 3>& acc) {
      Vec x(d);
      for (int k = 0; k < d; ++k) x[k] = box.lo[k] + uniform01(rng) * (box.hi[k] - box.lo[k]);
      double fx = f.eval(x), gx = g.eval(x);
      acc[0] = bv * std::fabs(fx - gx);
      acc[1] = bv * gx;
      acc[2] = gx > fx * (1.0 + 1e-8) ? 1.0 : 0.0;
    });
    rep.l1 = s.mean(0);
    rep.l1_err = s.std_err(0);
    rep.mass = s.mean(1);
    rep.mass_err = s.std_err(1);
    rep.domination_violations = static_cast<std::size_t>(std::llround(s.sum[2]));
  }
  return rep;
}

}  // namespace logcave
