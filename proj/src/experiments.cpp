#include "logcave/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

#include <vendor/json.hpp>

#include "logcave/estimator.hpp"
#include "logcave/geometry.hpp"
#include "logcave/linalg.hpp"
#include "logcave/rng.hpp"
#include "logcave/serialize.hpp"
#include "logcave/structure.hpp"
#include "logcave/svg.hpp"
#include "logcave/vclab.hpp"

namespace logcave {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t salted(std::uint64_t seed, std::uint64_t salt, std::size_t k = 0) {
  return mix64(seed ^ mix64(salt + 0x9e3779b97f4a7c15ull * (k + 1)));
}

template <typename T>
std::vector<T> size_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + ": expected an array");
  std::vector<T> out;
  for (const json& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + ": expected numbers");
    out.push_back(e.get<T>());
  }
  return out;
}

std::shared_ptr<const LogConcaveDensity> as_log_concave(std::shared_ptr<Density> any,
                                                        const char* what) {
  auto p = std::dynamic_pointer_cast<LogConcaveDensity>(any);
  if (!p) throw ConfigError(std::string(what) + ": density must be a closed-form family");
  return p;
}

LogConcaveDensity std_gaussian(int d) {
  return LogConcaveDensity::gaussian(Vec(d, 0.0), Mat::identity(d));
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON: expected an object");
  ExperimentConfig c;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "subcommand") c.subcommand = val.get<std::string>();
      else if (key == "seed") c.seed = val.get<std::uint64_t>();
      else if (key == "serial") c.serial = val.get<bool>();
      else if (key == "density") c.density_json = val.dump();
      else if (key == "shape") c.shape = val.get<std::string>();
      else if (key == "direction_counts") c.direction_counts = size_list<std::size_t>(val, key.c_str());
      else if (key == "mc_budget") c.mc_budget = val.get<std::size_t>();
      else if (key == "epsilons") c.epsilons = size_list<double>(val, key.c_str());
      else if (key == "budget") c.budget = val.get<std::size_t>();
      else if (key == "sandwich_heights") c.sandwich_heights = val.get<std::size_t>();
      else if (key == "epsilon") c.epsilon = val.get<double>();
      else if (key == "trials") c.trials = val.get<std::size_t>();
      else if (key == "n_samples") c.n_samples = val.get<std::size_t>();
      else if (key == "vc_proxy") c.vc_proxy = val.get<double>();
      else if (key == "sample_constant") c.sample_constant = val.get<double>();
      else if (key == "contamination") c.contamination = val.get<double>();
      else if (key == "candidate_means") c.candidate_means = size_list<double>(val, key.c_str());
      else if (key == "rate_sizes") c.rate_sizes = size_list<std::size_t>(val, key.c_str());
      else if (key == "rate_replicates") c.rate_replicates = val.get<std::size_t>();
      else if (key == "learn_sizes") c.learn_sizes = size_list<std::size_t>(val, key.c_str());
      else if (key == "learn_replicates") c.learn_replicates = val.get<std::size_t>();
      else if (key == "learn_c_L") c.learn_c_L = val.get<double>();
      else if (key == "learn_exponent") c.learn_exponent = val.get<double>();
      else throw ConfigError("config JSON: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c, int indent) {
  ordered j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["serial"] = c.serial;
  if (!c.density_json.empty()) j["density"] = json::parse(c.density_json);
  j["shape"] = c.shape;
  j["direction_counts"] = c.direction_counts;
  j["mc_budget"] = c.mc_budget;
  j["epsilons"] = c.epsilons;
  j["budget"] = c.budget;
  j["sandwich_heights"] = c.sandwich_heights;
  j["epsilon"] = c.epsilon;
  j["trials"] = c.trials;
  j["n_samples"] = c.n_samples;
  j["vc_proxy"] = c.vc_proxy;
  j["sample_constant"] = c.sample_constant;
  j["contamination"] = c.contamination;
  j["candidate_means"] = c.candidate_means;
  j["rate_sizes"] = c.rate_sizes;
  j["rate_replicates"] = c.rate_replicates;
  j["learn_sizes"] = c.learn_sizes;
  j["learn_replicates"] = c.learn_replicates;
  j["learn_c_L"] = c.learn_c_L;
  j["learn_exponent"] = c.learn_exponent;
  return indent >= 0 ? j.dump(indent) : j.dump();
}

std::string record_to_json(const ResultRecord& r, bool with_timestamp, int indent) {
  ordered j;
  j["version"] = kVersion;
  j["subcommand"] = r.subcommand;
  if (with_timestamp) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  j["config"] = json::parse(r.config_json);
  ordered metrics;
  for (const auto& [k, v] : r.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  ordered tables;
  for (const auto& [k, v] : r.tables) tables[k] = v;
  j["tables"] = tables;
  if (!r.charts.empty()) {
    ordered charts;
    for (const auto& [k, v] : r.charts) charts[k] = v;
    j["charts"] = charts;
  }
  return indent >= 0 ? j.dump(indent) : j.dump();
}

ResultRecord run_polytope_rate(const ExperimentConfig& cfg) {
  if (cfg.shape != "disk" && cfg.shape != "ball")
    throw ConfigError("polytope-rate: shape must be 'disk' or 'ball'");
  if (cfg.direction_counts.size() < 2)
    throw ConfigError("polytope-rate: need at least two direction counts");
  const int d = cfg.shape == "disk" ? 2 : 3;
  ConvexBody body = ConvexBody::ball(d, Vec(d, 0.0), 1.0);
  const double exact_vol = *body.exact_volume;

  std::string csv = "directions,facets,deficit,std_err\n";
  std::vector<double> log_m, log_def;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < cfg.direction_counts.size(); ++i) {
    const std::size_t m = cfg.direction_counts[i];
    if (m < static_cast<std::size_t>(d + 1))
      throw ConfigError("polytope-rate: direction count below dimension+1");
    Polytope poly = inscribed_polytope(body, static_cast<int>(m), salted(cfg.seed, 0x9017u, i));
    double deficit, err;
    if (d == 2) {
      VolumeEstimate v = volume(poly, VolumeMethod::Exact2D);
      deficit = 1.0 - v.value / exact_vol;
      err = 0.0;
    } else {
      DeficitEstimate de =
          mc_deficit(body, poly, cfg.mc_budget, salted(cfg.seed, 0xba11u, i), cfg.exec());
      deficit = de.deficit_abs / exact_vol;
      err = de.deficit_abs_err / exact_vol;
    }
    csv += std::to_string(m) + "," + std::to_string(poly.facet_count()) + "," + fmt(deficit) +
           "," + fmt(err) + "\n";
    log_m.push_back(std::log(static_cast<double>(m)));
    log_def.push_back(std::log(deficit));
    pts.emplace_back(static_cast<double>(m), deficit);
  }
  LineFit fit = fit_line(log_m, log_def);
  csv += "# summary\nslope," + fmt(fit.slope) + "\nintercept," + fmt(fit.intercept) + "\n";

  ResultRecord rec;
  rec.subcommand = "polytope-rate";
  rec.config_json = config_to_json(cfg);
  rec.metrics = {{"slope", fit.slope}, {"intercept", fit.intercept}};
  rec.tables = {{"deficit", csv}};
  rec.charts = {{"deficit", svg_chart("Inscribed-polytope volume deficit", "directions",
                                      "relative deficit", {{cfg.shape, pts}}, true, true)}};
  return rec;
}

ResultRecord run_approx(const ExperimentConfig& cfg) {
  std::shared_ptr<const LogConcaveDensity> f;
  if (!cfg.density_json.empty())
    f = as_log_concave(density_from_json(cfg.density_json), "approx");
  else
    f = std::make_shared<LogConcaveDensity>(std_gaussian(2));

  std::string csv =
      "epsilon,levels,facet_budget,pieces,l1,l1_err,mass,mass_err,tail,tail_err,"
      "sandwich_passes,sandwich_points,violations\n";
  double max_l1_over_eps = 0.0;
  std::size_t total_violations = 0, sandwich_pass = 0, sandwich_total = 0;
  std::vector<std::pair<double, double>> l1_pts;
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    const double eps = cfg.epsilons[i];
    ApproxConfig acfg;
    acfg.epsilon = eps;
    acfg.mc_budget = cfg.budget;
    acfg.seed = salted(cfg.seed, 0xa99ull, i);
    acfg.exec = cfg.exec();
    Approximation ap = build_approximation(*f, acfg);

    L1Report l1 =
        approximation_l1_error(*f, *ap.density, cfg.budget, salted(cfg.seed, 0x11ull, i), cfg.exec());
    // Second-to-last rung of the pure ladder (ignoring any prepended top).
    const std::size_t nl = ap.levels.size();
    const double y_tail = nl >= 2 ? ap.levels[nl - 2] : ap.levels.back();
    TailMassEstimate tail =
        tail_mass(*f, y_tail, cfg.budget, salted(cfg.seed, 0x7a11ull, i), cfg.exec());

    // Random heights inside the ladder's range.
    const double y_low = ap.levels.back();
    const bool prepended = nl > ap.params.levels;
    const double y_high = prepended ? ap.levels[1] : ap.levels.front();
    Rng hrng = make_rng(salted(cfg.seed, 0x5a4dull, i));
    std::vector<double> heights;
    for (std::size_t k = 0; k < cfg.sandwich_heights; ++k)
      heights.push_back(y_low + uniform01(hrng) * (y_high - y_low));
    SandwichReport sw = volume_sandwich_check(*f, *ap.density, eps, heights, cfg.budget,
                                              salted(cfg.seed, 0x5a4d2ull, i), cfg.exec());
    std::size_t passes = 0;
    for (const SandwichPoint& p : sw.points) passes += p.pass ? 1 : 0;

    csv += fmt(eps) + "," + std::to_string(ap.params.levels) + "," +
           std::to_string(ap.params.facets_per_polytope) + "," +
           std::to_string(ap.density->pieces().size()) + "," + fmt(l1.l1) + "," + fmt(l1.l1_err) +
           "," + fmt(l1.mass) + "," + fmt(l1.mass_err) + "," + fmt(tail.value) + "," +
           fmt(tail.std_err) + "," + std::to_string(passes) + "," +
           std::to_string(sw.points.size()) + "," + std::to_string(l1.domination_violations) +
           "\n";
    max_l1_over_eps = std::max(max_l1_over_eps, l1.l1 / eps);
    total_violations += l1.domination_violations;
    sandwich_pass += passes;
    sandwich_total += sw.points.size();
    l1_pts.emplace_back(eps, l1.l1);
  }
  csv += "# summary\nmax_l1_over_eps," + fmt(max_l1_over_eps) + "\nviolations," +
         std::to_string(total_violations) + "\nsandwich_passes," + std::to_string(sandwich_pass) +
         "/" + std::to_string(sandwich_total) + "\n";

  ResultRecord rec;
  rec.subcommand = "approx";
  rec.config_json = config_to_json(cfg);
  rec.metrics = {{"max_l1_over_eps", max_l1_over_eps},
                 {"violations", static_cast<double>(total_violations)},
                 {"sandwich_passes", static_cast<double>(sandwich_pass)},
                 {"sandwich_points", static_cast<double>(sandwich_total)}};
  rec.tables = {{"approx", csv}};
  rec.charts = {{"l1", svg_chart("Approximation L1 error", "epsilon", "L1 error",
                                 {{"l1", l1_pts}}, true, true)}};
  return rec;
}

ResultRecord run_estimate(const ExperimentConfig& cfg) {
  std::shared_ptr<const Density> truth;
  if (!cfg.density_json.empty()) {
    truth = density_from_json(cfg.density_json);
  } else if (cfg.contamination > 0.0) {
    auto cont = std::make_shared<LogConcaveDensity>(
        LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{2.0}, Vec{4.0})));
    truth = std::make_shared<ContaminatedDensity>(std_gaussian(1), cont, cfg.contamination);
  } else {
    truth = std::make_shared<LogConcaveDensity>(std_gaussian(1));
  }
  if (truth->dim() != 1) throw ConfigError("estimate: default candidates are one-dimensional");

  CandidateClass cands;
  cands.dim = 1;
  for (double mu : cfg.candidate_means)
    cands.members.push_back(
        std::make_shared<LogConcaveDensity>(LogConcaveDensity::gaussian(Vec{mu}, Mat::identity(1))));

  GuaranteeOptions gopts;
  gopts.trials = cfg.trials;
  gopts.n_samples =
      cfg.n_samples ? cfg.n_samples : required_samples(cfg.vc_proxy, cfg.epsilon, cfg.sample_constant);
  gopts.integral_budget = cfg.budget;
  gopts.seed = cfg.seed;
  gopts.exec = cfg.exec();
  GuaranteeReport rep = guarantee_harness(*truth, cands, cfg.epsilon, gopts);

  std::string csv = "trial,chosen,tv_chosen,success\n";
  for (std::size_t t = 0; t < rep.trials.size(); ++t)
    csv += std::to_string(t) + "," + std::to_string(rep.trials[t].chosen) + "," +
           fmt(rep.trials[t].tv_chosen) + "," + (rep.trials[t].success ? "1" : "0") + "\n";
  csv += "# summary\nsuccess_rate," + fmt(rep.success_rate) + "\nopt," + fmt(rep.opt) +
         "\nn_samples," + std::to_string(rep.n_samples) + "\n";

  ResultRecord rec;
  rec.subcommand = "estimate";
  rec.config_json = config_to_json(cfg);
  rec.metrics = {{"success_rate", rep.success_rate},
                 {"successes", static_cast<double>(rep.successes)},
                 {"opt", rep.opt},
                 {"n_samples", static_cast<double>(rep.n_samples)}};
  rec.tables = {{"trials", csv}};
  return rec;
}

ResultRecord run_vc(const ExperimentConfig& cfg) {
  // Shattering on small deterministic pools.
  std::vector<Vec> line_pool;
  for (int k = 0; k < 7; ++k) line_pool.push_back(Vec{0.15 * k});
  std::vector<Vec> plane_pool = {{0.0, 0.0},  {1.0, 0.1},  {2.0, -0.1},
                                 {0.1, 1.0},  {1.1, 0.9},  {2.05, 1.15},
                                 {-0.1, 2.0}, {0.95, 2.1}, {2.0, 2.2}};
  ShatterReport iv = vc_estimate(SetFamilyHandle::intervals_1d(), line_pool, 4);
  ShatterReport h1 = vc_estimate(SetFamilyHandle::halfspaces(1), line_pool, 4);
  ShatterReport h2 = vc_estimate(SetFamilyHandle::halfspaces(2), plane_pool, 5);

  std::string shatter_csv = "family,pool,shattered_size,exhaustive,tested_sets\n";
  shatter_csv += "intervals-1d," + std::to_string(line_pool.size()) + "," +
                 std::to_string(iv.shattered_size) + "," + (iv.exhaustive ? "1" : "0") + "," +
                 std::to_string(iv.tested_sets) + "\n";
  shatter_csv += "halfspaces-1d," + std::to_string(line_pool.size()) + "," +
                 std::to_string(h1.shattered_size) + "," + (h1.exhaustive ? "1" : "0") + "," +
                 std::to_string(h1.tested_sets) + "\n";
  shatter_csv += "halfspaces-2d," + std::to_string(plane_pool.size()) + "," +
                 std::to_string(h2.shattered_size) + "," + (h2.exhaustive ? "1" : "0") + "," +
                 std::to_string(h2.tested_sets) + "\n";

  // Growth of a comparison family from shifted piecewise toys.
  auto toy = [](double dx, double dy) {
    std::vector<LevelPiece> pieces;
    const double halves[3] = {1.0, 0.6, 0.2};
    const double ys[3] = {0.3, 0.6, 0.9};
    for (int k = 0; k < 3; ++k) {
      std::vector<Vec> corners = {{dx - halves[k], dy - halves[k]},
                                  {dx + halves[k], dy - halves[k]},
                                  {dx + halves[k], dy + halves[k]},
                                  {dx - halves[k], dy + halves[k]}};
      pieces.push_back(LevelPiece{ys[k], Polytope::hull_of(corners)});
    }
    return std::make_shared<PiecewisePolytopeDensity>(2, std::move(pieces));
  };
  CandidateClass toys;
  toys.dim = 2;
  toys.members = {toy(0.0, 0.0), toy(0.3, 0.2), toy(-0.25, 0.35)};
  std::vector<SetPredicate> family = yatracos_family(toys);
  Rng prng = make_rng(salted(cfg.seed, 0x96c0ull));
  std::vector<Vec> points;
  for (int k = 0; k < 12; ++k)
    points.push_back(Vec{-2.0 + 4.0 * uniform01(prng), -2.0 + 4.0 * uniform01(prng)});
  GrowthReport growth = growth_count(family, points, 2, 3, 4);
  std::string growth_csv = "points,distinct,log_distinct,log_bound,within\n";
  growth_csv += std::to_string(growth.points) + "," + std::to_string(growth.distinct) + "," +
                fmt(growth.log_distinct) + "," + fmt(growth.log_bound) + "," +
                (growth.within ? "1" : "0") + "\n";

  // Empirical-process decay for intervals on uniform[0,1].
  LogConcaveDensity uni =
      LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{0.0}, Vec{1.0}));
  RateReport rate = vc_rate_experiment(uni, cfg.rate_sizes, cfg.rate_replicates, cfg.seed,
                                       cfg.exec());
  std::string rate_csv = "n,mean_sup,std_err,replicates\n";
  std::vector<std::pair<double, double>> rate_pts;
  for (const RatePoint& p : rate.points) {
    rate_csv += std::to_string(p.n) + "," + fmt(p.mean_sup) + "," + fmt(p.std_err) + "," +
                std::to_string(p.replicates) + "\n";
    rate_pts.emplace_back(static_cast<double>(p.n), p.mean_sup);
  }
  rate_csv += "# summary\nslope," + fmt(rate.slope) + "\n";

  ResultRecord rec;
  rec.subcommand = "vc";
  rec.config_json = config_to_json(cfg);
  rec.metrics = {{"intervals_vc", static_cast<double>(iv.shattered_size)},
                 {"halfspaces1d_vc", static_cast<double>(h1.shattered_size)},
                 {"halfspaces2d_vc", static_cast<double>(h2.shattered_size)},
                 {"growth_within", growth.within ? 1.0 : 0.0},
                 {"rate_slope", rate.slope}};
  rec.tables = {{"shatter", shatter_csv}, {"growth", growth_csv}, {"rate", rate_csv}};
  rec.charts = {{"rate", svg_chart("Interval sup-statistic decay", "n", "mean sup",
                                   {{"intervals", rate_pts}}, true, true)}};
  return rec;
}

ResultRecord run_rate(const ExperimentConfig& cfg) {
  if (cfg.learn_sizes.size() < 2) throw ConfigError("rate: need at least two sample sizes");
  if (cfg.learn_replicates == 0) throw ConfigError("rate: need at least one replicate");
  std::shared_ptr<const LogConcaveDensity> truth;
  if (!cfg.density_json.empty())
    truth = as_log_concave(density_from_json(cfg.density_json), "rate");
  else
    truth = std::make_shared<LogConcaveDensity>(std_gaussian(1));
  if (truth->dim() != 1) throw ConfigError("rate: one-dimensional truths only");

  std::string csv = "n,epsilon_n,levels,mean_tv,std_err,replicates\n";
  std::vector<double> log_n, log_tv;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < cfg.learn_sizes.size(); ++i) {
    const std::size_t n = cfg.learn_sizes[i];
    if (n == 0) throw ConfigError("rate: sample sizes must be positive");
    double eps_n = std::pow(static_cast<double>(n), -cfg.learn_exponent);
    eps_n = std::min(0.5, std::max(0.02, eps_n));

    CandidateClass cands;
    cands.dim = 1;
    std::size_t levels = 0;
    for (std::size_t mi = 0; mi < cfg.candidate_means.size(); ++mi) {
      LogConcaveDensity g =
          LogConcaveDensity::gaussian(Vec{cfg.candidate_means[mi]}, Mat::identity(1));
      ApproxConfig acfg;
      acfg.epsilon = eps_n;
      acfg.c_L = cfg.learn_c_L;
      acfg.seed = salted(cfg.seed, 0xb11dull, i * 97 + mi);
      acfg.exec = cfg.exec();
      Approximation ap = build_approximation(g, acfg);
      levels = ap.params.levels;
      cands.members.push_back(ap.density);
    }

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t r = 0; r < cfg.learn_replicates; ++r) {
      std::vector<Vec> draws = sample(*truth, salted(cfg.seed, 0xd4a9ull, i * 131 + r), n);
      EmpiricalDistribution data{std::move(draws)};
      SelectOptions sopts;
      sopts.integral_budget = cfg.budget;
      sopts.seed = salted(cfg.seed, 0x355ull, i * 131 + r);
      sopts.exec = cfg.exec();
      SelectionResult sel = select(cands, data, sopts);
      DistanceEstimate tv = tv_distance(*cands.members[sel.chosen_index], *truth,
                                        IntegrationMethod::Grid1D, 400000, 0, cfg.exec());
      sum += tv.value;
      sumsq += tv.value * tv.value;
    }
    const double reps = static_cast<double>(cfg.learn_replicates);
    const double mean = sum / reps;
    const double var = cfg.learn_replicates > 1
                           ? std::max(0.0, (sumsq - reps * mean * mean) / (reps - 1.0))
                           : 0.0;
    const double se = std::sqrt(var / reps);
    csv += std::to_string(n) + "," + fmt(eps_n) + "," + std::to_string(levels) + "," + fmt(mean) +
           "," + fmt(se) + "," + std::to_string(cfg.learn_replicates) + "\n";
    log_n.push_back(std::log(static_cast<double>(n)));
    log_tv.push_back(std::log(mean));
    pts.emplace_back(static_cast<double>(n), mean);
  }
  LineFit fit = fit_line(log_n, log_tv);
  csv += "# summary\nslope," + fmt(fit.slope) + "\n";

  ResultRecord rec;
  rec.subcommand = "rate";
  rec.config_json = config_to_json(cfg);
  rec.metrics = {{"slope", fit.slope}};
  rec.tables = {{"learning", csv}};
  rec.charts = {{"learning", svg_chart("Estimator learning curve", "n", "mean TV",
                                       {{"selected", pts}}, true, true)}};
  return rec;
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
  if (cfg.subcommand == "polytope-rate") return run_polytope_rate(cfg);
  if (cfg.subcommand == "approx") return run_approx(cfg);
  if (cfg.subcommand == "estimate") return run_estimate(cfg);
  if (cfg.subcommand == "vc") return run_vc(cfg);
  if (cfg.subcommand == "rate") return run_rate(cfg);
  throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

}  // namespace logcave
