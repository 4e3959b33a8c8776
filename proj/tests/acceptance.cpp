// Acceptance gate: one pass/fail line per criterion, tolerances pinned here.
// Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "logcave/densities.hpp"
#include "logcave/estimator.hpp"
#include "logcave/experiments.hpp"
#include "logcave/geometry.hpp"
#include "logcave/linalg.hpp"
#include "logcave/metrics.hpp"
#include "logcave/parallel.hpp"
#include "logcave/rng.hpp"
#include "logcave/structure.hpp"
#include "logcave/vclab.hpp"

using namespace logcave;

namespace {

// ---- pinned tolerances and references ------------------------------------
constexpr double kPi = 3.141592653589793;
constexpr double kBall3Volume = 4.1887902047863905;
constexpr double kHexagonArea = 2.598076211353316;  // (3/2) sqrt(3), unit circle
constexpr double kHexagonTol = 1e-9;
constexpr double kDiskSlopeRef = -2.0, kDiskSlopeTol = 0.15;
constexpr double kBallSlopeRef = -1.0, kBallSlopeTol = 0.25;
constexpr double kTvShiftedGaussians = 0.38292492254802624;  // 2 Phi(1/2) - 1
constexpr double kTvTol = 0.003;
constexpr double kRateSlopeRef = -0.5, kRateSlopeTol = 0.1;

// L1 calibration for the ladder approximation of the standard 2-D gaussian
// (budget 200000, seeds below). Frozen at first calibration; the regression
// window is +-10% around the per-epsilon references. Negative means "not yet
// calibrated": the run then reports the measured values and fails.
constexpr double kL1CalibrationC = 1.6;
constexpr double kL1Reference[3] = {0.31005, 0.19671, 0.14607};

int g_failures = 0;

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void report(int idx, const char* name, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] criterion %2d: %-34s %s (%.1fs)\n", pass ? "PASS" : "FAIL", idx, name,
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- criterion 1: inscribed polytope volume deficit rates ----------------
void criterion_polytope_rate() {
  const double t0 = now_s();
  ConvexBody disk = ConvexBody::ball(2, Vec(2, 0.0), 1.0);
  std::vector<double> lm, ld;
  for (int m : {8, 16, 32, 64, 128}) {
    Polytope p = inscribed_polytope(disk, m);
    const double deficit = 1.0 - volume(p, VolumeMethod::Exact2D).value / kPi;
    lm.push_back(std::log(m));
    ld.push_back(std::log(deficit));
  }
  const double disk_slope = fit_line(lm, ld).slope;

  ConvexBody ball3 = ConvexBody::ball(3, Vec(3, 0.0), 1.0);
  std::vector<double> bm, bd;
  std::size_t i = 0;
  for (int m : {32, 64, 128, 256}) {
    Polytope p = inscribed_polytope(ball3, m);
    DeficitEstimate de = mc_deficit(ball3, p, 1000000, 101 + i++);
    bm.push_back(std::log(m));
    bd.push_back(std::log(de.deficit_abs / kBall3Volume));
  }
  const double ball_slope = fit_line(bm, bd).slope;

  const bool ok = std::abs(disk_slope - kDiskSlopeRef) <= kDiskSlopeTol &&
                  std::abs(ball_slope - kBallSlopeRef) <= kBallSlopeTol;
  report(1, "polytope deficit rate", ok,
         fmt("disk slope %.3f (want %.1f+-%.2f), ball slope %.3f (want %.1f+-%.2f)", disk_slope,
             kDiskSlopeRef, kDiskSlopeTol, ball_slope, kBallSlopeRef, kBallSlopeTol),
         now_s() - t0);
}

// ---- criterion 2: exact hexagon ------------------------------------------
void criterion_hexagon() {
  const double t0 = now_s();
  ConvexBody disk = ConvexBody::ball(2, Vec(2, 0.0), 1.0);
  Polytope hex = inscribed_polytope(disk, 6);
  const double v = volume(hex, VolumeMethod::Exact2D).value;
  const bool ok = std::abs(v - kHexagonArea) <= kHexagonTol;
  report(2, "inscribed hexagon, exact area", ok,
         fmt("area %.12f vs %.12f (tol %.0e)", v, kHexagonArea, kHexagonTol), now_s() - t0);
}

// ---- criterion 3: domination, L1 gap, captured mass -----------------------
void criterion_approx_quality() {
  const double t0 = now_s();
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  const double eps_list[3] = {0.4, 0.2, 0.1};
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double eps = eps_list[i];
    ApproxConfig cfg;
    cfg.epsilon = eps;
    cfg.seed = 31 + static_cast<std::uint64_t>(i);
    Approximation ap = build_approximation(f, cfg);
    L1Report l1 = approximation_l1_error(f, *ap.density, 100000, 57 + i);

    const bool dominated = l1.domination_violations == 0;
    const bool mass_ok = l1.mass >= 1.0 - 4.0 * eps - 3.0 * l1.mass_err;
    bool l1_ok, reg_ok;
    if (kL1CalibrationC < 0.0) {
      l1_ok = reg_ok = false;  // uncalibrated: report the measurement
    } else {
      l1_ok = l1.l1 <= kL1CalibrationC * eps;
      reg_ok = std::abs(l1.l1 - kL1Reference[i]) <= 0.10 * kL1Reference[i];
    }
    ok = ok && dominated && mass_ok && l1_ok && reg_ok;
    detail += fmt("eps %.1f: viol %zu, l1 %.5f (<= %.3f, ref %.5f), mass %.4f; ", eps,
                  l1.domination_violations, l1.l1,
                  kL1CalibrationC < 0.0 ? -1.0 : kL1CalibrationC * eps,
                  kL1CalibrationC < 0.0 ? -1.0 : kL1Reference[i], l1.mass);
  }
  report(3, "ladder under the density", ok, detail, now_s() - t0);
}

// ---- criterion 4: tail mass below the last rungs --------------------------
void criterion_tail() {
  const double t0 = now_s();
  bool ok = true;
  std::string detail;
  for (int d : {1, 2}) {
    LogConcaveDensity f = LogConcaveDensity::gaussian(Vec(d, 0.0), Mat::identity(d));
    ApproxConfig cfg;  // defaults: epsilon 0.1
    cfg.seed = 71 + static_cast<std::uint64_t>(d);
    Approximation ap = build_approximation(f, cfg);
    const std::size_t nl = ap.levels.size();
    const double y_cut = nl >= 2 ? ap.levels[nl - 2] : ap.levels.back();
    TailMassEstimate tail = tail_mass(f, y_cut, 200000, 83 + static_cast<std::uint64_t>(d));
    const bool this_ok = tail.value <= 0.1 + 3.0 * tail.std_err;
    ok = ok && this_ok;
    detail += fmt("d=%d: tail %.2e +- %.1e; ", d, tail.value, tail.std_err);
  }
  report(4, "tail mass within budget", ok, detail, now_s() - t0);
}

// ---- criterion 5: volume sandwich -----------------------------------------
void criterion_sandwich() {
  const double t0 = now_s();
  const double eps = 0.2;
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  ApproxConfig cfg;
  cfg.epsilon = eps;
  cfg.seed = 91;
  Approximation ap = build_approximation(f, cfg);
  const double y_low = ap.levels.back();
  const double y_high = ap.levels.front();
  Rng rng = make_rng(2026);
  std::vector<double> heights;
  for (int k = 0; k < 10; ++k) heights.push_back(y_low + uniform01(rng) * (y_high - y_low));
  SandwichReport sw = volume_sandwich_check(f, *ap.density, eps, heights, 200000, 95);
  std::size_t passes = 0;
  for (const SandwichPoint& p : sw.points) {
    const double slack =
        3.0 * std::sqrt(p.lhs_err * p.lhs_err +
                        (1.0 - eps) * (1.0 - eps) * p.rhs_err * p.rhs_err) +
        1e-12;
    passes += (p.lhs - (1.0 - eps) * p.rhs >= -slack) ? 1 : 0;
  }
  const bool ok = passes == sw.points.size();
  report(5, "superlevel volume sandwich", ok, fmt("%zu/%zu heights pass", passes, sw.points.size()),
         now_s() - t0);
}

// ---- criterion 6: evaluation rules and the union formula ------------------
std::shared_ptr<PiecewisePolytopeDensity> random_toy2(Rng& rng) {
  const std::size_t n_pieces = 1 + static_cast<std::size_t>(uniform01(rng) * 4.0) % 4;  // <= 4
  std::vector<LevelPiece> pieces;
  for (std::size_t i = 0; i < n_pieces; ++i) {
    const double height = 0.05 + uniform01(rng);
    for (;;) {
      std::vector<Vec> pts;
      const std::size_t k = 3 + static_cast<std::size_t>(uniform01(rng) * 2.0) % 2;  // 3 or 4
      for (std::size_t j = 0; j < k; ++j)
        pts.push_back(Vec{-2.0 + 4.0 * uniform01(rng), -2.0 + 4.0 * uniform01(rng)});
      try {
        Polytope p = Polytope::hull_of(pts);
        if (p.facet_count() > 4) break;  // retry; facet budget is four
        pieces.push_back(LevelPiece{height, std::move(p)});
        break;
      } catch (const std::exception&) {
      }
    }
  }
  return std::make_shared<PiecewisePolytopeDensity>(2, std::move(pieces));
}

void criterion_eval_rules() {
  const double t0 = now_s();
  Rng rng = make_rng(606);
  std::size_t checked = 0, eval_mismatch = 0, union_mismatch = 0;
  for (int pair = 0; pair < 20; ++pair) {
    auto g = random_toy2(rng);
    auto gp = random_toy2(rng);
    for (int k = 0; k < 5000; ++k) {
      Vec x{-3.0 + 6.0 * uniform01(rng), -3.0 + 6.0 * uniform01(rng)};
      if (g->eval(x) != g->eval_first_hit(x)) ++eval_mismatch;
      const bool via = yatracos_membership_via_levels(*g, *gp, x);
      const bool direct = g->eval(x) >= gp->eval(x);  // both zero counts as a tie
      if (via != direct) ++union_mismatch;
      ++checked;
    }
  }
  const bool ok = eval_mismatch == 0 && union_mismatch == 0 && checked == 100000;
  report(6, "dual evaluation + union formula", ok,
         fmt("%zu points, %zu eval mismatches, %zu union mismatches", checked, eval_mismatch,
             union_mismatch),
         now_s() - t0);
}

// ---- criterion 7: selection guarantee -------------------------------------
void criterion_guarantee() {
  const double t0 = now_s();
  CandidateClass cands;
  cands.dim = 1;
  for (double mu : {-1.0, -0.5, 0.0, 0.5, 1.0})
    cands.members.push_back(std::make_shared<LogConcaveDensity>(
        LogConcaveDensity::gaussian(Vec{mu}, Mat::identity(1))));

  const std::size_t n = required_samples(2.0, 0.1, 5.0);
  const bool n_ok = n == 1000;

  GuaranteeOptions opts;
  opts.trials = 100;
  opts.n_samples = n;
  opts.seed = 404;

  // plain: the truth is in the class, so success means TV <= epsilon
  LogConcaveDensity truth = LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1));
  GuaranteeReport plain = guarantee_harness(truth, cands, 0.1, opts);
  std::size_t plain_hits = 0;
  for (const GuaranteeTrial& t : plain.trials) plain_hits += (t.tv_chosen <= 0.1) ? 1 : 0;

  // contaminated: eta = 0.1 off-model mass; fixed threshold 3*0.1 + 0.1
  auto cont = std::make_shared<LogConcaveDensity>(
      LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{2.0}, Vec{4.0})));
  ContaminatedDensity dirty(truth, cont, 0.1);
  opts.seed = 405;
  GuaranteeReport noisy = guarantee_harness(dirty, cands, 0.1, opts);
  std::size_t noisy_hits = 0;
  for (const GuaranteeTrial& t : noisy.trials) noisy_hits += (t.tv_chosen <= 0.4) ? 1 : 0;
  const bool opt_ok = noisy.opt <= 0.1 + 3.0 * noisy.opt_err;

  const bool ok = n_ok && plain_hits >= 90 && noisy_hits >= 90 && opt_ok;
  report(7, "selection guarantee", ok,
         fmt("n=%zu, plain %zu/100, contaminated %zu/100 (opt %.4f)", n, plain_hits, noisy_hits,
             noisy.opt),
         now_s() - t0);
}

// ---- criterion 8: argmin certificate --------------------------------------
void criterion_argmin() {
  const double t0 = now_s();
  std::size_t runs = 0, certified = 0;

  CandidateClass c1;
  c1.dim = 1;
  for (double mu : {-1.0, 0.0, 1.0})
    c1.members.push_back(std::make_shared<LogConcaveDensity>(
        LogConcaveDensity::gaussian(Vec{mu}, Mat::identity(1))));
  for (std::uint64_t s = 0; s < 30; ++s) {
    EmpiricalDistribution data{sample(*c1.members[s % 3], 700 + s, 500)};
    SelectOptions so;
    so.seed = s;
    SelectionResult r = select(c1, data, so);
    bool cert = true;
    for (double rm : r.row_max) cert = cert && r.row_max[r.chosen_index] <= rm;
    ++runs;
    certified += cert ? 1 : 0;
  }

  CandidateClass c2;
  c2.dim = 2;
  for (double mu : {0.0, 1.5})
    c2.members.push_back(std::make_shared<LogConcaveDensity>(
        LogConcaveDensity::gaussian(Vec{mu, 0.0}, Mat::identity(2))));
  for (std::uint64_t s = 0; s < 5; ++s) {
    EmpiricalDistribution data{sample(*c2.members[0], 800 + s, 300)};
    SelectOptions so;
    so.seed = s;
    so.integral_budget = 50000;
    SelectionResult r = select(c2, data, so);
    bool cert = true;
    for (double rm : r.row_max) cert = cert && r.row_max[r.chosen_index] <= rm;
    ++runs;
    certified += cert ? 1 : 0;
  }

  const bool ok = certified == runs;
  report(8, "argmin certificate", ok, fmt("%zu/%zu selections certified", certified, runs),
         now_s() - t0);
}

// ---- criterion 9: shattering and the square-root law ----------------------
void criterion_vc() {
  const double t0 = now_s();
  std::vector<Vec> line;
  for (int k = 0; k < 7; ++k) line.push_back(Vec{0.15 * k});
  ShatterReport iv = vc_estimate(SetFamilyHandle::intervals_1d(), line, 4);

  std::vector<Vec> plane = {{0.0, 0.0},  {1.0, 0.1},  {2.0, -0.1}, {0.1, 1.0},  {1.1, 0.9},
                            {2.05, 1.15}, {-0.1, 2.0}, {0.95, 2.1}, {2.0, 2.2}};
  ShatterReport h2 = vc_estimate(SetFamilyHandle::halfspaces(2), plane, 5);

  LogConcaveDensity uni =
      LogConcaveDensity::uniform_on(ConvexBody::make_box(Vec{0.0}, Vec{1.0}));
  RateReport rate = vc_rate_experiment(uni, {100, 400, 1600, 6400}, 30, 909);

  const bool ok = iv.shattered_size == 2 && iv.exhaustive && h2.shattered_size == 3 &&
                  h2.exhaustive && std::abs(rate.slope - kRateSlopeRef) <= kRateSlopeTol;
  report(9, "vc dimensions and decay", ok,
         fmt("intervals vc %zu, halfplanes vc %zu, slope %.3f (want %.1f+-%.1f)",
             iv.shattered_size, h2.shattered_size, rate.slope, kRateSlopeRef, kRateSlopeTol),
         now_s() - t0);
}

// ---- criterion 10: distance identities ------------------------------------
void criterion_distances() {
  const double t0 = now_s();
  LogConcaveDensity f = LogConcaveDensity::gaussian(Vec{0.0}, Mat::identity(1));
  LogConcaveDensity g = LogConcaveDensity::gaussian(Vec{1.0}, Mat::identity(1));
  DistanceEstimate tv = tv_distance(f, g, IntegrationMethod::Grid1D);
  const bool tv_ok = std::abs(tv.value - kTvShiftedGaussians) <= kTvTol;

  Rng rng = make_rng(1010);
  std::size_t sandwich_ok = 0;
  for (int k = 0; k < 20; ++k) {
    const double m1 = -0.4 + 0.8 * uniform01(rng);
    const double m2 = -0.4 + 0.8 * uniform01(rng);
    const double s1 = 0.8 + 0.5 * uniform01(rng);
    const double s2 = 0.8 + 0.5 * uniform01(rng);
    LogConcaveDensity a = LogConcaveDensity::gaussian(Vec{m1}, Mat::diagonal(Vec{s1 * s1}));
    LogConcaveDensity b = LogConcaveDensity::gaussian(Vec{m2}, Mat::diagonal(Vec{s2 * s2}));
    DistanceEstimate t = tv_distance(a, b, IntegrationMethod::Grid1D);
    HellingerEstimate h = hellinger(a, b, IntegrationMethod::Grid1D);
    const double slack = 3.0 * (t.std_err + h.h2.std_err) + 1e-9;
    if (h.h2.value <= t.value + slack && t.value <= h.h + slack) ++sandwich_ok;
  }
  const bool ok = tv_ok && sandwich_ok == 20;
  report(10, "tv pin + hellinger sandwich", ok,
         fmt("tv %.6f (ref %.6f+-%.3f), sandwich %zu/20", tv.value, kTvShiftedGaussians, kTvTol,
             sandwich_ok),
         now_s() - t0);
}

// ---- criterion 11: byte-identical reruns -----------------------------------
void criterion_determinism() {
  const double t0 = now_s();
  bool ok = true;
  std::string detail;

  auto same_tables = [&](const ExperimentConfig& cfg, const char* label) {
    ResultRecord a = run_experiment(cfg);
    ResultRecord b = run_experiment(cfg);
    bool same = a.tables.size() == b.tables.size();
    for (std::size_t i = 0; same && i < a.tables.size(); ++i)
      same = a.tables[i].first == b.tables[i].first && a.tables[i].second == b.tables[i].second;
    same = same && record_to_json(a) == record_to_json(b);
    ok = ok && same;
    detail += fmt("%s %s; ", label, same ? "identical" : "DIFFERS");
  };

  ExperimentConfig pr;
  pr.subcommand = "polytope-rate";
  pr.direction_counts = {8, 16, 32};
  pr.seed = 77;
  same_tables(pr, "polytope-rate");

  ExperimentConfig es;
  es.subcommand = "estimate";
  es.trials = 3;
  es.n_samples = 80;
  es.epsilon = 0.3;
  es.candidate_means = {0.0, 1.0};
  es.seed = 78;
  same_tables(es, "estimate");

  ExperimentConfig vc;
  vc.subcommand = "vc";
  vc.rate_sizes = {50, 200};
  vc.rate_replicates = 5;
  vc.seed = 79;
  same_tables(vc, "vc");

  report(11, "byte-identical reruns", ok, detail, now_s() - t0);
}

}  // namespace

int main() {
  std::printf("acceptance gate (%d workers)\n", max_workers());
  criterion_polytope_rate();
  criterion_hexagon();
  criterion_approx_quality();
  criterion_tail();
  criterion_sandwich();
  criterion_eval_rules();
  criterion_guarantee();
  criterion_argmin();
  criterion_vc();
  criterion_distances();
  criterion_determinism();
  std::printf("%s: %d criterion(s) failed\n", g_failures ? "RED" : "GREEN", g_failures);
  return g_failures;
}
