// Wall-time comparison of the serial and parallel execution policies on the
// heavy kernels, with a bit-identity check: both policies must produce the
// exact same numbers, so the speedup is free.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "logcave/densities.hpp"
#include "logcave/geometry.hpp"
#include "logcave/linalg.hpp"
#include "logcave/metrics.hpp"
#include "logcave/parallel.hpp"
#include "logcave/structure.hpp"

using namespace logcave;

namespace {

double run_timed(const std::function<double(Exec)>& fn, Exec exec, double& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = fn(exec);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
  std::printf("workers available: %d\n\n", max_workers());

  ConvexBody ball3 = ConvexBody::ball(3, Vec(3, 0.0), 1.0);
  Polytope poly3 = inscribed_polytope(ball3, 128);

  LogConcaveDensity g0 = LogConcaveDensity::gaussian(Vec(2, 0.0), Mat::identity(2));
  LogConcaveDensity g1 = LogConcaveDensity::gaussian(Vec{1.0, 0.0}, Mat::identity(2));

  ApproxConfig acfg;
  acfg.epsilon = 0.2;
  acfg.seed = 7;
  Approximation approx = build_approximation(g0, acfg);

  struct Row {
    std::string name;
    std::function<double(Exec)> fn;
  };
  const std::vector<Row> rows = {
      {"volume mc (ball d=3, 2e6 pts)",
       [&](Exec e) { return volume(poly3, VolumeMethod::MonteCarlo, 2000000, 7, e).value; }},
      {"deficit mc (ball d=3, 2e6 pts)",
       [&](Exec e) { return mc_deficit(ball3, poly3, 2000000, 7, e).deficit_abs; }},
      {"tv mc (gaussians d=2, 1e6 pts)",
       [&](Exec e) {
         return tv_distance(g0, g1, IntegrationMethod::MonteCarlo, 1000000, 7, e).value;
       }},
      {"l1 gap (ladder vs truth, 1e6 pts)",
       [&](Exec e) { return approximation_l1_error(g0, *approx.density, 1000000, 7, e).l1; }},
  };

  std::printf("%-36s %10s %10s %8s %s\n", "kernel", "serial s", "parallel s", "speedup",
              "identical");
  bool all_identical = true;
  for (const Row& row : rows) {
    double vs = 0.0, vp = 0.0;
    const double ts = run_timed(row.fn, Exec::Serial, vs);
    const double tp = run_timed(row.fn, Exec::Parallel, vp);
    const bool same = vs == vp;
    all_identical = all_identical && same;
    std::printf("%-36s %10.3f %10.3f %7.2fx %s\n", row.name.c_str(), ts, tp,
                tp > 0.0 ? ts / tp : 0.0, same ? "yes" : "NO");
  }
  if (!all_identical) {
    std::printf("\npolicy mismatch: serial and parallel runs disagree\n");
    return 1;
  }
  return 0;
}
