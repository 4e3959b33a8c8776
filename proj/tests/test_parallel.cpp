#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "logcave/mc.hpp"
#include "logcave/parallel.hpp"
#include "logcave/rng.hpp"

using namespace logcave;

TEST_CASE("worker count is sane") { CHECK(max_workers() >= 1); }

TEST_CASE("rng substreams are deterministic and distinct") {
  Rng a = make_rng(5, 0);
  Rng b = make_rng(5, 0);
  CHECK(a() == b());
  CHECK(make_rng(5, 1)() != make_rng(5, 0)());
  CHECK(make_rng(6, 0)() != make_rng(5, 0)());
  double u = uniform01(a);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}

TEST_CASE("for_each_index covers every index and propagates exceptions") {
  std::vector<int> hits(1000, 0);
  for_each_index(hits.size(), Exec::Parallel, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(for_each_index(64, Exec::Parallel,
                                 [&](std::size_t i) {
                                   if (i == 13) throw std::invalid_argument("boom");
                                 }),
                  std::invalid_argument);
}

TEST_CASE("chunked monte carlo is policy independent, bit for bit") {
  auto kernel = [](Rng& rng) { return uniform01(rng); };
  McSums<1> s = mc_mean(100000, 9, Exec::Serial, kernel);
  McSums<1> p = mc_mean(100000, 9, Exec::Parallel, kernel);
  CHECK(s.sum[0] == p.sum[0]);
  CHECK(s.sum_sq[0] == p.sum_sq[0]);
  CHECK(s.n == p.n);
  CHECK(std::abs(s.mean() - 0.5) < 4.0 * s.std_err());
  // uniform variance 1/12 shows up in the error bar
  CHECK(s.std_err() == doctest::Approx(std::sqrt(1.0 / 12.0 / 100000.0)).epsilon(0.05));
}

TEST_CASE("partial chunks account for every sample") {
  const std::size_t n = kMcChunk + 7;
  McSums<1> s = mc_mean(n, 3, Exec::Parallel, [](Rng&) { return 1.0; });
  CHECK(s.n == n);
  CHECK(s.sum[0] == static_cast<double>(n));
}

TEST_CASE("multi statistic accumulators stay aligned") {
  McSums<2> s = mc_run<2>(50000, 21, Exec::Parallel, [](Rng& rng, std::array<double, 2>& v) {
    const double u = uniform01(rng);
    v[0] = u;
    v[1] = u * u;
  });
  CHECK(std::abs(s.mean(0) - 0.5) < 4.0 * s.std_err(0));
  CHECK(std::abs(s.mean(1) - 1.0 / 3.0) < 4.0 * s.std_err(1));
}
