#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "logcave/parallel.hpp"
#include "logcave/rng.hpp"

namespace logcave {

// Work is split into fixed-size chunks regardless of how many workers run
// them; chunk c always uses substream make_rng(seed, c) and partial sums are
// reduced in chunk order. Result: identical output for a fixed seed no
// matter the thread count (and Serial == Parallel exactly).
inline constexpr std::size_t kMcChunk = 8192;

template <std::size_t A>
struct McSums {
  std::array<double, A> sum{};
  std::array<double, A> sum_sq{};
  std::size_t n = 0;

  double mean(std::size_t i = 0) const { return n ? sum[i] / static_cast<double>(n) : 0.0; }

  // Standard error of the mean (population variance; at MC sample counts the
  // Bessel correction is noise, and for 0/1 kernels this is exactly
  // sqrt(p(1-p)/n)).
  double std_err(std::size_t i = 0) const {
    if (n == 0) return 0.0;
    const double m = mean(i);
    double var = sum_sq[i] / static_cast<double>(n) - m * m;
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / static_cast<double>(n));
  }
};

// kernel(rng, out) fills out[0..A) with the per-sample values.
template <std::size_t A, typename Kernel>
McSums<A> mc_run(std::size_t n, std::uint64_t seed, Exec exec, Kernel&& kernel) {
  const std::size_t n_chunks = (n + kMcChunk - 1) / kMcChunk;
  std::vector<McSums<A>> partial(n_chunks);

  for_each_index(n_chunks, exec, [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    McSums<A>& acc = partial[c];
    const std::size_t lo = c * kMcChunk;
    const std::size_t hi = std::min(n, lo + kMcChunk);
    std::array<double, A> v{};
    for (std::size_t k = lo; k < hi; ++k) {
      kernel(rng, v);
      for (std::size_t i = 0; i < A; ++i) {
        acc.sum[i] += v[i];
        acc.sum_sq[i] += v[i] * v[i];
      }
    }
    acc.n = hi - lo;
  });

  McSums<A> total;
  for (const McSums<A>& p : partial) {
    for (std::size_t i = 0; i < A; ++i) {
      total.sum[i] += p.sum[i];
      total.sum_sq[i] += p.sum_sq[i];
    }
    total.n += p.n;
  }
  return total;
}

// Single-statistic convenience: kernel(rng) -> double.
template <typename Kernel>
McSums<1> mc_mean(std::size_t n, std::uint64_t seed, Exec exec, Kernel&& kernel) {
  return mc_run<1>(n, seed, exec, [&](Rng& rng, std::array<double, 1>& v) { v[0] = kernel(rng); });
}

}  // namespace logcave
