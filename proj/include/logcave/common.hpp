#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace logcave {

inline constexpr const char* kVersion = "0.1.0";

// A point or direction in R^d. Dimension is the vector length.
using Vec = std::vector<double>;

// Axis-aligned box {x : lo <= x <= hi}, the universal bounding-region type.
struct Box {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
  }

  bool contains(const Vec& x) const {
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (x[k] < lo[k] || x[k] > hi[k]) return false;
    return true;
  }
};

// Smallest box containing both arguments.
inline Box box_union(const Box& a, const Box& b) {
  Box out = a;
  for (std::size_t k = 0; k < out.lo.size(); ++k) {
    out.lo[k] = std::min(out.lo[k], b.lo[k]);
    out.hi[k] = std::max(out.hi[k], b.hi[k]);
  }
  return out;
}

// Invalid user-supplied configuration (dimension mismatch, bad parameter
// ranges, malformed JSON). The CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation ran out of its sampling/evaluation budget before reaching
// the requested tolerance. The CLI maps this to exit code 3.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec axpy(double t, const Vec& u, const Vec& x) {
  Vec out(x);
  for (std::size_t k = 0; k < x.size(); ++k) out[k] += t * u[k];
  return out;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] -= b[k];
  return out;
}

inline void check_dim(const Vec& x, int d, const char* what) {
  if (static_cast<int>(x.size()) != d)
    throw ConfigError(std::string(what) + ": expected dimension " +
                      std::to_string(d) + ", got " + std::to_string(x.size()));
}

inline void check_finite(const Vec& x, const char* what) {
  for (double v : x)
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + ": non-finite coordinate");
}

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Least-squares line y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ConfigError("fit_line: need two matching samples or more");
  double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ConfigError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  // V_d = pi^{d/2} / Gamma(d/2 + 1)
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

}  // namespace logcave
