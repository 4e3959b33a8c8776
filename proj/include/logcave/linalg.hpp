#pragma once

#include <cmath>
#include <vector>

#include "logcave/common.hpp"

namespace logcave {

// Small dense square matrix (row-major). Densities live in d <= 3 or so;
// nothing here is tuned beyond that.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

  static Mat identity(int n_) {
    Mat m(n_);
    for (int i = 0; i < n_; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static Mat diagonal(const Vec& d) {
    Mat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
    return m;
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  Vec apply(const Vec& x) const {
    Vec y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += at(i, j) * x[j];
    return y;
  }
};

// Lower-triangular Cholesky factor; throws ConfigError unless SPD.
inline Mat cholesky(const Mat& m) {
  Mat L(m.n);
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
      if (i == j) {
        if (s <= 0.0) throw ConfigError("matrix is not positive definite");
        L.at(i, i) = std::sqrt(s);
      } else {
        L.at(i, j) = s / L.at(j, j);
      }
    }
  }
  return L;
}

inline double spd_det(const Mat& m) {
  Mat L = cholesky(m);
  double d = 1.0;
  for (int i = 0; i < m.n; ++i) d *= L.at(i, i) * L.at(i, i);
  return d;
}

inline Mat spd_inverse(const Mat& m) {
  Mat L = cholesky(m);
  Mat inv(m.n);
  // Solve L L^T x = e_k for each basis vector.
  for (int k = 0; k < m.n; ++k) {
    Vec y(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
      double s = (i == k) ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) s -= L.at(i, j) * y[j];
      y[i] = s / L.at(i, i);
    }
    for (int i = m.n - 1; i >= 0; --i) {
      double s = y[i];
      for (int j = i + 1; j < m.n; ++j) s -= L.at(j, i) * y[j];
      y[i] = s / L.at(i, i);
    }
    for (int i = 0; i < m.n; ++i) inv.at(i, k) = y[i];
  }
  return inv;
}

inline double quad_form(const Mat& m, const Vec& x) {
  double s = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) s += x[i] * m.at(i, j) * x[j];
  return s;
}

}  // namespace logcave
