#include "logcave/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logcave {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Effective support half-width in "standard deviations": exp(-tail^2/2) and
// exp(-tail) are both far below the 1e-12 mass target for integration boxes.
constexpr double kGaussTailSigmas = 8.5;
constexpr double kExpTailRate = 32.0;
}  // namespace

std::vector<Vec> sample(const Density& f, std::uint64_t seed, std::size_t n) {
  Rng rng = make_rng(seed, 0xA11CEULL);
  std::vector<Vec> out;
  out.reserve(n);
  f.sample_into(rng, out, n);
  return out;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::UniformConvex: return "uniform-convex";
    case Family::ProductExponential: return "product-exponential";
    case Family::ProductLaplace: return "product-laplace";
    case Family::Generic: return "generic";
  }
  return "?";
}

LogConcaveDensity LogConcaveDensity::gaussian(Vec mean, Mat cov) {
  const int d = static_cast<int>(mean.size());
  if (d < 1) throw ConfigError("gaussian: dimension must be >= 1");
  if (cov.n != d) throw ConfigError("gaussian: covariance dimension mismatch");
  check_finite(mean, "gaussian mean");

  LogConcaveDensity f;
  f.family_ = Family::Gaussian;
  f.d_ = d;
  f.mean_ = mean;
  f.mode_ = mean;
  f.cov_ = cov;
  f.chol_ = cholesky(cov);  // rejects non-SPD
  f.inv_cov_ = spd_inverse(cov);
  f.det_cov_ = spd_det(cov);
  f.max_value_ = std::pow(2.0 * M_PI, -d / 2.0) / std::sqrt(f.det_cov_);
  f.box_.lo = mean;
  f.box_.hi = mean;
  for (int k = 0; k < d; ++k) {
    double sd = std::sqrt(cov.at(k, k));
    f.box_.lo[k] -= kGaussTailSigmas * sd;
    f.box_.hi[k] += kGaussTailSigmas * sd;
  }
  return f;
}

LogConcaveDensity LogConcaveDensity::uniform_on(ConvexBody K) {
  if (!K.exact_volume)
    throw ConfigError("uniform-convex: body must carry an exact volume");
  if (*K.exact_volume <= 0.0)
    throw ConfigError("uniform-convex: degenerate zero-volume support");
  LogConcaveDensity f;
  f.family_ = Family::UniformConvex;
  f.d_ = K.dim();
  f.max_value_ = 1.0 / *K.exact_volume;
  f.mode_ = K.interior_point;
  f.box_ = K.box;
  f.body_ = std::move(K);
  return f;
}

LogConcaveDensity LogConcaveDensity::product_exponential(Vec rates) {
  const int d = static_cast<int>(rates.size());
  if (d < 1) throw ConfigError("product-exponential: dimension must be >= 1");
  for (double r : rates)
    if (!(r > 0.0) || !std::isfinite(r))
      throw ConfigError("product-exponential: rates must be positive");
  LogConcaveDensity f;
  f.family_ = Family::ProductExponential;
  f.d_ = d;
  f.rates_ = rates;
  f.mode_.assign(d, 0.0);
  f.max_value_ = 1.0;
  for (double r : rates) f.max_value_ *= r;
  f.box_.lo.assign(d, 0.0);
  f.box_.hi.resize(d);
  for (int k = 0; k < d; ++k) f.box_.hi[k] = kExpTailRate / rates[k];
  return f;
}

LogConcaveDensity LogConcaveDensity::product_laplace(Vec locations, Vec scales) {
  const int d = static_cast<int>(locations.size());
  if (d < 1) throw ConfigError("product-laplace: dimension must be >= 1");
  check_dim(scales, d, "laplace scales");
  for (double b : scales)
    if (!(b > 0.0) || !std::isfinite(b))
      throw ConfigError("product-laplace: scales must be positive");
  LogConcaveDensity f;
  f.family_ = Family::ProductLaplace;
  f.d_ = d;
  f.mean_ = locations;
  f.mode_ = locations;
  f.scales_ = scales;
  f.max_value_ = 1.0;
  for (double b : scales) f.max_value_ /= 2.0 * b;
  f.box_.lo = locations;
  f.box_.hi = locations;
  for (int k = 0; k < d; ++k) {
    f.box_.lo[k] -= kExpTailRate * scales[k];
    f.box_.hi[k] += kExpTailRate * scales[k];
  }
  return f;
}

LogConcaveDensity LogConcaveDensity::generic(int d, std::function<double(const Vec&)> phi,
                                             Vec mode, Box support_box) {
  if (d < 1) throw ConfigError("generic density: dimension must be >= 1");
  check_dim(mode, d, "generic density mode");
  LogConcaveDensity f;
  f.family_ = Family::Generic;
  f.d_ = d;
  f.mode_ = mode;
  f.phi_ = std::move(phi);
  f.box_ = std::move(support_box);
  f.max_value_ = std::exp(f.phi_(mode));
  if (!(f.max_value_ > 0.0) || !std::isfinite(f.max_value_))
    throw ConfigError("generic density: potential at mode must be finite");
  return f;
}

double LogConcaveDensity::potential(const Vec& x) const {
  check_dim(x, d_, "density argument");
  switch (family_) {
    case Family::Gaussian:
      return std::log(max_value_) - 0.5 * quad_form(inv_cov_, sub(x, mean_));
    case Family::UniformConvex:
      return body_->member(x) ? std::log(max_value_) : kNegInf;
    case Family::ProductExponential: {
      double s = 0.0;
      for (int k = 0; k < d_; ++k) {
        if (x[k] < 0.0) return kNegInf;
        s += rates_[k] * x[k];
      }
      return std::log(max_value_) - s;
    }
    case Family::ProductLaplace: {
      double s = 0.0;
      for (int k = 0; k < d_; ++k) s += std::fabs(x[k] - mean_[k]) / scales_[k];
      return std::log(max_value_) - s;
    }
    case Family::Generic:
      return phi_(x);
  }
  return kNegInf;
}

double LogConcaveDensity::eval(const Vec& x) const {
  double p = potential(x);
  return p == kNegInf ? 0.0 : std::exp(p);
}

std::optional<ConvexBody> LogConcaveDensity::level_set(double y) const {
  if (!(y > 0.0)) throw ConfigError("level_set: level must be positive");
  if (y > max_value_) return std::nullopt;
  const double c = std::log(max_value_ / y);  // >= 0

  // For the strictly unimodal families the superlevel set at the maximum is
  // the mode alone; there is no full-dimensional body to return.
  if (c == 0.0 && family_ != Family::UniformConvex && family_ != Family::Generic)
    return std::nullopt;

  switch (family_) {
    case Family::Gaussian:
      // (x-mu)^T Sigma^{-1} (x-mu) <= 2 ln(M/y)
      return ConvexBody::ellipsoid(mean_, inv_cov_, 2.0 * c);

    case Family::UniformConvex:
      return *body_;

    case Family::ProductExponential: {
      // Simplex {x >= 0, sum rate_k x_k <= c}.
      std::vector<Halfspace> hs;
      for (int k = 0; k < d_; ++k) {
        Vec n(d_, 0.0);
        n[k] = -1.0;
        hs.push_back(Halfspace{std::move(n), 0.0});
      }
      hs.push_back(Halfspace::make(rates_, c));
      Polytope p = Polytope::from_halfspaces(std::move(hs));
      p.bounded = true;
      std::vector<Vec> vs{Vec(d_, 0.0)};
      for (int k = 0; k < d_; ++k) {
        Vec v(d_, 0.0);
        v[k] = c / rates_[k];
        vs.push_back(std::move(v));
      }
      p.vertices = std::move(vs);

      ConvexBody K;
      K.dimension = d_;
      K.box.lo.assign(d_, 0.0);
      K.box.hi.resize(d_);
      for (int k = 0; k < d_; ++k) K.box.hi[k] = c / rates_[k];
      double vol = 1.0;
      for (int k = 0; k < d_; ++k) vol *= c / rates_[k];
      for (int k = 2; k <= d_; ++k) vol /= k;
      K.exact_volume = vol;
      K.interior_point.resize(d_);
      for (int k = 0; k < d_; ++k) K.interior_point[k] = c / (2.0 * d_ * rates_[k]);
      Polytope stored = std::move(p);
      K.signed_slack = [stored](const Vec& x) { return stored.slack(x); };
      K.polytope_form = std::move(stored);
      return K;
    }

    case Family::ProductLaplace: {
      // Cross-polytope {sum |x_k - mu_k| / b_k <= c}.
      std::vector<Halfspace> hs;
      for (int mask = 0; mask < (1 << d_); ++mask) {
        Vec n(d_);
        double off = c;
        for (int k = 0; k < d_; ++k) {
          n[k] = ((mask >> k) & 1 ? 1.0 : -1.0) / scales_[k];
          off += n[k] * mean_[k];
        }
        hs.push_back(Halfspace::make(std::move(n), off));
      }
      Polytope p = Polytope::from_halfspaces(std::move(hs));
      p.bounded = true;
      std::vector<Vec> vs;
      for (int k = 0; k < d_; ++k)
        for (double s : {-1.0, 1.0}) {
          Vec v = mean_;
          v[k] += s * c * scales_[k];
          vs.push_back(std::move(v));
        }
      p.vertices = std::move(vs);

      ConvexBody K;
      K.dimension = d_;
      K.box.lo = mean_;
      K.box.hi = mean_;
      for (int k = 0; k < d_; ++k) {
        K.box.lo[k] -= c * scales_[k];
        K.box.hi[k] += c * scales_[k];
      }
      double vol = 1.0;
      for (int k = 0; k < d_; ++k) vol *= 2.0 * c * scales_[k];
      for (int k = 2; k <= d_; ++k) vol /= k;
      K.exact_volume = vol;
      K.interior_point = mean_;
      Polytope stored = std::move(p);
      K.signed_slack = [stored](const Vec& x) { return stored.slack(x); };
      K.polytope_form = std::move(stored);
      return K;
    }

    case Family::Generic: {
      ConvexBody K;
      K.dimension = d_;
      K.box = box_;
      K.interior_point = mode_;
      const double logy = std::log(y);
      auto phi = phi_;
      K.signed_slack = [phi, logy](const Vec& x) { return phi(x) - logy; };
      return K;
    }
  }
  return std::nullopt;
}

void LogConcaveDensity::sample_into(Rng& rng, std::vector<Vec>& out, std::size_t n) const {
  sample_with_stats(rng, out, n);
}

LogConcaveDensity::SampleStats LogConcaveDensity::sample_with_stats(Rng& rng,
                                                                    std::vector<Vec>& out,
                                                                    std::size_t n) const {
  SampleStats stats;
  out.reserve(out.size() + n);
  std::normal_distribution<double> gauss(0.0, 1.0);

  switch (family_) {
    case Family::Gaussian: {
      for (std::size_t i = 0; i < n; ++i) {
        Vec z(d_);
        for (double& v : z) v = gauss(rng);
        Vec x = mean_;
        for (int r = 0; r < d_; ++r)
          for (int k = 0; k <= r; ++k) x[r] += chol_.at(r, k) * z[k];
        out.push_back(std::move(x));
      }
      stats.proposals = stats.accepted = n;
      return stats;
    }
    case Family::UniformConvex: {
      const Box& bx = body_->box;
      // A box body needs no rejection at all.
      const bool is_box =
          body_->polytope_form && body_->polytope_form->facet_count() == 2 * d_ &&
          body_->exact_volume &&
          std::fabs(*body_->exact_volume - bx.volume()) <= 1e-12 * bx.volume();
      const std::size_t target = out.size() + n;
      const std::size_t cap = std::max<std::size_t>(65536, 64 * n);
      while (out.size() < target) {
        if (!is_box && stats.proposals > cap && stats.accepted * 10000 < stats.proposals)
          throw BudgetError("uniform-convex sampler: acceptance rate below 1e-4");
        Vec x(d_);
        for (int k = 0; k < d_; ++k) x[k] = bx.lo[k] + uniform01(rng) * (bx.hi[k] - bx.lo[k]);
        ++stats.proposals;
        if (is_box || body_->member(x)) {
          ++stats.accepted;
          out.push_back(std::move(x));
        }
      }
      return stats;
    }
    case Family::ProductExponential: {
      for (std::size_t i = 0; i < n; ++i) {
        Vec x(d_);
        for (int k = 0; k < d_; ++k) x[k] = -std::log1p(-uniform01(rng)) / rates_[k];
        out.push_back(std::move(x));
      }
      stats.proposals = stats.accepted = n;
      return stats;
    }
    case Family::ProductLaplace: {
      for (std::size_t i = 0; i < n; ++i) {
        Vec x(d_);
        for (int k = 0; k < d_; ++k) {
          double u = uniform01(rng) - 0.5;
          double mag = -std::log1p(-2.0 * std::fabs(u));
          x[k] = mean_[k] + (u < 0 ? -1.0 : 1.0) * scales_[k] * mag;
        }
        out.push_back(std::move(x));
      }
      stats.proposals = stats.accepted = n;
      return stats;
    }
    case Family::Generic:
      throw std::runtime_error("generic log-concave density has no exact sampler");
  }
  return stats;
}

std::optional<double> LogConcaveDensity::cdf1d(double x) const {
  if (d_ != 1) return std::nullopt;
  switch (family_) {
    case Family::Gaussian:
      return normal_cdf((x - mean_[0]) / std::sqrt(cov_.at(0, 0)));
    case Family::UniformConvex: {
      double lo = body_->box.lo[0], hi = body_->box.hi[0];
      return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
    }
    case Family::ProductExponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-rates_[0] * x);
    case Family::ProductLaplace: {
      double z = (x - mean_[0]) / scales_[0];
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case Family::Generic:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::vector<double>> LogConcaveDensity::breakpoints1d() const {
  if (d_ == 1 && family_ == Family::UniformConvex)
    return std::vector<double>{body_->box.lo[0], body_->box.hi[0]};
  return std::nullopt;
}

ContaminatedDensity::ContaminatedDensity(LogConcaveDensity base,
                                         std::shared_ptr<const Density> contaminant, double eta)
    : base_(std::move(base)), contaminant_(std::move(contaminant)), eta_(eta) {
  if (!contaminant_) throw ConfigError("contaminated density: null contaminant");
  if (contaminant_->dim() != base_.dim())
    throw ConfigError("contaminated density: dimension mismatch");
  if (!(eta >= 0.0 && eta < 1.0))
    throw ConfigError("contaminated density: weight must lie in [0, 1)");
}

double ContaminatedDensity::eval(const Vec& x) const {
  return (1.0 - eta_) * base_.eval(x) + eta_ * contaminant_->eval(x);
}

Box ContaminatedDensity::integration_box() const {
  return box_union(base_.integration_box(), contaminant_->integration_box());
}

bool ContaminatedDensity::has_sampler() const {
  return base_.has_sampler() && contaminant_->has_sampler();
}

void ContaminatedDensity::sample_into(Rng& rng, std::vector<Vec>& out, std::size_t n) const {
  for (std::size_t i = 0; i < n; ++i) {
    bool from_contaminant = uniform01(rng) < eta_;
    if (from_contaminant)
      contaminant_->sample_into(rng, out, 1);
    else
      base_.sample_into(rng, out, 1);
  }
}

std::optional<double> ContaminatedDensity::cdf1d(double x) const {
  auto fb = base_.cdf1d(x);
  auto fc = contaminant_->cdf1d(x);
  if (fb && fc) return (1.0 - eta_) * *fb + eta_ * *fc;
  return std::nullopt;
}

std::optional<std::vector<double>> ContaminatedDensity::breakpoints1d() const {
  auto bb = base_.breakpoints1d();
  auto bc = contaminant_->breakpoints1d();
  if (!bb && !bc) return std::nullopt;
  std::vector<double> b;
  if (bb) b.insert(b.end(), bb->begin(), bb->end());
  if (bc) b.insert(b.end(), bc->begin(), bc->end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace logcave
