#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logcave/common.hpp"
#include "logcave/geometry.hpp"
#include "logcave/linalg.hpp"
#include "logcave/rng.hpp"

namespace logcave {

// Anything that can be evaluated pointwise and integrated over a box.
// integration_box() must hold all but a negligible (<= ~1e-12) sliver of the
// mass; samplers are optional and exact (no MCMC anywhere).
class Density {
 public:
  virtual ~Density() = default;
  virtual int dim() const = 0;
  virtual double eval(const Vec& x) const = 0;
  virtual Box integration_box() const = 0;

  virtual bool has_sampler() const { return false; }
  virtual void sample_into(Rng&, std::vector<Vec>&, std::size_t) const {
    throw std::runtime_error("density has no exact sampler");
  }

  // One-dimensional extras used by the exact integration paths.
  virtual std::optional<double> cdf1d(double) const { return std::nullopt; }
  // Discontinuity locations on the line; integrators split their grids here.
  virtual std::optional<std::vector<double>> breakpoints1d() const { return std::nullopt; }
  // True when the density is a step function between its breakpoints, which
  // makes midpoint evaluation per gap exact.
  virtual bool step_function_1d() const { return false; }
};

std::vector<Vec> sample(const Density& f, std::uint64_t seed, std::size_t n);

enum class Family { Gaussian, UniformConvex, ProductExponential, ProductLaplace, Generic };

std::string family_name(Family f);

// Upper semi-continuous log-concave density f = exp(phi), phi concave. The
// four parametric families carry exact samplers, closed-form max values and
// convex level sets; Generic supports eval/level_set only.
class LogConcaveDensity : public Density {
 public:
  static LogConcaveDensity gaussian(Vec mean, Mat cov);
  static LogConcaveDensity uniform_on(ConvexBody K);  // K needs exact_volume
  static LogConcaveDensity product_exponential(Vec rates);
  static LogConcaveDensity product_laplace(Vec locations, Vec scales);
  // Caller supplies the mode and a support box; max_value is exp(phi(mode)).
  static LogConcaveDensity generic(int d, std::function<double(const Vec&)> phi, Vec mode,
                                   Box support_box);

  int dim() const override { return d_; }
  double eval(const Vec& x) const override;
  Box integration_box() const override { return box_; }
  bool has_sampler() const override { return family_ != Family::Generic; }
  void sample_into(Rng& rng, std::vector<Vec>& out, std::size_t n) const override;
  std::optional<double> cdf1d(double x) const override;
  std::optional<std::vector<double>> breakpoints1d() const override;
  bool step_function_1d() const override {
    return family_ == Family::UniformConvex && d_ == 1;
  }

  Family family() const { return family_; }
  double max_value() const { return max_value_; }
  const Vec& mode() const { return mode_; }
  double potential(const Vec& x) const;  // log f, -inf outside support

  // Superlevel set {x : f(x) >= y}. nullopt when y > max_value; a
  // zero-volume body when y == max_value for strictly log-concave families.
  std::optional<ConvexBody> level_set(double y) const;

  // Rejection sampling diagnostics (uniform-on-convex only): proposals used
  // by the most informative path. Returned alongside samples.
  struct SampleStats {
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    double acceptance_rate() const {
      return proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 1.0;
    }
  };
  SampleStats sample_with_stats(Rng& rng, std::vector<Vec>& out, std::size_t n) const;

  // Family parameters (populated per family; used by serialization).
  const Vec& param_mean() const { return mean_; }
  const Mat& param_cov() const { return cov_; }
  const Vec& param_rates() const { return rates_; }
  const Vec& param_scales() const { return scales_; }
  const std::optional<ConvexBody>& param_body() const { return body_; }

 private:
  LogConcaveDensity() = default;

  Family family_ = Family::Generic;
  int d_ = 0;
  double max_value_ = 0.0;
  Vec mode_;
  Box box_;

  // Gaussian
  Vec mean_;
  Mat cov_, inv_cov_, chol_;
  double det_cov_ = 0.0;
  // Uniform
  std::optional<ConvexBody> body_;
  // Product families (rates for exponential; locations=mean_, scales for Laplace)
  Vec rates_, scales_;
  // Generic
  std::function<double(const Vec&)> phi_;
};

// (1-eta) * base + eta * contaminant; the adversarial-noise model. Not
// log-concave in general, which is the point.
class ContaminatedDensity : public Density {
 public:
  ContaminatedDensity(LogConcaveDensity base, std::shared_ptr<const Density> contaminant,
                      double eta);

  int dim() const override { return base_.dim(); }
  double eval(const Vec& x) const override;
  Box integration_box() const override;
  bool has_sampler() const override;
  void sample_into(Rng& rng, std::vector<Vec>& out, std::size_t n) const override;
  std::optional<double> cdf1d(double x) const override;
  std::optional<std::vector<double>> breakpoints1d() const override;
  bool step_function_1d() const override {
    return base_.step_function_1d() && contaminant_->step_function_1d();
  }

  const LogConcaveDensity& base() const { return base_; }
  const Density& contaminant() const { return *contaminant_; }
  double weight() const { return eta_; }

 private:
  LogConcaveDensity base_;
  std::shared_ptr<const Density> contaminant_;
  double eta_;
};

}  // namespace logcave
