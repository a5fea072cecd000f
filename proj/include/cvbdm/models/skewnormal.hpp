#ifndef CVBDM_MODELS_SKEWNORMAL_HPP
#define CVBDM_MODELS_SKEWNORMAL_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/sample.hpp"
#include "cvbdm/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace cvbdm::skewnormal {

struct SkewNormalDraw {
  double mu = 0.0;
  double sigma = 1.0;
  double lambda = 0.0;
  /// Half-normal augmentation variables of the Gibbs sampler, if retained.
  std::vector<double> latent;
};

/// Shape prior: generalized Student-t with location 0, scale pi/2 and 1/2
/// degrees of freedom,
///   g0(l) = sqrt(s/v) / B(v/2, 1/2) * (1 + s (l - m)^2 / v)^{-(v+1)/2}.
struct ShapePrior {
  double location = 0.0;
  double scale = std::numbers::pi / 2.0;
  double dof = 0.5;
};

inline double log_shape_prior(double lambda, const ShapePrior& p = {}) noexcept {
  const double dev = lambda - p.location;
  return -special::log_beta(0.5 * p.dof, 0.5) + 0.5 * std::log(p.scale / p.dof) -
         0.5 * (p.dof + 1.0) * std::log1p(p.scale * dev * dev / p.dof);
}

inline double d_log_shape_prior(double lambda, const ShapePrior& p = {}) noexcept {
  const double dev = lambda - p.location;
  return -(p.dof + 1.0) * p.scale * dev / (p.dof + p.scale * dev * dev);
}

inline void require_skewnormal_data(const Sample& sample) {
  if (!sample.has_values()) {
    throw InputError("skewnormal model: raw observations are required");
  }
  if (sample.n() < 3) throw InputError("skewnormal model: need at least 3 observations");
}

/// Unnormalized log posterior under the prior g0(lambda)/sigma:
///   -(n+1) log sigma + log g0(lambda) + sum [log phi(z_i) + log Phi(lambda z_i)],
/// z_i = (x_i - mu)/sigma.
inline double skewnormal_log_posterior(double mu, double sigma, double lambda,
                                       std::span<const double> x,
                                       const ShapePrior& prior = {}) noexcept {
  if (!(sigma > 0.0)) return -INFINITY;
  const double n = static_cast<double>(x.size());
  double acc = -(n + 1.0) * std::log(sigma) + log_shape_prior(lambda, prior);
  for (double xi : x) {
    const double z = (xi - mu) / sigma;
    acc += special::log_std_normal_pdf(z) + special::log_std_normal_cdf(lambda * z);
  }
  return acc;
}

inline double skewnormal_log_posterior(const SkewNormalDraw& draw, const Sample& sample) {
  require_skewnormal_data(sample);
  return skewnormal_log_posterior(draw.mu, draw.sigma, draw.lambda, sample.values());
}

/// Gradient of skewnormal_log_posterior with respect to (mu, sigma, lambda).
inline std::array<double, 3> skewnormal_log_posterior_gradient(
    double mu, double sigma, double lambda, std::span<const double> x,
    const ShapePrior& prior = {}) noexcept {
  const double n = static_cast<double>(x.size());
  double d_mu = 0.0;
  double d_sigma = -(n + 1.0) / sigma;
  double d_lambda = d_log_shape_prior(lambda, prior);
  for (double xi : x) {
    const double z = (xi - mu) / sigma;
    const double mills = special::d_log_std_normal_cdf(lambda * z);
    // dz/dmu = -1/sigma, dz/dsigma = -z/sigma
    const double d_z = -z + lambda * mills;
    d_mu += -d_z / sigma;
    d_sigma += -d_z * z / sigma;
    d_lambda += z * mills;
  }
  return {d_mu, d_sigma, d_lambda};
}

/// delta = lambda / sqrt(lambda^2 + 1).
inline double skewness_delta(double lambda) noexcept {
  return lambda / std::hypot(lambda, 1.0);
}

/// E(X) = mu + sigma delta sqrt(2/pi).
inline double skewnormal_mean(double mu, double sigma, double lambda) noexcept {
  return mu + sigma * skewness_delta(lambda) * std::sqrt(2.0 / std::numbers::pi);
}

/// CV = sqrt(sigma^2 (1 - 2 delta^2/pi)) / |mu + sigma delta sqrt(2/pi)|.
inline double cv_skewnormal(double mu, double sigma, double lambda) {
  const double mean = skewnormal_mean(mu, sigma, lambda);
  if (mean == 0.0) throw UndefinedError("cv_skewnormal: mean is zero, CV undefined");
  const double delta = skewness_delta(lambda);
  return std::sqrt(sigma * sigma * (1.0 - 2.0 * delta * delta / std::numbers::pi)) /
         std::abs(mean);
}

inline double cv_skewnormal(const SkewNormalDraw& draw) {
  return cv_skewnormal(draw.mu, draw.sigma, draw.lambda);
}

}  // namespace cvbdm::skewnormal

#endif  // CVBDM_MODELS_SKEWNORMAL_HPP
