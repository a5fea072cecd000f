#ifndef CVBDM_MODELS_INVGAUSS_HPP
#define CVBDM_MODELS_INVGAUSS_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/sample.hpp"

#include <array>
#include <cmath>
#include <string>

namespace cvbdm::invgauss {

struct InvGaussDraw {
  double mu = 1.0;
  double lambda = 1.0;
};

/// Sufficient statistics (n, x_bar, 1/a) of an all-positive sample, where a
/// is the harmonic mean.
struct InvGaussStats {
  double n = 0.0;
  double mean = 0.0;
  double inv_harmonic = 0.0;
};

inline InvGaussStats invgauss_stats(const Sample& sample) {
  if (sample.has_values()) {
    for (double v : sample.values()) {
      if (!(v > 0.0)) {
        throw InputError("invgauss model: data must be strictly positive, got " +
                         std::to_string(v));
      }
    }
  }
  if (!sample.harmonic_mean()) {
    throw InputError("invgauss model: harmonic mean unavailable (data must be positive)");
  }
  return {static_cast<double>(sample.n()), sample.mean(), 1.0 / *sample.harmonic_mean()};
}

/// x_bar/mu^2 - 2/mu + 1/a, i.e. (1/n) sum (x - mu)^2 / (mu^2 x) >= 0.
inline double deviance_term(const InvGaussStats& s, double mu) noexcept {
  return s.mean / (mu * mu) - 2.0 / mu + s.inv_harmonic;
}

/// Unnormalized log posterior under the Jeffreys prior (mu^3 lambda)^{-1/2}:
///   ((n-1)/2) log lambda - (3/2) log mu - (n lambda / 2) (x_bar/mu^2 - 2/mu + 1/a).
inline double invgauss_log_posterior(const InvGaussDraw& draw, const InvGaussStats& s) noexcept {
  if (!(draw.mu > 0.0 && draw.lambda > 0.0)) return -INFINITY;
  return 0.5 * (s.n - 1.0) * std::log(draw.lambda) - 1.5 * std::log(draw.mu) -
         0.5 * s.n * draw.lambda * deviance_term(s, draw.mu);
}

inline double invgauss_log_posterior(const InvGaussDraw& draw, const Sample& sample) {
  return invgauss_log_posterior(draw, invgauss_stats(sample));
}

/// Gradient of invgauss_log_posterior with respect to (mu, lambda).
inline std::array<double, 2> invgauss_log_posterior_gradient(const InvGaussDraw& draw,
                                                             const InvGaussStats& s) noexcept {
  const double mu = draw.mu;
  const double d_mu = -1.5 / mu - 0.5 * s.n * draw.lambda *
                                      (-2.0 * s.mean / (mu * mu * mu) + 2.0 / (mu * mu));
  const double d_lambda = 0.5 * (s.n - 1.0) / draw.lambda - 0.5 * s.n * deviance_term(s, mu);
  return {d_mu, d_lambda};
}

/// CV = sqrt(mu / lambda); the skewness of the family is three times this.
inline double cv_invgauss(const InvGaussDraw& draw) noexcept {
  return std::sqrt(draw.mu / draw.lambda);
}

}  // namespace cvbdm::invgauss

#endif  // CVBDM_MODELS_INVGAUSS_HPP
