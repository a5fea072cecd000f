#ifndef CVBDM_MODELS_NORMAL_HPP
#define CVBDM_MODELS_NORMAL_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/random.hpp"
#include "cvbdm/sample.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace cvbdm::normal {

/// Normal-Gamma(eta, nu, alpha, beta): phi ~ Gamma(alpha, rate beta),
/// mu | phi ~ N(eta, 1/(nu phi)).
struct NormalGammaParams {
  double eta = 0.0;
  double nu = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Mean and precision of a Normal population.
struct NormalDraw {
  double mu = 0.0;
  double phi = 1.0;
};

/// Posterior under the Jeffreys prior 1/phi: (x_bar, n, (n-1)/2, n s^2 / 2).
inline NormalGammaParams normal_posterior_params(const Sample& sample) {
  if (!(sample.sd() > 0.0)) {
    throw InputError("normal model: sample standard deviation is zero (degenerate data)");
  }
  const double n = static_cast<double>(sample.n());
  return {sample.mean(), n, 0.5 * (n - 1.0), 0.5 * n * sample.sd() * sample.sd()};
}

inline std::vector<NormalDraw> sample_normal_gamma(const NormalGammaParams& params,
                                                   std::size_t n_draws, std::uint64_t seed) {
  if (!(params.nu > 0.0 && params.alpha > 0.0 && params.beta > 0.0)) {
    throw InputError("sample_normal_gamma: nu, alpha, beta must be positive");
  }
  if (n_draws == 0) throw InputError("sample_normal_gamma: n_draws must be >= 1");
  Rng rng = make_rng(seed);
  std::gamma_distribution<double> precision{params.alpha, 1.0 / params.beta};
  std::normal_distribution<double> z{0.0, 1.0};
  std::vector<NormalDraw> draws(n_draws);
  for (auto& d : draws) {
    d.phi = precision(rng);
    d.mu = params.eta + z(rng) / std::sqrt(params.nu * d.phi);
  }
  return draws;
}

/// CV = 1 / (|mu| sqrt(phi)).
inline double cv_normal(const NormalDraw& draw) {
  if (draw.mu == 0.0) throw UndefinedError("cv_normal: mean is zero, CV undefined");
  return 1.0 / (std::abs(draw.mu) * std::sqrt(draw.phi));
}

/// Unnormalized log Normal-Gamma density at (mu, phi).
inline double normal_log_posterior(const NormalDraw& draw, const NormalGammaParams& params) {
  if (!(draw.phi > 0.0)) return -INFINITY;
  const double dev = draw.mu - params.eta;
  return (params.alpha - 0.5) * std::log(draw.phi) - params.beta * draw.phi -
         0.5 * params.nu * draw.phi * dev * dev;
}

}  // namespace cvbdm::normal

#endif  // CVBDM_MODELS_NORMAL_HPP
