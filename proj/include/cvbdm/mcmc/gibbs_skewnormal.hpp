#ifndef CVBDM_MCMC_GIBBS_SKEWNORMAL_HPP
#define CVBDM_MCMC_GIBBS_SKEWNORMAL_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/chain.hpp"
#include "cvbdm/models/skewnormal.hpp"
#include "cvbdm/random.hpp"
#include "cvbdm/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace cvbdm::mcmc {

/// Gibbs sampler for the Skew-Normal posterior with half-normal data
/// augmentation: x_i = mu + sigma delta t_i + sigma sqrt(1 - delta^2) e_i,
/// t_i ~ N+(0, 1).
///
/// One sweep:
///   1. log sigma: random-walk Metropolis on p(sigma | mu, lambda, x)
///      (latents integrated out),
///   2. lambda: random-walk Metropolis on p(lambda | mu, sigma, x),
///   3. t_i | mu, sigma, lambda, x ~ N+(delta z_i, 1 - delta^2),
///   4. mu | t, sigma, lambda, x ~ N(mean(x - sigma delta t), sigma^2 (1 - delta^2) / n).
/// Steps 1-3 jointly update (sigma, lambda, t) given mu, so the latents
/// only enter through the exact Normal draw of mu.
///
/// config.initial_point is (mu, sigma, lambda); when empty it defaults to
/// (mean, sd, 0). step_scales are (log sigma, lambda) proposal sds and are
/// tuned by Robbins-Monro during burn-in when config.adapt is set.
inline std::pair<DrawMatrix, ChainReport> gibbs_skewnormal(const Sample& sample,
                                                           SamplerConfig config,
                                                           std::uint64_t seed) {
  skewnormal::require_skewnormal_data(sample);
  const auto x = sample.values();
  const double n = static_cast<double>(x.size());
  if (config.initial_point.empty()) {
    config.initial_point = {sample.mean(), std::max(sample.sd(), 1e-8), 0.0};
  }
  if (config.initial_point.size() != 3) {
    throw InputError("gibbs_skewnormal: initial point must be (mu, sigma, lambda)");
  }
  std::vector<double> scales = config.step_scales;
  config.step_scales.clear();
  config.validate(3);
  if (scales.empty()) scales = {1.0 / std::sqrt(n), 0.5};
  if (scales.size() != 2 || !(scales[0] > 0.0) || !(scales[1] > 0.0)) {
    throw InputError("gibbs_skewnormal: step_scales must be two positive (log sigma, lambda) sds");
  }

  double mu = config.initial_point[0];
  double sigma = config.initial_point[1];
  double lambda = config.initial_point[2];
  if (!(sigma > 0.0)) throw InputError("gibbs_skewnormal: initial sigma must be positive");

  auto log_post = [&](double m, double s, double l) {
    return skewnormal::skewnormal_log_posterior(m, s, l, x);
  };
  double lp = log_post(mu, sigma, lambda);
  if (!std::isfinite(lp)) throw InputError("gibbs_skewnormal: initial point has zero density");

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  DrawMatrix draws(3, {"mu", "sigma", "lambda"});
  draws.reserve(config.retained());
  std::vector<double> latent(x.size(), 0.0);
  double log_scale_sigma = std::log(scales[0]);
  double log_scale_lambda = std::log(scales[1]);
  std::size_t accepted = 0;
  std::vector<double> frozen;

  for (std::size_t t = 0; t < config.n_iterations; ++t) {
    const bool burning = t < config.burn_in;
    const double gain = 1.0 / std::pow(static_cast<double>(t) + 1.0, 0.6);

    // 1. sigma on the log scale; the Jacobian adds log sigma.
    {
      const double sigma_new = sigma * std::exp(std::exp(log_scale_sigma) * normal(rng));
      const double lp_new = log_post(mu, sigma_new, lambda);
      const double log_ratio = (lp_new + std::log(sigma_new)) - (lp + std::log(sigma));
      const double a = std::isnan(log_ratio) ? 0.0 : std::min(1.0, std::exp(log_ratio));
      if (unif(rng) < a) {
        sigma = sigma_new;
        lp = lp_new;
        if (!burning) ++accepted;
      }
      if (burning && config.adapt) {
        log_scale_sigma = std::clamp(log_scale_sigma + gain * (a - config.target_acceptance), -30.0, 5.0);
      }
    }
    // 2. lambda
    {
      const double lambda_new = lambda + std::exp(log_scale_lambda) * normal(rng);
      const double lp_new = log_post(mu, sigma, lambda_new);
      const double log_ratio = lp_new - lp;
      const double a = std::isnan(log_ratio) ? 0.0 : std::min(1.0, std::exp(log_ratio));
      if (unif(rng) < a) {
        lambda = lambda_new;
        lp = lp_new;
        if (!burning) ++accepted;
      }
      if (burning && config.adapt) {
        log_scale_lambda = std::clamp(log_scale_lambda + gain * (a - config.target_acceptance), -30.0, 10.0);
      }
    }
    // 3. latents
    const double delta = skewnormal::skewness_delta(lambda);
    const double resid_sd = std::sqrt(std::max(1.0 - delta * delta, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double z = (x[i] - mu) / sigma;
      latent[i] = resid_sd > 0.0 ? positive_truncated_normal(rng, delta * z, resid_sd)
                                 : std::max(delta * z, 0.0);
    }
    // 4. mu given latents
    if (resid_sd > 0.0) {
      double centre = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) centre += x[i] - sigma * delta * latent[i];
      centre /= n;
      mu = centre + sigma * resid_sd / std::sqrt(n) * normal(rng);
      lp = log_post(mu, sigma, lambda);
    }

    if (t + 1 == config.burn_in) frozen = {std::exp(log_scale_sigma), std::exp(log_scale_lambda)};
    if (!burning && (t - config.burn_in + 1) % config.thin == 0) {
      const double row[3] = {mu, sigma, lambda};
      draws.push_row(row);
    }
  }

  ChainReport report;
  report.acceptance_rate = static_cast<double>(accepted) /
                           (2.0 * static_cast<double>(config.n_iterations - config.burn_in));
  report.final_step_scales =
      frozen.empty() ? std::vector<double>{std::exp(log_scale_sigma), std::exp(log_scale_lambda)}
                     : frozen;
  fill_diagnostics(report, draws);
  report.converged = convergence_gate(report);
  return {std::move(draws), std::move(report)};
}

}  // namespace cvbdm::mcmc

#endif  // CVBDM_MCMC_GIBBS_SKEWNORMAL_HPP
