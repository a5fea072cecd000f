#ifndef CVBDM_MODELS_HPP
#define CVBDM_MODELS_HPP

#include "cvbdm/bdm.hpp"
#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/chain.hpp"
#include "cvbdm/mcmc/gibbs_skewnormal.hpp"
#include "cvbdm/mcmc/metropolis.hpp"
#include "cvbdm/models/invgauss.hpp"
#include "cvbdm/models/model_kind.hpp"
#include "cvbdm/models/negbin.hpp"
#include "cvbdm/models/normal.hpp"
#include "cvbdm/models/skewnormal.hpp"
#include "cvbdm/sample.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvbdm {

/// Run sizes per model. The MCMC defaults follow the chain lengths of the
/// worked examples: inverse Gaussian 2e5 iterations (burn-in 1e4, thin 5),
/// Skew-Normal 6e5 thinned to 3e4, Negative Binomial 1.3e5 with 3e4 burn-in.
inline mcmc::SamplerConfig default_sampler_config(ModelKind model) {
  mcmc::SamplerConfig c;
  switch (model) {
    case ModelKind::normal:
      break;
    case ModelKind::invgauss:
      c.n_iterations = 200000;
      c.burn_in = 10000;
      c.thin = 5;
      break;
    case ModelKind::skewnormal:
      c.n_iterations = 600000;
      c.burn_in = 60000;
      c.thin = 18;
      break;
    case ModelKind::negbin:
      c.n_iterations = 130000;
      c.burn_in = 30000;
      c.thin = 1;
      break;
  }
  return c;
}

inline constexpr std::size_t kDefaultNormalDraws = 100000;
/// Rejected-draw fraction above which cv_draws records a warning.
inline constexpr double kRejectionWarnFraction = 1e-3;

struct CvRequest {
  /// Conjugate draws for the Normal model.
  std::size_t n_draws = kDefaultNormalDraws;
  /// MCMC settings for the other models; defaults per model when absent.
  /// An empty initial point or empty step scales are filled from the data.
  std::optional<mcmc::SamplerConfig> sampler;
};

struct CvDrawResult {
  ScalarDraws draws;
  /// Parameter draws on their natural scale (MCMC models only).
  std::optional<mcmc::DrawMatrix> parameters;
  std::optional<mcmc::ChainReport> chain;
  std::size_t n_rejected = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline void note_rejections(CvDrawResult& result, std::size_t total) {
  if (total == 0) return;
  const double fraction = static_cast<double>(result.n_rejected) / static_cast<double>(total);
  if (fraction > kRejectionWarnFraction) {
    result.warnings.push_back("rejected " + std::to_string(result.n_rejected) + " of " +
                              std::to_string(total) +
                              " draws with undefined CV (mean at zero); the CV comparison may be ill-posed");
  }
}

inline ScalarDraws require_draws(std::vector<double> cvs) {
  if (cvs.empty()) throw UndefinedError("cv_draws: every draw had an undefined CV");
  return ScalarDraws{std::move(cvs)};
}

/// Converts log-scale chain coordinates back to the natural scale and
/// recomputes diagnostics there.
inline void exponentiate_columns(mcmc::DrawMatrix& draws, mcmc::ChainReport& report,
                                 std::vector<std::string> names) {
  mcmc::DrawMatrix natural(draws.cols(), std::move(names));
  natural.reserve(draws.rows());
  std::vector<double> row(draws.cols());
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    const auto r = draws.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) row[j] = std::exp(r[j]);
    natural.push_row(row);
  }
  draws = std::move(natural);
  mcmc::fill_diagnostics(report, draws);
  report.converged = mcmc::convergence_gate(report);
}

inline mcmc::SamplerConfig resolve_config(ModelKind model, const CvRequest& request) {
  return request.sampler ? *request.sampler : default_sampler_config(model);
}

}  // namespace detail

inline CvDrawResult normal_cv_draws(const Sample& sample, std::size_t n_draws,
                                    std::uint64_t seed) {
  const auto params = normal::normal_posterior_params(sample);
  const auto draws = normal::sample_normal_gamma(params, n_draws, seed);
  std::vector<double> cvs;
  cvs.reserve(draws.size());
  std::size_t rejected = 0;
  for (const auto& d : draws) {
    if (d.mu == 0.0) {
      ++rejected;
      continue;
    }
    cvs.push_back(normal::cv_normal(d));
  }
  CvDrawResult result{detail::require_draws(std::move(cvs)), std::nullopt, std::nullopt, rejected, {}};
  detail::note_rejections(result, draws.size());
  return result;
}

inline CvDrawResult invgauss_cv_draws(const Sample& sample, mcmc::SamplerConfig config,
                                      std::uint64_t seed) {
  const auto stats = invgauss::invgauss_stats(sample);
  const double excess = stats.inv_harmonic - 1.0 / stats.mean;
  if (!(excess > 0.0)) throw InputError("invgauss model: data have no spread (degenerate)");
  if (config.initial_point.empty()) {
    config.initial_point = {std::log(stats.mean), std::log(1.0 / excess)};
  }
  if (config.step_scales.empty()) {
    const double cv2 = stats.mean * excess;
    config.step_scales = {std::sqrt(cv2 / stats.n) + 1e-3, std::sqrt(2.0 / stats.n)};
  }
  auto target = [&stats](std::span<const double> theta) {
    const invgauss::InvGaussDraw d{std::exp(theta[0]), std::exp(theta[1])};
    return invgauss::invgauss_log_posterior(d, stats) + theta[0] + theta[1];
  };
  auto [draws, report] = mcmc::rw_metropolis(target, config, seed, {"log_mu", "log_lambda"});
  detail::exponentiate_columns(draws, report, {"mu", "lambda"});
  std::vector<double> cvs(draws.rows());
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    cvs[i] = invgauss::cv_invgauss({draws(i, 0), draws(i, 1)});
  }
  return {detail::require_draws(std::move(cvs)), std::move(draws), std::move(report), 0, {}};
}

inline CvDrawResult skewnormal_cv_draws(const Sample& sample, const mcmc::SamplerConfig& config,
                                        std::uint64_t seed) {
  auto [draws, report] = mcmc::gibbs_skewnormal(sample, config, seed);
  std::vector<double> cvs;
  cvs.reserve(draws.rows());
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    if (skewnormal::skewnormal_mean(draws(i, 0), draws(i, 1), draws(i, 2)) == 0.0) {
      ++rejected;
      continue;
    }
    cvs.push_back(skewnormal::cv_skewnormal(draws(i, 0), draws(i, 1), draws(i, 2)));
  }
  const std::size_t total = draws.rows();
  CvDrawResult result{detail::require_draws(std::move(cvs)), std::move(draws), std::move(report),
                      rejected, {}};
  detail::note_rejections(result, total);
  return result;
}

inline CvDrawResult negbin_cv_draws(const Sample& sample, mcmc::SamplerConfig config,
                                    std::uint64_t seed) {
  const auto stats = negbin::negbin_stats(sample);
  if (!(stats.mean > 0.0)) throw InputError("negbin model: all counts are zero (degenerate)");
  if (config.initial_point.empty()) {
    // Method of moments, with an over-dispersion floor so alpha stays finite.
    const double var = sample.sd() * sample.sd();
    const double excess = std::max(var - stats.mean, 0.05 * stats.mean);
    const double alpha = stats.mean * stats.mean / excess;
    config.initial_point = {std::log(alpha), std::log(alpha / stats.mean)};
  }
  if (config.step_scales.empty()) {
    config.step_scales = {std::sqrt(4.0 / stats.n), std::sqrt(4.0 / stats.n)};
  }
  auto target = [&stats](std::span<const double> theta) {
    const negbin::NegBinDraw d{std::exp(theta[0]), std::exp(theta[1])};
    return negbin::negbin_log_posterior(d, stats) + theta[0] + theta[1];
  };
  auto [draws, report] = mcmc::rw_metropolis(target, config, seed, {"log_alpha", "log_beta"});
  detail::exponentiate_columns(draws, report, {"alpha", "beta"});
  std::vector<double> cvs(draws.rows());
  for (std::size_t i = 0; i < draws.rows(); ++i) {
    cvs[i] = negbin::cv_negbin({draws(i, 0), draws(i, 1)});
  }
  return {detail::require_draws(std::move(cvs)), std::move(draws), std::move(report), 0, {}};
}

/// Posterior CV draws for one population under `model`.
inline CvDrawResult cv_draws(ModelKind model, const Sample& sample, const CvRequest& request,
                             std::uint64_t seed) {
  switch (model) {
    case ModelKind::normal:
      return normal_cv_draws(sample, request.n_draws, seed);
    case ModelKind::invgauss:
      return invgauss_cv_draws(sample, detail::resolve_config(model, request), seed);
    case ModelKind::skewnormal:
      return skewnormal_cv_draws(sample, detail::resolve_config(model, request), seed);
    case ModelKind::negbin:
      return negbin_cv_draws(sample, detail::resolve_config(model, request), seed);
  }
  throw InputError("cv_draws: unknown model");
}

}  // namespace cvbdm

#endif  // CVBDM_MODELS_HPP
