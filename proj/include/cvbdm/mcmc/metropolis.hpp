#ifndef CVBDM_MCMC_METROPOLIS_HPP
#define CVBDM_MCMC_METROPOLIS_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/chain.hpp"
#include "cvbdm/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvbdm::mcmc {

namespace detail {

/// Lower Cholesky factor of a dense symmetric positive-definite d x d matrix
/// (row-major). Returns false if the matrix is not numerically PD.
inline bool cholesky(std::vector<double>& a, std::size_t d) {
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a[j * d + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
    if (!(diag > 0.0)) return false;
    diag = std::sqrt(diag);
    a[j * d + j] = diag;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
      a[i * d + j] = v / diag;
    }
    for (std::size_t k = j + 1; k < d; ++k) a[j * d + k] = 0.0;
  }
  return true;
}

/// Running mean and covariance (Welford).
class RunningCovariance {
 public:
  explicit RunningCovariance(std::size_t d) : d_(d), mean_(d, 0.0), m2_(d * d, 0.0) {}

  void push(std::span<const double> x) {
    ++count_;
    std::vector<double> delta(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      delta[i] = x[i] - mean_[i];
      mean_[i] += delta[i] / static_cast<double>(count_);
    }
    for (std::size_t i = 0; i < d_; ++i) {
      for (std::size_t j = 0; j < d_; ++j) m2_[i * d_ + j] += delta[i] * (x[j] - mean_[j]);
    }
  }

  std::size_t count() const noexcept { return count_; }

  std::vector<double> covariance() const {
    std::vector<double> c(m2_);
    for (double& v : c) v /= static_cast<double>(count_ - 1);
    return c;
  }

  void reset() {
    count_ = 0;
    std::fill(mean_.begin(), mean_.end(), 0.0);
    std::fill(m2_.begin(), m2_.end(), 0.0);
  }

 private:
  std::size_t d_;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace detail

/// Called once per iteration with the iteration index and the proposal
/// scales in force for that iteration.
using ScaleObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Random-walk Metropolis with a multivariate Normal proposal.
///
/// During burn-in (when config.adapt is set) a global scale is tuned by
/// Robbins-Monro toward config.target_acceptance, and at each quarter of the
/// burn-in the proposal shape is re-estimated from the draws of the preceding
/// quarter as (2.38^2/d) times their covariance. The kernel is frozen from
/// the first post-burn-in iteration on. Deterministic per seed.
template <typename LogDensity>
std::pair<DrawMatrix, ChainReport> rw_metropolis(LogDensity&& log_density,
                                                 const SamplerConfig& config, std::uint64_t seed,
                                                 std::vector<std::string> names = {},
                                                 const ScaleObserver& observer = {}) {
  const std::size_t d = config.initial_point.size();
  if (d == 0) throw InputError("rw_metropolis: empty initial point");
  config.validate(d);

  std::vector<double> x = config.initial_point;
  double lp = log_density(std::span<const double>(x));
  if (!std::isfinite(lp)) {
    throw InputError("rw_metropolis: log density is not finite at the initial point");
  }

  // Proposal: x + exp(log_scale) * L z
  std::vector<double> chol(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const double s = config.step_scales.empty() ? 0.1 : config.step_scales[j];
    chol[j * d + j] = s;
  }
  double log_scale = 0.0;

  auto current_scales = [&] {
    std::vector<double> s(d);
    const double g = std::exp(log_scale);
    for (std::size_t i = 0; i < d; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k <= i; ++k) v += chol[i * d + k] * chol[i * d + k];
      s[i] = g * std::sqrt(v);
    }
    return s;
  };

  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> unif{0.0, 1.0};

  DrawMatrix draws(d, std::move(names));
  draws.reserve(config.retained());
  detail::RunningCovariance window(d);
  const std::size_t quarter = config.burn_in / 4;
  const bool reshape = config.adapt && quarter >= std::max<std::size_t>(200, 20 * d);

  std::vector<double> z(d);
  std::vector<double> proposal(d);
  std::vector<double> frozen_scales;
  std::size_t accepted_after_burn_in = 0;
  std::size_t since_reshape = 0;
  std::size_t window_accepts = 0;

  for (std::size_t t = 0; t < config.n_iterations; ++t) {
    const bool burning = t < config.burn_in;
    if (observer) observer(t, current_scales());

    const double g = std::exp(log_scale);
    for (std::size_t i = 0; i < d; ++i) z[i] = normal(rng);
    for (std::size_t i = 0; i < d; ++i) {
      double step = 0.0;
      for (std::size_t k = 0; k <= i; ++k) step += chol[i * d + k] * z[k];
      proposal[i] = x[i] + g * step;
    }
    const double lp_new = log_density(std::span<const double>(proposal));
    const double log_ratio = lp_new - lp;
    const double accept_prob = std::isnan(log_ratio) ? 0.0 : std::min(1.0, std::exp(log_ratio));
    const bool accept = unif(rng) < accept_prob;
    if (accept) {
      x.swap(proposal);
      lp = lp_new;
      if (!burning) ++accepted_after_burn_in;
      ++window_accepts;
    }

    if (burning && config.adapt) {
      const double gain = 1.0 / std::pow(static_cast<double>(++since_reshape), 0.6);
      log_scale += gain * (accept_prob - config.target_acceptance);
      log_scale = std::clamp(log_scale, -30.0, 30.0);
      if (reshape) {
        window.push(x);
        if ((t + 1) % quarter == 0 && (t + 1) / quarter <= 3) {
          std::vector<double> cov = window.covariance();
          const double factor = 2.38 * 2.38 / static_cast<double>(d);
          for (std::size_t i = 0; i < d; ++i) {
            cov[i * d + i] += 1e-10 + 1e-6 * cov[i * d + i];
          }
          for (double& v : cov) v *= factor;
          // A window with too few moves says nothing about posterior shape.
          if (window_accepts >= 20 * d && detail::cholesky(cov, d)) {
            chol = std::move(cov);
            log_scale = 0.0;
            since_reshape = 0;
          }
          window.reset();
          window_accepts = 0;
        }
      }
    }
    if (t + 1 == config.burn_in) frozen_scales = current_scales();

    if (!burning && (t - config.burn_in + 1) % config.thin == 0) draws.push_row(x);
  }

  ChainReport report;
  report.acceptance_rate = static_cast<double>(accepted_after_burn_in) /
                           static_cast<double>(config.n_iterations - config.burn_in);
  report.final_step_scales = frozen_scales.empty() ? current_scales() : frozen_scales;
  fill_diagnostics(report, draws);
  report.converged = convergence_gate(report);
  return {std::move(draws), std::move(report)};
}

}  // namespace cvbdm::mcmc

#endif  // CVBDM_MCMC_METROPOLIS_HPP
