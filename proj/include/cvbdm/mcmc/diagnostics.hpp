#ifndef CVBDM_MCMC_DIAGNOSTICS_HPP
#define CVBDM_MCMC_DIAGNOSTICS_HPP

#include "cvbdm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cvbdm::mcmc {

inline constexpr std::size_t kMinDiagnosticDraws = 100;
/// ESS may exceed the chain length only by this factor (antithetic chains).
inline constexpr double kEssSlack = 1.05;

namespace detail {

inline double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Biased (divide-by-n) autocovariance at `lag` around `mean`.
inline double autocovariance(std::span<const double> x, double mean, std::size_t lag) {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
  return s / static_cast<double>(n);
}

}  // namespace detail

/// Sample autocorrelations at lags 0..max_lag (rho[0] = 1). A constant chain
/// has rho = 1 at lag 0 and 0 elsewhere.
inline std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (x.empty()) throw InputError("autocorrelation: empty chain");
  max_lag = std::min(max_lag, x.size() - 1);
  const double mean = detail::mean_of(x);
  const double c0 = detail::autocovariance(x, mean, 0);
  std::vector<double> rho(max_lag + 1, 0.0);
  rho[0] = 1.0;
  if (!(c0 > 0.0)) return rho;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    rho[k] = std::clamp(detail::autocovariance(x, mean, k) / c0, -1.0, 1.0);
  }
  return rho;
}

/// Effective sample size n / (1 + 2 sum rho_k), summing Geyer's initial
/// positive sequence of paired autocorrelations rho_{2m} + rho_{2m+1} and
/// stopping at the first nonpositive pair. Capped at 1.05 n.
inline double effective_sample_size(std::span<const double> x) {
  if (x.size() < kMinDiagnosticDraws) {
    throw InputError("effective_sample_size: need at least 100 draws, got " +
                     std::to_string(x.size()));
  }
  const std::size_t n = x.size();
  const double mean = detail::mean_of(x);
  const double c0 = detail::autocovariance(x, mean, 0);
  if (!(c0 > 0.0)) throw UndefinedError("effective_sample_size: constant chain");

  // tau = -1 + 2 sum_m Gamma_m with Gamma_m = rho_{2m} + rho_{2m+1}, rho_0 = 1.
  double tau = -1.0;
  double previous_pair = INFINITY;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double r0 = m == 0 ? 1.0 : detail::autocovariance(x, mean, 2 * m) / c0;
    const double r1 = detail::autocovariance(x, mean, 2 * m + 1) / c0;
    double pair = r0 + r1;
    if (pair <= 0.0) break;
    pair = std::min(pair, previous_pair);  // initial monotone sequence
    tau += 2.0 * pair;
    previous_pair = pair;
  }
  const double nn = static_cast<double>(n);
  if (!(tau > 0.0)) return kEssSlack * nn;
  return std::min(nn / tau, kEssSlack * nn);
}

/// Geweke z-score comparing the means of the first 10% and last 50% of the
/// chain, each standardized by var / ESS (spectral variance at frequency 0).
inline double geweke_z(std::span<const double> x, double first = 0.1, double last = 0.5) {
  if (x.size() < kMinDiagnosticDraws) {
    throw InputError("geweke_z: need at least 100 draws");
  }
  const std::size_t n = x.size();
  const auto n_a = static_cast<std::size_t>(std::floor(first * static_cast<double>(n)));
  const auto n_b = static_cast<std::size_t>(std::floor(last * static_cast<double>(n)));
  const auto a = x.subspan(0, n_a);
  const auto b = x.subspan(n - n_b, n_b);

  auto mean_and_se2 = [](std::span<const double> seg) {
    const double m = detail::mean_of(seg);
    const double var = detail::autocovariance(seg, m, 0);
    if (!(var > 0.0)) return std::pair{m, 0.0};
    double ess = static_cast<double>(seg.size());
    if (seg.size() >= kMinDiagnosticDraws) ess = effective_sample_size(seg);
    return std::pair{m, var / ess};
  };
  const auto [mean_a, se2_a] = mean_and_se2(a);
  const auto [mean_b, se2_b] = mean_and_se2(b);
  const double se2 = se2_a + se2_b;
  if (!(se2 > 0.0)) return mean_a == mean_b ? 0.0 : INFINITY;
  return (mean_a - mean_b) / std::sqrt(se2);
}

}  // namespace cvbdm::mcmc

#endif  // CVBDM_MCMC_DIAGNOSTICS_HPP
