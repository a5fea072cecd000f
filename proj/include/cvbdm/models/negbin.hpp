#ifndef CVBDM_MODELS_NEGBIN_HPP
#define CVBDM_MODELS_NEGBIN_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/sample.hpp"
#include "cvbdm/special.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cvbdm::negbin {

/// Gamma-Poisson mixture parameters: X ~ NB(success prob beta/(beta+1), alpha),
/// E = alpha/beta, Var = alpha (beta+1)/beta^2.
struct NegBinDraw {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Counts collapsed to (distinct value, multiplicity) pairs; the likelihood
/// only needs these plus n and the mean.
struct NegBinStats {
  double n = 0.0;
  double mean = 0.0;
  std::vector<std::pair<double, double>> value_counts;
};

inline bool is_count(double v) noexcept {
  return v >= 0.0 && std::floor(v) == v && std::isfinite(v);
}

inline NegBinStats negbin_stats(const Sample& sample) {
  if (!sample.has_values()) {
    throw InputError("negbin model: raw counts are required");
  }
  std::map<double, double> tally;
  for (double v : sample.values()) {
    if (!is_count(v)) {
      throw InputError("negbin model: data must be nonnegative integers, got " +
                       std::to_string(v));
    }
    tally[v] += 1.0;
  }
  NegBinStats s;
  s.n = static_cast<double>(sample.n());
  s.mean = sample.mean();
  s.value_counts.assign(tally.begin(), tally.end());
  return s;
}

/// Above this shape the Jeffreys factor is taken from its asymptotic series,
/// avoiding the cancellation in alpha psi1(alpha) - 1 ~ 1/(2 alpha).
inline constexpr double kJeffreysAsymptoticShape = 1e3;

/// alpha psi1(alpha) - 1, strictly positive for every alpha > 0.
inline double jeffreys_factor(double alpha) {
  double f = 0.0;
  if (alpha > kJeffreysAsymptoticShape) {
    const double r = 1.0 / alpha;
    f = r * (0.5 + r * (1.0 / 6.0 - r * r / 30.0));
  } else {
    f = alpha * special::trigamma(alpha) - 1.0;
  }
  assert(f > 0.0);
  return f;
}

/// d/dalpha (alpha psi1(alpha) - 1) = psi1(alpha) + alpha psi2(alpha).
inline double d_jeffreys_factor(double alpha) {
  if (alpha > kJeffreysAsymptoticShape) {
    const double r = 1.0 / alpha;
    return -r * r * (0.5 + r * (1.0 / 3.0 - r * r * 2.0 / 15.0));
  }
  return special::trigamma(alpha) + alpha * special::tetragamma(alpha);
}

/// Unnormalized log posterior under g0(alpha, beta) ~ (1/beta) sqrt(alpha psi1(alpha) - 1):
///   sum_i [lnG(x_i + alpha) - lnG(alpha)] + n [alpha log beta - (alpha + x_bar) log(beta + 1)]
///   - log beta + (1/2) log(alpha psi1(alpha) - 1).
inline double negbin_log_posterior(const NegBinDraw& draw, const NegBinStats& s) {
  if (!(draw.alpha > 0.0 && draw.beta > 0.0)) return -INFINITY;
  const double a = draw.alpha;
  const double lg_a = special::log_gamma(a);
  double acc = 0.0;
  for (const auto& [value, count] : s.value_counts) {
    if (value == 0.0) continue;
    acc += count * (special::log_gamma(value + a) - lg_a);
  }
  acc += s.n * (a * std::log(draw.beta) - (a + s.mean) * std::log1p(draw.beta));
  acc += -std::log(draw.beta) + 0.5 * std::log(jeffreys_factor(a));
  return acc;
}

inline double negbin_log_posterior(const NegBinDraw& draw, const Sample& sample) {
  return negbin_log_posterior(draw, negbin_stats(sample));
}

/// Gradient with respect to (alpha, beta).
inline std::array<double, 2> negbin_log_posterior_gradient(const NegBinDraw& draw,
                                                           const NegBinStats& s) {
  const double a = draw.alpha;
  const double b = draw.beta;
  const double dg_a = special::digamma(a);
  double d_alpha = 0.0;
  for (const auto& [value, count] : s.value_counts) {
    if (value == 0.0) continue;
    d_alpha += count * (special::digamma(value + a) - dg_a);
  }
  d_alpha += s.n * (std::log(b) - std::log1p(b));
  d_alpha += 0.5 * d_jeffreys_factor(a) / jeffreys_factor(a);
  const double d_beta = s.n * (a / b - (a + s.mean) / (b + 1.0)) - 1.0 / b;
  return {d_alpha, d_beta};
}

/// CV = sqrt((beta + 1) / alpha).
inline double cv_negbin(const NegBinDraw& draw) noexcept {
  return std::sqrt((draw.beta + 1.0) / draw.alpha);
}

}  // namespace cvbdm::negbin

#endif  // CVBDM_MODELS_NEGBIN_HPP
