#ifndef CVBDM_MODELS_SIMULATE_HPP
#define CVBDM_MODELS_SIMULATE_HPP

#include "cvbdm/models/model_kind.hpp"
#include "cvbdm/models/skewnormal.hpp"
#include "cvbdm/random.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace cvbdm {

/// Generating parameters of one population:
///   normal      (mean, sd)
///   invgauss    (mu, lambda)
///   skewnormal  (mu, sigma, lambda)
///   negbin      (alpha, beta)
struct TrueParams {
  double p1 = 0.0;
  double p2 = 1.0;
  double p3 = 0.0;
};

inline double true_cv(ModelKind model, const TrueParams& p) {
  switch (model) {
    case ModelKind::normal: return p.p2 / std::abs(p.p1);
    case ModelKind::invgauss: return std::sqrt(p.p1 / p.p2);
    case ModelKind::skewnormal: return skewnormal::cv_skewnormal(p.p1, p.p2, p.p3);
    case ModelKind::negbin: return std::sqrt((p.p2 + 1.0) / p.p1);
  }
  return 0.0;
}

/// Inverse Gaussian variate (Michael, Schucany and Haas transformation).
inline double draw_invgauss(Rng& rng, double mu, double lambda) {
  const double z = std_normal(rng);
  const double y = z * z;
  const double x = mu + mu * mu * y / (2.0 * lambda) -
                   mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  return uniform01(rng) <= mu / (mu + x) ? x : mu * mu / x;
}

/// Skew-Normal variate: mu + sigma (delta |U0| + sqrt(1 - delta^2) U1).
inline double draw_skewnormal(Rng& rng, double mu, double sigma, double lambda) {
  const double delta = skewnormal::skewness_delta(lambda);
  const double u0 = std::abs(std_normal(rng));
  const double u1 = std_normal(rng);
  return mu + sigma * (delta * u0 + std::sqrt(1.0 - delta * delta) * u1);
}

/// Negative Binomial variate as a Gamma(alpha, rate beta) mixture of Poissons.
inline double draw_negbin(Rng& rng, double alpha, double beta) {
  const double rate = gamma_rate(rng, alpha, beta);
  return static_cast<double>(std::poisson_distribution<long long>{rate}(rng));
}

inline std::vector<double> simulate_sample(ModelKind model, const TrueParams& p, std::size_t n,
                                           Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) {
    switch (model) {
      case ModelKind::normal: v = p.p1 + p.p2 * std_normal(rng); break;
      case ModelKind::invgauss: v = draw_invgauss(rng, p.p1, p.p2); break;
      case ModelKind::skewnormal: v = draw_skewnormal(rng, p.p1, p.p2, p.p3); break;
      case ModelKind::negbin: v = draw_negbin(rng, p.p1, p.p2); break;
    }
  }
  return x;
}

}  // namespace cvbdm

#endif  // CVBDM_MODELS_SIMULATE_HPP
