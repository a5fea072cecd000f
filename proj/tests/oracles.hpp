// Independent reference computations used only by the tests. Nothing here
// calls into the library's evaluation paths.
#ifndef CVBDM_TESTS_ORACLES_HPP
#define CVBDM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// psi1(a) = sum_{j>=0} (a+j)^-2, summed directly for N terms with an
/// Euler-Maclaurin tail.
inline double trigamma_series(double a, int terms = 200000) {
  long double s = 0.0L;
  for (int j = terms - 1; j >= 0; --j) {
    const long double t = static_cast<long double>(a) + j;
    s += 1.0L / (t * t);
  }
  const long double m = static_cast<long double>(a) + terms;
  s += 1.0L / m + 1.0L / (2.0L * m * m) + 1.0L / (6.0L * m * m * m);
  return static_cast<double>(s);
}

/// Normal CDF through erfc in long double.
inline double normal_cdf(double x) {
  return static_cast<double>(0.5L * std::erfc(-static_cast<long double>(x) / std::sqrt(2.0L)));
}

inline double log_normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// log of the inverse Gaussian density written out from its definition.
inline double log_invgauss_pdf(double x, double mu, double lambda) {
  const double dev = (x - mu) / (mu * std::sqrt(x));
  return 0.5 * std::log(lambda / (2.0 * std::numbers::pi * x * x * x)) - 0.5 * lambda * dev * dev;
}

/// log of the Skew-Normal density 2/s phi(z) Phi(l z), through long double erfc.
inline double log_skewnormal_pdf(double x, double mu, double sigma, double lambda) {
  const double z = (x - mu) / sigma;
  return std::log(2.0 / sigma) + log_normal_pdf(z, 0.0, 1.0) + std::log(normal_cdf(lambda * z));
}

/// log NB pmf with the Gamma ratio written as a product:
/// Gamma(x + a)/Gamma(a) = prod_{k<x} (a + k).
inline double log_negbin_pmf(int x, double alpha, double beta) {
  long double acc = 0.0L;
  for (int k = 0; k < x; ++k) acc += std::log(static_cast<long double>(alpha) + k);
  for (int k = 2; k <= x; ++k) acc -= std::log(static_cast<long double>(k));
  const long double p = static_cast<long double>(beta) / (beta + 1.0L);
  acc += alpha * std::log(p) + x * std::log1p(-p);
  return static_cast<double>(acc);
}

/// Generalized-t density exactly as written: location m, scale s, dof v.
inline double generalized_t_pdf(double l, double m = 0.0, double s = std::numbers::pi / 2.0,
                                double v = 0.5) {
  const double beta = std::tgamma(v / 2.0) * std::tgamma(0.5) / std::tgamma(v / 2.0 + 0.5);
  return 1.0 / beta * std::sqrt(s / v) * std::pow(1.0 + s * (l - m) * (l - m) / v, -(v + 1.0) / 2.0);
}

/// Central finite-difference partial derivative.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// One-sample KS statistic against Unif(0,1), computed by brute force.
inline double ks_uniform_statistic(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = std::clamp(v[i], 0.0, 1.0);
    d = std::max({d, (i + 1) / n - u, u - i / n});
  }
  return d;
}

}  // namespace oracle

#endif  // CVBDM_TESTS_ORACLES_HPP
