#ifndef CVBDM_SAMPLE_HPP
#define CVBDM_SAMPLE_HPP

#include "cvbdm/error.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvbdm {

/// Observations of one population with cached sufficient statistics.
///
/// `sd` uses the divide-by-n convention, so that n * sd^2 equals the sum of
/// squared deviations. A Sample may be summary-only (no raw values); only the
/// Normal model, and the inverse Gaussian model when the harmonic mean is
/// given, can run on one.
class Sample {
 public:
  static Sample from_values(std::vector<double> values) {
    if (values.size() < 2) throw InputError("Sample: need at least 2 observations");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw InputError("Sample: non-finite value at index " + std::to_string(i));
      }
    }
    Sample s;
    s.n_ = values.size();
    const double n = static_cast<double>(s.n_);
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean_ = sum / n;
    double ss = 0.0;
    bool all_positive = true;
    double inv_sum = 0.0;
    for (double v : values) {
      ss += (v - s.mean_) * (v - s.mean_);
      if (v > 0.0) {
        inv_sum += 1.0 / v;
      } else {
        all_positive = false;
      }
    }
    s.sd_ = std::sqrt(ss / n);
    if (all_positive) s.harmonic_mean_ = n / inv_sum;
    s.values_ = std::move(values);
    return s;
  }

  static Sample from_summary(std::size_t n, double mean, double sd,
                             std::optional<double> harmonic_mean = std::nullopt) {
    if (n < 2) throw InputError("Sample: need n >= 2");
    if (!std::isfinite(mean) || !std::isfinite(sd) || sd < 0.0) {
      throw InputError("Sample: summary mean/sd must be finite with sd >= 0");
    }
    if (harmonic_mean) {
      if (!(*harmonic_mean > 0.0) || *harmonic_mean > mean * (1.0 + 1e-12)) {
        throw InputError("Sample: harmonic mean must be positive and not exceed the mean");
      }
    }
    Sample s;
    s.n_ = n;
    s.mean_ = mean;
    s.sd_ = sd;
    s.harmonic_mean_ = harmonic_mean;
    return s;
  }

  std::size_t n() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }
  /// Unbiased (divide-by-(n-1)) standard deviation.
  double sd_unbiased() const noexcept {
    const double n = static_cast<double>(n_);
    return sd_ * std::sqrt(n / (n - 1.0));
  }
  std::optional<double> harmonic_mean() const noexcept { return harmonic_mean_; }
  bool has_values() const noexcept { return !values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }

  /// Sample CV s/|mean| (divide-by-n s), as a descriptive summary.
  double cv_estimate() const noexcept { return sd_ / std::abs(mean_); }

 private:
  Sample() = default;

  std::vector<double> values_;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double sd_ = 0.0;
  std::optional<double> harmonic_mean_;
};

}  // namespace cvbdm

#endif  // CVBDM_SAMPLE_HPP
