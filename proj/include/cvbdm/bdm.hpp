#ifndef CVBDM_BDM_HPP
#define CVBDM_BDM_HPP

#include "cvbdm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cvbdm {

/// Equally weighted posterior draws of a scalar functional. Immutable once
/// built; construction rejects empty or non-finite input.
class ScalarDraws {
 public:
  explicit ScalarDraws(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("ScalarDraws: empty draw set");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw InputError("ScalarDraws: non-finite draw at index " + std::to_string(i));
      }
    }
  }

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  std::vector<double> values_;
};

struct PartitionCounts {
  std::size_t n_below = 0;
  std::size_t n_above = 0;
  std::size_t n_equal = 0;
  std::size_t total = 0;
};

enum class ExternalSide { below, above, tie };

inline const char* to_string(ExternalSide side) noexcept {
  switch (side) {
    case ExternalSide::below: return "below";
    case ExternalSide::above: return "above";
    case ExternalSide::tie: return "tie";
  }
  return "tie";
}

struct BdmResult {
  double delta_h = 0.0;
  double p_a = 0.5;  // P(theta < hypothesis | x)
  double p_b = 0.5;  // P(theta > hypothesis | x)
  double mc_se = 0.0;
  ExternalSide external_side = ExternalSide::tie;
  std::optional<double> posterior_median;
  std::size_t n_draws = 0;
};

struct BdmOptions {
  bool with_median = false;
};

struct UnimodalityReport {
  int mode_count = 1;
  double bandwidth = 0.0;
  bool passed = true;
};

inline PartitionCounts partition_counts(const ScalarDraws& draws, double hypothesis_value) {
  PartitionCounts counts;
  for (double v : draws) {
    if (v < hypothesis_value) {
      ++counts.n_below;
    } else if (v > hypothesis_value) {
      ++counts.n_above;
    } else {
      ++counts.n_equal;
    }
  }
  counts.total = draws.size();
  return counts;
}

/// Sample median by order statistics (mean of the two middle values for even n).
inline double posterior_median(const ScalarDraws& draws) {
  std::vector<double> v(draws.begin(), draws.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// Evidence against H: theta = hypothesis_value from posterior draws of theta,
///   delta_H = 1 - 2 min{P(theta < h | x), P(theta > h | x)}.
///
/// Draws equal to the hypothesis value are split evenly between the two
/// tails, so an all-tied input yields delta_H = 0.
inline BdmResult bdm_from_scalar_draws(const ScalarDraws& draws, double hypothesis_value,
                                       BdmOptions options = {}) {
  if (!std::isfinite(hypothesis_value)) {
    throw InputError("bdm_from_scalar_draws: hypothesis value must be finite");
  }
  const PartitionCounts counts = partition_counts(draws, hypothesis_value);
  const double total = static_cast<double>(counts.total);
  const double half_ties = 0.5 * static_cast<double>(counts.n_equal);

  BdmResult result;
  result.n_draws = counts.total;
  result.p_a = (static_cast<double>(counts.n_below) + half_ties) / total;
  result.p_b = (static_cast<double>(counts.n_above) + half_ties) / total;
  const double p_min = std::min(result.p_a, result.p_b);
  result.delta_h = std::clamp(1.0 - 2.0 * p_min, 0.0, 1.0);
  result.mc_se = 2.0 * std::sqrt(p_min * (1.0 - p_min) / total);
  if (result.p_a < result.p_b) {
    result.external_side = ExternalSide::below;
  } else if (result.p_b < result.p_a) {
    result.external_side = ExternalSide::above;
  } else {
    result.external_side = ExternalSide::tie;
  }
  if (options.with_median) result.posterior_median = posterior_median(draws);
  return result;
}

/// Differences xi_i = phi1_i - phi2_i over the common prefix of the two streams.
inline ScalarDraws paired_differences(const ScalarDraws& draws1, const ScalarDraws& draws2) {
  const std::size_t n = std::min(draws1.size(), draws2.size());
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = draws1[i] - draws2[i];
  return ScalarDraws{std::move(xi)};
}

/// delta_H for H: phi1 - phi2 = 0 from independent posterior draws of each
/// population's functional. Longer streams are truncated to the shorter length.
inline BdmResult bdm_two_populations(const ScalarDraws& draws1, const ScalarDraws& draws2,
                                     BdmOptions options = {}) {
  return bdm_from_scalar_draws(paired_differences(draws1, draws2), 0.0, options);
}

inline constexpr std::size_t kUnimodalityMinDraws = 100;
inline constexpr std::size_t kUnimodalityGridPoints = 512;
/// Local maxima lower than this fraction of the global maximum are treated as
/// kernel noise around isolated tail draws rather than modes.
inline constexpr double kUnimodalityMinRelativeHeight = 0.05;
/// Two neighbouring maxima count as separate modes only if the density dips
/// by at least this fraction of the lower peak between them.
inline constexpr double kUnimodalityMinDipDepth = 0.1;

/// Silverman's rule of thumb: 0.9 min(sd, IQR/1.34) n^{-1/5}.
inline double silverman_bandwidth(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  auto quantile = [&](double q) {
    const double pos = q * (n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(n, -0.2);
}

/// Counts modes of a Gaussian kernel density estimate evaluated on a
/// 512-point grid spanning [min, max] of the draws.
inline UnimodalityReport check_unimodality(const ScalarDraws& draws) {
  if (draws.size() < kUnimodalityMinDraws) {
    throw InputError("check_unimodality: need at least 100 draws, got " +
                     std::to_string(draws.size()));
  }
  std::vector<double> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();

  UnimodalityReport report;
  report.bandwidth = silverman_bandwidth(sorted);
  if (!(hi > lo) || !(report.bandwidth > 0.0)) {
    // Point mass: a single mode by definition.
    report.bandwidth = report.bandwidth > 0.0 ? report.bandwidth : 1.0;
    return report;
  }

  const double h = report.bandwidth;
  const double cutoff = 8.0 * h;  // exp(-32) is negligible
  const std::size_t m = kUnimodalityGridPoints;
  std::vector<double> density(m, 0.0);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t g = 0; g < m; ++g) {
    const double x = lo + step * static_cast<double>(g);
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - cutoff);
    auto last = std::upper_bound(first, sorted.end(), x + cutoff);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / h;
      sum += std::exp(-0.5 * u * u);
    }
    density[g] = sum;
  }

  // Local maxima, merging neighbours whose separating valley is shallow
  // relative to the lower of the two peaks.
  const double peak = *std::max_element(density.begin(), density.end());
  std::vector<double> heights;
  double valley = peak;
  for (std::size_t g = 0; g < m; ++g) {
    valley = std::min(valley, density[g]);
    const bool above_left = g == 0 || density[g] > density[g - 1];
    const bool above_right = g + 1 == m || density[g] > density[g + 1];
    if (!above_left || !above_right || density[g] < kUnimodalityMinRelativeHeight * peak) continue;
    if (!heights.empty() &&
        valley > (1.0 - kUnimodalityMinDipDepth) * std::min(heights.back(), density[g])) {
      heights.back() = std::max(heights.back(), density[g]);
    } else {
      heights.push_back(density[g]);
    }
    valley = density[g];
  }
  const int modes = static_cast<int>(heights.size());
  report.mode_count = std::max(modes, 1);
  report.passed = report.mode_count == 1;
  return report;
}

}  // namespace cvbdm

#endif  // CVBDM_BDM_HPP
