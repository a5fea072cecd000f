#ifndef CVBDM_MCMC_CHAIN_HPP
#define CVBDM_MCMC_CHAIN_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/mcmc/diagnostics.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvbdm::mcmc {

/// Row-major matrix of retained draws, one row per draw.
class DrawMatrix {
 public:
  DrawMatrix() = default;
  explicit DrawMatrix(std::size_t dimension, std::vector<std::string> names = {})
      : dim_(dimension), names_(std::move(names)) {
    if (names_.empty()) {
      for (std::size_t j = 0; j < dim_; ++j) names_.push_back("x" + std::to_string(j));
    }
  }

  void reserve(std::size_t rows) { data_.reserve(rows * dim_); }
  void push_row(std::span<const double> row) { data_.insert(data_.end(), row.begin(), row.end()); }

  std::size_t rows() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t cols() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = data_[i * dim_ + j];
    return c;
  }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const DrawMatrix&, const DrawMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> names_;
  std::vector<double> data_;
};

struct SamplerConfig {
  std::size_t n_iterations = 20000;
  std::size_t burn_in = 5000;
  std::size_t thin = 1;
  std::vector<double> initial_point;
  std::vector<double> step_scales;
  bool adapt = true;
  double target_acceptance = 0.234;
  /// Minimum retained draws the config must yield.
  std::size_t min_retained = 1000;

  std::size_t retained() const noexcept {
    if (thin == 0 || burn_in >= n_iterations) return 0;
    return (n_iterations - burn_in) / thin;
  }

  void validate(std::size_t dimension) const {
    if (n_iterations == 0) throw InputError("SamplerConfig: n_iterations must be positive");
    if (burn_in >= n_iterations) throw InputError("SamplerConfig: burn_in must be < n_iterations");
    if (thin == 0) throw InputError("SamplerConfig: thin must be positive");
    if (retained() < min_retained) {
      throw InputError("SamplerConfig: configuration retains " + std::to_string(retained()) +
                       " draws, need at least " + std::to_string(min_retained));
    }
    if (initial_point.size() != dimension) {
      throw InputError("SamplerConfig: initial point has wrong dimension");
    }
    if (!step_scales.empty() && step_scales.size() != dimension) {
      throw InputError("SamplerConfig: step_scales has wrong dimension");
    }
    for (double s : step_scales) {
      if (!(s > 0.0)) throw InputError("SamplerConfig: step scales must be positive");
    }
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
      throw InputError("SamplerConfig: target_acceptance must lie in (0, 1)");
    }
  }
};

struct ChainReport {
  double acceptance_rate = 0.0;
  std::vector<std::string> names;
  std::vector<double> ess;
  std::vector<std::vector<double>> acf;
  std::vector<double> geweke;
  /// Proposal scales in force after burn-in (frozen).
  std::vector<double> final_step_scales;
  std::size_t n_retained = 0;
  std::optional<std::string> trace_path;
  bool converged = false;
};

struct ConvergenceThresholds {
  double min_acceptance = 0.15;
  double max_acceptance = 0.45;
  double min_ess = 400.0;
  double max_abs_geweke = 3.0;
};

inline constexpr std::size_t kDefaultAcfLags = 50;

/// Fills ESS, ACF and Geweke scores of every coordinate. A constant
/// coordinate gets ESS 0 and an infinite Geweke score so the gate fails.
inline void fill_diagnostics(ChainReport& report, const DrawMatrix& draws,
                             std::size_t acf_lags = kDefaultAcfLags) {
  report.names = draws.names();
  report.n_retained = draws.rows();
  report.ess.clear();
  report.acf.clear();
  report.geweke.clear();
  for (std::size_t j = 0; j < draws.cols(); ++j) {
    const std::vector<double> col = draws.column(j);
    report.acf.push_back(autocorrelation(col, acf_lags));
    if (col.size() < kMinDiagnosticDraws) {
      report.ess.push_back(0.0);
      report.geweke.push_back(INFINITY);
      continue;
    }
    try {
      report.ess.push_back(effective_sample_size(col));
      report.geweke.push_back(geweke_z(col));
    } catch (const UndefinedError&) {
      report.ess.push_back(0.0);
      report.geweke.push_back(INFINITY);
    }
  }
}

/// acceptance in band, every ESS >= min_ess and every |Geweke z| < max.
inline bool convergence_gate(const ChainReport& report,
                             const ConvergenceThresholds& thresholds = {}) {
  if (report.acceptance_rate < thresholds.min_acceptance ||
      report.acceptance_rate > thresholds.max_acceptance) {
    return false;
  }
  if (report.ess.empty()) return false;
  for (double e : report.ess) {
    if (!(e >= thresholds.min_ess)) return false;
  }
  for (double z : report.geweke) {
    if (!(std::abs(z) < thresholds.max_abs_geweke)) return false;
  }
  return true;
}

}  // namespace cvbdm::mcmc

#endif  // CVBDM_MCMC_CHAIN_HPP
