#ifndef CVBDM_SIMULATION_BOOTSTRAP_HPP
#define CVBDM_SIMULATION_BOOTSTRAP_HPP

#include "cvbdm/error.hpp"
#include "cvbdm/models/simulate.hpp"
#include "cvbdm/random.hpp"
#include "cvbdm/sample.hpp"
#include "cvbdm/simulation/parallel.hpp"
#include "cvbdm/simulation/study.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace cvbdm::simulation {

inline constexpr std::size_t kMinBootstrapResamples = 100;
/// Resamples with zero mean are redrawn; more than this many redraws per
/// requested resample aborts the test.
inline constexpr std::size_t kMaxRedrawsPerResample = 10;

struct BootstrapResult {
  double p_value = 1.0;
  /// Observed statistic cv1 - cv2.
  double statistic = 0.0;
  std::size_t n_boot = 0;
  std::size_t n_redrawn = 0;
};

namespace detail {

/// s / |mean| with the divide-by-(n - 1) standard deviation; NaN when the
/// mean is zero.
inline double sample_cv(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / n;
  if (mean == 0.0) return NAN;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0)) / std::abs(mean);
}

}  // namespace detail

/// Two-sided percentile bootstrap test of equal CVs. The statistic is
/// d = cv1 - cv2 with cv = s / |mean| (s divides by n - 1). Each group is
/// resampled with replacement, d* is recentred by d, and
///   p = #{ |d* - d| >= |d| } / n_boot.
/// Resample indices depend only on the seed and the sample sizes.
inline BootstrapResult bootstrap_cv_test(const Sample& sample1, const Sample& sample2,
                                         std::size_t n_boot, std::uint64_t seed) {
  if (n_boot < kMinBootstrapResamples) {
    throw InputError("bootstrap_cv_test: need at least 100 resamples");
  }
  if (!sample1.has_values() || !sample2.has_values()) {
    throw InputError("bootstrap_cv_test: raw observations are required");
  }
  const auto x1 = sample1.values();
  const auto x2 = sample2.values();
  const double cv1 = detail::sample_cv(x1);
  const double cv2 = detail::sample_cv(x2);
  if (std::isnan(cv1) || std::isnan(cv2)) {
    throw UndefinedError("bootstrap_cv_test: a sample has zero mean");
  }

  BootstrapResult result;
  result.statistic = cv1 - cv2;
  result.n_boot = n_boot;
  const double abs_d = std::abs(result.statistic);

  Rng rng = make_rng(seed);
  std::vector<double> r1(x1.size());
  std::vector<double> r2(x2.size());
  auto resample = [&rng](std::span<const double> from, std::vector<double>& to) {
    std::uniform_int_distribution<std::size_t> pick(0, from.size() - 1);
    for (auto& v : to) v = from[pick(rng)];
  };

  std::size_t extreme = 0;
  const std::size_t max_redraws = kMaxRedrawsPerResample * n_boot;
  for (std::size_t b = 0; b < n_boot; ++b) {
    double c1 = NAN;
    double c2 = NAN;
    for (;;) {
      resample(x1, r1);
      resample(x2, r2);
      c1 = detail::sample_cv(r1);
      c2 = detail::sample_cv(r2);
      if (!std::isnan(c1) && !std::isnan(c2)) break;
      if (++result.n_redrawn > max_redraws) {
        throw UndefinedError("bootstrap_cv_test: too many zero-mean resamples");
      }
    }
    if (std::abs((c1 - c2) - result.statistic) >= abs_d) ++extreme;
  }
  result.p_value = static_cast<double>(extreme) / static_cast<double>(n_boot);
  return result;
}

struct BootstrapStudyGrid {
  ModelKind model = ModelKind::normal;
  TrueParams population1{3.0, 1.0, 0.0};
  TrueParams population2{3.0, 1.0, 0.0};
  std::vector<std::pair<std::size_t, std::size_t>> sample_sizes{{100, 100}};
  std::vector<double> levels{0.10, 0.05, 0.01};
  std::size_t n_replications = 5000;
  std::size_t n_boot = 500;
  std::uint64_t master_seed = 1;
  unsigned workers = 0;
};

/// Rejection rates of bootstrap_cv_test (reject when p <= level). Cell
/// `threshold` holds the level. Replication r of size pair k uses seed
/// derive_seed(derive_seed(master, k), r) with streams 0/1 for the data and
/// 2 for the resampling.
inline std::vector<StudyCell> run_bootstrap_study(const BootstrapStudyGrid& grid) {
  validate_true_params(grid.model, grid.population1, "population1");
  validate_true_params(grid.model, grid.population2, "population2");
  if (grid.n_replications == 0) throw InputError("bootstrap study: n_replications must be positive");
  for (double a : grid.levels) {
    if (!(a > 0.0 && a < 1.0)) throw InputError("bootstrap study: levels must lie in (0, 1)");
  }
  std::vector<StudyCell> cells;
  for (std::size_t k = 0; k < grid.sample_sizes.size(); ++k) {
    const auto [n1, n2] = grid.sample_sizes[k];
    if (n1 < 2 || n2 < 2) throw InputError("bootstrap study: sample sizes must be at least 2");
    const std::uint64_t size_seed = derive_seed(grid.master_seed, k);
    const auto p_values = parallel_map(grid.n_replications, grid.workers, [&](std::size_t r) {
      const std::uint64_t rep_seed = derive_seed(size_seed, r);
      Rng d1(derive_seed(rep_seed, 0));
      Rng d2(derive_seed(rep_seed, 1));
      const auto s1 = Sample::from_values(simulate_sample(grid.model, grid.population1, n1, d1));
      const auto s2 = Sample::from_values(simulate_sample(grid.model, grid.population2, n2, d2));
      return bootstrap_cv_test(s1, s2, grid.n_boot, derive_seed(rep_seed, 2)).p_value;
    });
    for (double level : grid.levels) {
      StudyCell cell;
      cell.n1 = n1;
      cell.n2 = n2;
      cell.threshold = level;
      cell.replications = p_values.size();
      for (double p : p_values) cell.exceed += p <= level ? 1 : 0;
      cell.rate = static_cast<double>(cell.exceed) / static_cast<double>(cell.replications);
      cell.mc_ci = wilson_interval(cell.exceed, cell.replications);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace cvbdm::simulation

#endif  // CVBDM_SIMULATION_BOOTSTRAP_HPP
