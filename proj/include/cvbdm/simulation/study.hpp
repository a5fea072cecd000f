#ifndef CVBDM_SIMULATION_STUDY_HPP
#define CVBDM_SIMULATION_STUDY_HPP

#include "cvbdm/bdm.hpp"
#include "cvbdm/error.hpp"
#include "cvbdm/models.hpp"
#include "cvbdm/models/simulate.hpp"
#include "cvbdm/random.hpp"
#include "cvbdm/simulation/parallel.hpp"
#include "cvbdm/special.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvbdm::simulation {

struct StudyGrid {
  std::string name = "study";
  ModelKind model = ModelKind::normal;
  TrueParams population1{3.0, 1.0, 0.0};
  TrueParams population2{3.0, 1.0, 0.0};
  std::vector<std::pair<std::size_t, std::size_t>> sample_sizes{{10, 10}};
  std::vector<double> thresholds{0.90, 0.95, 0.99};
  std::size_t n_replications = 5000;
  /// CV draws per population: conjugate draws for the Normal model, retained
  /// chain draws otherwise.
  std::size_t n_posterior_draws = 2000;
  std::uint64_t master_seed = 1;
  /// Explicit chain settings for MCMC models; study_sampler_config otherwise.
  std::optional<mcmc::SamplerConfig> sampler;
  bool retain_deltas = true;
  /// Worker threads (0: one per hardware thread).
  unsigned workers = 0;

  void validate() const;
};

/// Chain settings used inside replication studies: 5000 burn-in iterations,
/// thinning by 2, and `draws` retained draws.
inline mcmc::SamplerConfig study_sampler_config(std::size_t draws) {
  mcmc::SamplerConfig c;
  c.burn_in = 5000;
  c.thin = 2;
  c.n_iterations = c.burn_in + c.thin * draws;
  c.min_retained = std::min<std::size_t>(draws, 1000);
  return c;
}

inline void validate_true_params(ModelKind model, const TrueParams& p, const std::string& label) {
  auto positive = [&](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError(label + ": " + what + " must be positive and finite");
    }
  };
  switch (model) {
    case ModelKind::normal:
      positive(p.p2, "sd");
      if (p.p1 == 0.0) throw InputError(label + ": mean must be nonzero");
      break;
    case ModelKind::invgauss:
      positive(p.p1, "mu");
      positive(p.p2, "lambda");
      break;
    case ModelKind::skewnormal:
      positive(p.p2, "sigma");
      if (!std::isfinite(p.p1) || !std::isfinite(p.p3)) {
        throw InputError(label + ": mu and lambda must be finite");
      }
      break;
    case ModelKind::negbin:
      positive(p.p1, "alpha");
      positive(p.p2, "beta");
      break;
  }
}

inline void StudyGrid::validate() const {
  validate_true_params(model, population1, "population1");
  validate_true_params(model, population2, "population2");
  if (sample_sizes.empty()) throw InputError("StudyGrid: no sample sizes");
  for (const auto& [n1, n2] : sample_sizes) {
    if (n1 < 2 || n2 < 2) throw InputError("StudyGrid: sample sizes must be at least 2");
  }
  for (double t : thresholds) {
    if (!(t > 0.0 && t < 1.0)) throw InputError("StudyGrid: thresholds must lie in (0, 1)");
  }
  if (n_replications == 0) throw InputError("StudyGrid: n_replications must be positive");
  if (n_posterior_draws == 0) throw InputError("StudyGrid: n_posterior_draws must be positive");
}

/// Wilson score interval for a binomial proportion.
struct BinomialInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

inline BinomialInterval wilson_interval(std::size_t successes, std::size_t trials,
                                        double z = kZ95) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Standard error sqrt(p (1 - p) / n) of a binomial proportion.
inline double binomial_se(double p, std::size_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

struct StudyCell {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double threshold = 0.0;
  std::size_t exceed = 0;
  std::size_t replications = 0;
  double rate = 0.0;
  BinomialInterval mc_ci;
};

struct SizeSummary {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double median_delta = 0.0;
  double mean_delta = 0.0;
  std::vector<double> deltas;  // empty unless retained
};

struct StudyResult {
  std::vector<StudyCell> cells;
  std::vector<SizeSummary> sizes;
};

inline bool equal_cv(ModelKind model, const TrueParams& a, const TrueParams& b) {
  const double c1 = true_cv(model, a);
  const double c2 = true_cv(model, b);
  return std::abs(c1 - c2) <= 1e-9 * std::max(std::abs(c1), std::abs(c2));
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// delta_H of one simulated replication. Streams of `rep_seed`: 0 and 1
/// generate the two samples, 2 and 3 drive the two posterior samplers.
inline double replicate_delta(const StudyGrid& grid, std::size_t n1, std::size_t n2,
                              std::uint64_t rep_seed) {
  Rng data1(derive_seed(rep_seed, 0));
  Rng data2(derive_seed(rep_seed, 1));
  const Sample s1 = Sample::from_values(simulate_sample(grid.model, grid.population1, n1, data1));
  const Sample s2 = Sample::from_values(simulate_sample(grid.model, grid.population2, n2, data2));
  CvRequest request;
  request.n_draws = grid.n_posterior_draws;
  if (grid.model != ModelKind::normal) {
    request.sampler = grid.sampler ? *grid.sampler : study_sampler_config(grid.n_posterior_draws);
  }
  const auto d1 = cv_draws(grid.model, s1, request, derive_seed(rep_seed, 2));
  const auto d2 = cv_draws(grid.model, s2, request, derive_seed(rep_seed, 3));
  return bdm_two_populations(d1.draws, d2.draws).delta_h;
}

/// delta_H for every replication of every sample-size pair, in grid order.
/// Replication r of size pair k uses seed derive_seed(derive_seed(master, k), r).
inline std::vector<std::vector<double>> simulate_deltas(const StudyGrid& grid) {
  grid.validate();
  std::vector<std::vector<double>> out;
  out.reserve(grid.sample_sizes.size());
  for (std::size_t k = 0; k < grid.sample_sizes.size(); ++k) {
    const auto [n1, n2] = grid.sample_sizes[k];
    const std::uint64_t size_seed = derive_seed(grid.master_seed, k);
    out.push_back(parallel_map(grid.n_replications, grid.workers, [&](std::size_t r) {
      return replicate_delta(grid, n1, n2, derive_seed(size_seed, r));
    }));
  }
  return out;
}

inline StudyResult summarize_study(const StudyGrid& grid,
                                   std::vector<std::vector<double>> deltas) {
  StudyResult result;
  for (std::size_t k = 0; k < grid.sample_sizes.size(); ++k) {
    const auto [n1, n2] = grid.sample_sizes[k];
    const auto& d = deltas[k];
    for (double t : grid.thresholds) {
      StudyCell cell;
      cell.n1 = n1;
      cell.n2 = n2;
      cell.threshold = t;
      cell.replications = d.size();
      cell.exceed = static_cast<std::size_t>(
          std::count_if(d.begin(), d.end(), [t](double v) { return v > t; }));
      cell.rate = static_cast<double>(cell.exceed) / static_cast<double>(cell.replications);
      cell.mc_ci = wilson_interval(cell.exceed, cell.replications);
      result.cells.push_back(cell);
    }
    SizeSummary size;
    size.n1 = n1;
    size.n2 = n2;
    size.median_delta = median_of(d);
    double sum = 0.0;
    for (double v : d) sum += v;
    size.mean_delta = sum / static_cast<double>(d.size());
    if (grid.retain_deltas) size.deltas = std::move(deltas[k]);
    result.sizes.push_back(std::move(size));
  }
  return result;
}

/// False non-conformity rates: fraction of replications with delta_H above
/// each threshold when both populations share the same CV.
inline StudyResult run_fncr_study(const StudyGrid& grid) {
  grid.validate();
  if (!equal_cv(grid.model, grid.population1, grid.population2)) {
    throw InputError("run_fncr_study: the populations must have equal CVs");
  }
  return summarize_study(grid, simulate_deltas(grid));
}

/// Distribution of delta_H per sample size when the CVs differ.
inline StudyResult run_consistency_study(const StudyGrid& grid) {
  grid.validate();
  if (equal_cv(grid.model, grid.population1, grid.population2)) {
    throw InputError("run_consistency_study: the populations must have different CVs");
  }
  return summarize_study(grid, simulate_deltas(grid));
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test against Unif(0, 1), p-value from the
/// asymptotic distribution with Stephens' finite-sample correction.
inline KsResult ks_test_uniform(std::vector<double> values) {
  if (values.empty()) throw InputError("ks_test_uniform: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double u = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  return {d, special::kolmogorov_survival((root + 0.12 + 0.11 / root) * d), values.size()};
}

inline constexpr std::size_t kMinUniformityReplications = 2000;

/// KS test of delta_H against Unif(0, 1) under equal CVs, pooling the
/// replications of every sample-size pair.
inline KsResult run_uniformity_check(const StudyGrid& grid) {
  grid.validate();
  if (grid.n_replications < kMinUniformityReplications) {
    throw InputError("run_uniformity_check: need at least 2000 replications, got " +
                     std::to_string(grid.n_replications));
  }
  if (!equal_cv(grid.model, grid.population1, grid.population2)) {
    throw InputError("run_uniformity_check: the populations must have equal CVs");
  }
  std::vector<double> pooled;
  for (auto& d : simulate_deltas(grid)) pooled.insert(pooled.end(), d.begin(), d.end());
  return ks_test_uniform(std::move(pooled));
}

}  // namespace cvbdm::simulation

#endif  // CVBDM_SIMULATION_STUDY_HPP
