#ifndef CVBDM_COMPARE_HPP
#define CVBDM_COMPARE_HPP

#include "cvbdm/bdm.hpp"
#include "cvbdm/models.hpp"
#include "cvbdm/random.hpp"
#include "cvbdm/sample.hpp"
#include "cvbdm/simulation/parallel.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace cvbdm {

struct Comparison {
  BdmResult bdm;
  /// Absent when there are too few draws for the density estimate.
  std::optional<UnimodalityReport> unimodality;
  CvDrawResult population1;
  CvDrawResult population2;

  /// True unless a sampler chain failed the convergence gate.
  bool converged() const noexcept {
    return (!population1.chain || population1.chain->converged) &&
           (!population2.chain || population2.chain->converged);
  }
};

/// BDM for H: cv1 = cv2. Population l draws its CVs with seed
/// derive_seed(seed, l - 1); the two samplers run concurrently when
/// `workers` allows. The unimodality check runs on the paired differences.
inline Comparison compare_cv(ModelKind model, const Sample& sample1, const Sample& sample2,
                             const CvRequest& request, std::uint64_t seed, unsigned workers = 2) {
  const Sample* samples[2] = {&sample1, &sample2};
  auto draws = simulation::parallel_map(2, workers, [&](std::size_t l) {
    return std::optional<CvDrawResult>(cv_draws(model, *samples[l], request, derive_seed(seed, l)));
  });
  const ScalarDraws diff = paired_differences(draws[0]->draws, draws[1]->draws);
  BdmResult bdm = bdm_from_scalar_draws(diff, 0.0, BdmOptions{true});
  std::optional<UnimodalityReport> uni;
  if (diff.size() >= kUnimodalityMinDraws) uni = check_unimodality(diff);
  return {bdm, uni, std::move(*draws[0]), std::move(*draws[1])};
}

}  // namespace cvbdm

#endif  // CVBDM_COMPARE_HPP
