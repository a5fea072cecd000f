#include "cvbdm/models/invgauss.hpp"
#include "cvbdm/models/simulate.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cvbdm;
using namespace cvbdm::invgauss;

namespace {

std::vector<double> ig_data(std::size_t n, double mu, double lambda, std::uint64_t seed) {
  Rng rng(seed);
  return simulate_sample(ModelKind::invgauss, {mu, lambda}, n, rng);
}

}  // namespace

TEST(InvGaussLogPosterior, RejectsNonPositiveData) {
  EXPECT_THROW(invgauss_log_posterior({1, 1}, Sample::from_values({1.0, 0.0, 2.0})), InputError);
  EXPECT_THROW(invgauss_log_posterior({1, 1}, Sample::from_values({1.0, -3.0})), InputError);
}

TEST(InvGaussLogPosterior, PeaksNearSampleMeanForLargeN) {
  const auto s = Sample::from_values(ig_data(5000, 2.0, 8.0, 1));
  const auto st = invgauss_stats(s);
  const double lambda_hat = 1.0 / (st.inv_harmonic - 1.0 / st.mean);
  const double at_mean = invgauss_log_posterior({st.mean, lambda_hat}, st);
  for (double rel : {0.98, 0.99, 1.01, 1.02}) {
    EXPECT_GT(at_mean, invgauss_log_posterior({st.mean * rel, lambda_hat}, st)) << rel;
  }
}

TEST(InvGaussLogPosterior, GradientMatchesFiniteDifferences) {
  const auto st = invgauss_stats(Sample::from_values(ig_data(40, 1.5, 4.0, 2)));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u_mu(0.5, 3.0), u_l(1.0, 10.0);
  for (int k = 0; k < 20; ++k) {
    const double mu = u_mu(gen), lambda = u_l(gen);
    const auto g = invgauss_log_posterior_gradient({mu, lambda}, st);
    const double fd_mu = oracle::central_difference(
        [&](double m) { return invgauss_log_posterior({m, lambda}, st); }, mu, 1e-6 * mu);
    const double fd_l = oracle::central_difference(
        [&](double l) { return invgauss_log_posterior({mu, l}, st); }, lambda, 1e-6 * lambda);
    EXPECT_NEAR(g[0], fd_mu, 1e-5 * std::max(1.0, std::abs(fd_mu)));
    EXPECT_NEAR(g[1], fd_l, 1e-5 * std::max(1.0, std::abs(fd_l)));
  }
}

TEST(InvGaussLogPosterior, MatchesDensityOracleOnGrid) {
  const auto x = ig_data(25, 2.0, 6.0, 4);
  const auto st = invgauss_stats(Sample::from_values(x));
  auto brute = [&](double mu, double lambda) {
    double acc = -0.5 * std::log(mu * mu * mu * lambda);
    for (double xi : x) acc += oracle::log_invgauss_pdf(xi, mu, lambda);
    return acc;
  };
  const double r_lib = invgauss_log_posterior({2.0, 6.0}, st);
  const double r_ref = brute(2.0, 6.0);
  for (double mu = 1.0; mu <= 3.01; mu += 0.25) {
    for (double l = 2.0; l <= 12.01; l += 1.25) {
      EXPECT_NEAR(invgauss_log_posterior({mu, l}, st) - r_lib, brute(mu, l) - r_ref, 1e-8);
    }
  }
}

TEST(InvGaussLogPosterior, ScaleEquivariantProfile) {
  const auto x = ig_data(30, 1.0, 3.0, 5);
  const double c = 7.3;
  std::vector<double> cx(x);
  for (auto& v : cx) v *= c;
  const auto st = invgauss_stats(Sample::from_values(x));
  const auto cst = invgauss_stats(Sample::from_values(cx));
  const double offset = invgauss_log_posterior({c * 1.0, c * 3.0}, cst) - invgauss_log_posterior({1.0, 3.0}, st);
  for (double mu = 0.6; mu <= 1.6; mu += 0.2) {
    for (double l = 1.0; l <= 6.0; l += 0.5) {
      const double diff = invgauss_log_posterior({c * mu, c * l}, cst) - invgauss_log_posterior({mu, l}, st);
      EXPECT_NEAR(diff, offset, 1e-9 * std::abs(offset) + 1e-9);
    }
  }
}

TEST(CvInvGauss, Examples) {
  EXPECT_DOUBLE_EQ(cv_invgauss({1.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(cv_invgauss({4.0, 1.0}), 2.0);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  for (int k = 0; k < 50; ++k) {
    const InvGaussDraw d{u(gen), u(gen)};
    EXPECT_DOUBLE_EQ(3.0 * cv_invgauss(d), 3.0 * std::sqrt(d.mu / d.lambda));
  }
}

TEST(InvGaussStats, SummaryWithHarmonicMean) {
  const auto s = Sample::from_summary(17, 5.0, 1.2, 4.7);
  const auto st = invgauss_stats(s);
  EXPECT_DOUBLE_EQ(st.n, 17.0);
  EXPECT_DOUBLE_EQ(st.inv_harmonic, 1.0 / 4.7);
  EXPECT_THROW(invgauss_stats(Sample::from_summary(17, 5.0, 1.2)), InputError);
}
