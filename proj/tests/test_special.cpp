#include "cvbdm/special.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace sp = cvbdm::special;

TEST(LogNormalCdf, MatchesHighPrecisionValues) {
  // Reference values from 40-digit arithmetic.
  struct Case { double x, expected; };
  const Case cases[] = {
      {3.0, -0.0013508099647481937988},   {0.0, -0.69314718055994530942},
      {-5.0, -15.064998393988725736},     {-10.0, -53.231285150512470578},
      {-19.9, -201.91716770733259757},    {-20.1, -205.92711840194824576},
      {-25.0, -316.63940800802025894},    {-40.0, -804.60844201375378817},
      {-100.0, -5005.5242086942050886},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(sp::log_std_normal_cdf(c.x), c.expected, 1e-12 * std::max(1.0, std::abs(c.expected)))
        << "x = " << c.x;
  }
}

TEST(LogNormalCdf, ContinuousAcrossAsymptoticCut) {
  const double cut = sp::kLogCdfAsymptoticCut;
  const double left = sp::log_std_normal_cdf(std::nextafter(cut, -1e9));
  const double right = sp::log_std_normal_cdf(cut);
  EXPECT_NEAR(left, right, 1e-10);
}

TEST(LogNormalCdf, MillsRatioInFarTail) {
  EXPECT_NEAR(sp::d_log_std_normal_cdf(-30.0), 30.033259667433677037, 1e-9);
  EXPECT_NEAR(sp::d_log_std_normal_cdf(0.0), 2.0 * 0.3989422804014327, 1e-14);
}

TEST(Polygamma, TrigammaMatchesSeriesOracle) {
  for (double a : {0.01, 0.1, 0.5, 1.0, 2.5, 10.0, 100.0}) {
    EXPECT_NEAR(sp::trigamma(a), oracle::trigamma_series(a), 1e-9 * oracle::trigamma_series(a)) << a;
  }
}

TEST(Polygamma, DigammaAndTetragammaAreDerivatives) {
  for (double a : {0.05, 0.7, 3.0, 40.0}) {
    const double h = 1e-5 * a;
    auto lg = [](double x) { return sp::log_gamma(x); };
    EXPECT_NEAR(sp::digamma(a), oracle::central_difference(lg, a, h), 1e-6 * std::abs(sp::digamma(a)) + 1e-6);
    auto tri = [](double x) { return sp::trigamma(x); };
    EXPECT_NEAR(sp::tetragamma(a), oracle::central_difference(tri, a, h), 1e-5 * std::abs(sp::tetragamma(a)));
  }
}

TEST(Kolmogorov, KnownQuantiles) {
  // Critical values of the limiting distribution.
  EXPECT_NEAR(sp::kolmogorov_survival(1.3581), 0.05, 2e-4);
  EXPECT_NEAR(sp::kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_NEAR(sp::kolmogorov_survival(1.2238), 0.10, 2e-4);
  EXPECT_DOUBLE_EQ(sp::kolmogorov_survival(0.0), 1.0);
  EXPECT_LT(sp::kolmogorov_survival(5.0), 1e-20);
}

TEST(Kolmogorov, BranchesAgreeAtSwitchPoint) {
  // Series form evaluated directly at t slightly above the switch.
  const double t = 1.18;
  double sum = 0.0;
  for (int k = 1; k < 50; ++k) sum += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
  EXPECT_NEAR(sp::kolmogorov_survival(t - 1e-12), 2.0 * sum, 1e-10);
}
