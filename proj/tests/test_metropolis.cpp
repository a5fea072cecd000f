#include "cvbdm/mcmc/metropolis.hpp"

#include <gtest/gtest.h>

#include <array>
#include <map>

using namespace cvbdm;
using namespace cvbdm::mcmc;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

SamplerConfig config_1d(std::size_t iters = 200000) {
  SamplerConfig c;
  c.n_iterations = iters;
  c.burn_in = 10000;
  c.initial_point = {3.0};
  c.step_scales = {0.2};
  return c;
}

auto std_normal_density = [](std::span<const double> x) { return -0.5 * x[0] * x[0]; };

}  // namespace

TEST(RwMetropolis, StandardNormalMoments) {
  auto [draws, report] = rw_metropolis(std_normal_density, config_1d(), 1);
  const auto c = draws.column(0);
  EXPECT_NEAR(mean(c), 0.0, 0.02);
  EXPECT_NEAR(var(c), 1.0, 0.05);
  EXPECT_GE(report.acceptance_rate, 0.15);
  EXPECT_LE(report.acceptance_rate, 0.45);
  EXPECT_TRUE(report.converged);
}

TEST(RwMetropolis, BivariateCorrelation) {
  const double rho = 0.5;
  auto density = [rho](std::span<const double> x) {
    return -0.5 * (x[0] * x[0] - 2.0 * rho * x[0] * x[1] + x[1] * x[1]) / (1.0 - rho * rho);
  };
  SamplerConfig c;
  c.n_iterations = 300000;
  c.burn_in = 20000;
  c.initial_point = {0.0, 0.0};
  c.step_scales = {0.5, 0.5};
  auto [draws, report] = rw_metropolis(density, c, 2);
  const auto a = draws.column(0);
  const auto b = draws.column(1);
  const double ma = mean(a), mb = mean(b);
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ma) * (b[i] - mb);
  cov /= static_cast<double>(a.size() - 1);
  EXPECT_NEAR(cov / std::sqrt(var(a) * var(b)), rho, 0.03);
  EXPECT_GE(report.acceptance_rate, 0.15);
  EXPECT_LE(report.acceptance_rate, 0.45);
}

TEST(RwMetropolis, AdaptationRescuesPoorInitialScale) {
  for (double s : {1e-3, 50.0}) {
    SamplerConfig c = config_1d(60000);
    c.step_scales = {s};
    auto [draws, report] = rw_metropolis(std_normal_density, c, 3);
    EXPECT_GE(report.acceptance_rate, 0.15) << s;
    EXPECT_LE(report.acceptance_rate, 0.45) << s;
  }
}

TEST(RwMetropolis, DeterministicPerSeed) {
  const auto c = config_1d(20000);
  auto r1 = rw_metropolis(std_normal_density, c, 42);
  auto r2 = rw_metropolis(std_normal_density, c, 42);
  auto r3 = rw_metropolis(std_normal_density, c, 43);
  EXPECT_EQ(r1.first, r2.first);
  EXPECT_FALSE(r1.first == r3.first);
}

TEST(RwMetropolis, KernelFrozenAfterBurnIn) {
  const auto c = config_1d(30000);
  std::vector<double> after;
  ScaleObserver obs = [&](std::size_t t, std::span<const double> s) {
    if (t >= c.burn_in) after.push_back(s[0]);
  };
  auto [draws, report] = rw_metropolis(std_normal_density, c, 5, {}, obs);
  ASSERT_EQ(after.size(), c.n_iterations - c.burn_in);
  for (double s : after) ASSERT_EQ(s, after.front());
  EXPECT_EQ(report.final_step_scales[0], after.front());
}

TEST(RwMetropolis, RetainsThinnedCount) {
  SamplerConfig c = config_1d(25000);
  c.thin = 3;
  c.min_retained = 100;
  auto [draws, report] = rw_metropolis(std_normal_density, c, 6, {"theta"});
  EXPECT_EQ(draws.rows(), (25000u - 10000u) / 3u);
  EXPECT_EQ(report.names, std::vector<std::string>{"theta"});
}

TEST(RwMetropolis, DetailedBalanceOnDiscreteTarget) {
  // Target on the integers 0..4 embedded as a step density on [0, 5).
  const std::array<double, 5> weights{1.0, 3.0, 2.0, 5.0, 1.5};
  double total = 0.0;
  for (double w : weights) total += w;
  auto density = [&](std::span<const double> x) -> double {
    if (x[0] < 0.0 || x[0] >= 5.0) return -INFINITY;
    return std::log(weights[static_cast<std::size_t>(x[0])]);
  };
  SamplerConfig c;
  c.n_iterations = 1000000;
  c.burn_in = 10000;
  c.initial_point = {2.5};
  c.step_scales = {1.5};
  c.adapt = false;
  auto [draws, report] = rw_metropolis(density, c, 7);
  std::array<double, 5> freq{};
  for (double v : draws.column(0)) freq[static_cast<std::size_t>(v)] += 1.0;
  double tv = 0.0;
  for (std::size_t k = 0; k < 5; ++k) {
    tv += std::abs(freq[k] / static_cast<double>(draws.rows()) - weights[k] / total);
  }
  EXPECT_LT(0.5 * tv, 0.02);
}

TEST(RwMetropolis, Contract) {
  auto c = config_1d(20000);
  auto bad = [](std::span<const double>) -> double { return -INFINITY; };
  EXPECT_THROW(rw_metropolis(bad, c, 1), InputError);
  c.n_iterations = 10500;  // retains 500 < 1000
  EXPECT_THROW(rw_metropolis(std_normal_density, c, 1), InputError);
  c = config_1d(20000);
  c.initial_point = {};
  EXPECT_THROW(rw_metropolis(std_normal_density, c, 1), InputError);
  c = config_1d(20000);
  c.step_scales = {0.0};
  EXPECT_THROW(rw_metropolis(std_normal_density, c, 1), InputError);
}
