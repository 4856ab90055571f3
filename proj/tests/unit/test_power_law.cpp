#include <gtest/gtest.h>

#include <cmath>

#include "madd/power_law.hpp"
#include "test_support.hpp"

using namespace madd;
using madd::testing::sample_power_law;

TEST(NormalizationConstant, ContinuousFormula) {
  EXPECT_NEAR(normalization_constant(2.0, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(normalization_constant(2.5, 4.0), 1.5 * std::pow(4.0, 1.5), 1e-9);
}

TEST(TruncatedPowerLaw, PmfSumsToOne) {
  const TruncatedPowerLaw law(1.5, 0.01, 10);
  double total = 0;
  for (std::int64_t x = 10; x < 100000; ++x) total += law.pmf(x);
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(law.pmf(9), 0.0);
}

TEST(TruncatedPowerLaw, CdfMatchesBruteForceSum) {
  for (auto [alpha, lambda, x_min] : {std::tuple{1.146, 0.006, 16.0}, std::tuple{2.5, 0.0, 3.0},
                                      std::tuple{1.8, 0.02, 1.0}}) {
    const TruncatedPowerLaw law(alpha, lambda, x_min);
    // Independent normalization over the test's own support.
    double z = 0;
    for (double x = x_min; x <= 1e5; ++x) z += std::pow(x, -alpha) * std::exp(-lambda * x);
    double acc = 0;
    for (double x = x_min; x <= 2000; ++x) {
      acc += std::pow(x, -alpha) * std::exp(-lambda * x) / z;
      if (static_cast<int>(x) % 97 == 0) {
        EXPECT_NEAR(law.cdf(x), acc, 1e-3) << "x=" << x;
      }
    }
  }
}

TEST(TruncatedPowerLaw, CdfMonotoneAndBounded) {
  const TruncatedPowerLaw law(1.146, 0.006, 16);
  EXPECT_EQ(law.cdf(15), 0.0);
  EXPECT_EQ(law.cdf(-3), 0.0);
  double prev = 0;
  for (double x = 16; x < 5000; x += 7) {
    const double c = law.cdf(x);
    EXPECT_GE(c, prev);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
}

TEST(FitTruncatedPowerLaw, RecoversKnownParameters) {
  const auto samples = sample_power_law(1.5, 0.01, 10, 10000, 2024);
  const PowerLawFit fit = fit_truncated_power_law(samples);
  EXPECT_NEAR(fit.alpha, 1.5, 0.1);
  EXPECT_EQ(fit.x_min, 10);
  EXPECT_NEAR(fit.lambda, 0.01, 0.005);
  EXPECT_NEAR(fit.c, normalization_constant(fit.alpha, fit.x_min), 1e-12);
  EXPECT_GT(fit.tail_count, 0u);
}

TEST(FitTruncatedPowerLaw, PurePowerLawWhenCutoffDisabled) {
  const auto samples = sample_power_law(2.5, 0.0, 1, 5000, 9);
  FitOptions options;
  options.lambda_max = 0.0;
  const PowerLawFit fit = fit_truncated_power_law(samples, options);
  EXPECT_EQ(fit.lambda, 0.0);
  EXPECT_NEAR(fit.alpha, 2.5, 0.15);
}

TEST(FitTruncatedPowerLaw, RejectsTooFewSamples) {
  std::vector<std::int64_t> few{1, 2, 3, 4, 5};
  try {
    fit_truncated_power_law(few);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_EQ(e.kind(), FitError::Kind::insufficient_data);
  }
}

TEST(FitTruncatedPowerLaw, RejectsDegenerateSamples) {
  std::vector<std::int64_t> same(500, 7);
  try {
    fit_truncated_power_law(same);
    FAIL() << "expected FitError";
  } catch (const FitError& e) {
    EXPECT_EQ(e.kind(), FitError::Kind::degenerate_samples);
  }
}

TEST(FitTruncatedPowerLaw, RejectsNonPositiveSamples) {
  auto samples = sample_power_law(2.0, 0.0, 1, 200, 3);
  samples[17] = 0;
  EXPECT_THROW(fit_truncated_power_law(samples), FitError);
}

TEST(FitTruncatedPowerLaw, Deterministic) {
  const auto samples = sample_power_law(1.8, 0.005, 5, 3000, 11);
  EXPECT_EQ(fit_truncated_power_law(samples), fit_truncated_power_law(samples));
}
