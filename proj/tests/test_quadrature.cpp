#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wtm/quadrature.hpp"

using namespace wtm;

TEST(Gauss, EightPointRuleIsExactThroughDegreeFifteen) {
  for (int d = 0; d <= 15; ++d) {
    const double got = quad::gauss([d](double x) { return std::pow(x, d); }, 0.5, 2.0, quad::kGauss8Nodes,
                                   quad::kGauss8Weights);
    const double want = (std::pow(2.0, d + 1) - std::pow(0.5, d + 1)) / (d + 1);
    EXPECT_NEAR(got, want, 1e-13 * want) << "degree " << d;
  }
}

TEST(Gauss, FourPointRuleIsExactThroughDegreeSeven) {
  for (int d = 0; d <= 7; ++d) {
    const double got = quad::gauss([d](double x) { return std::pow(x, d); }, -1.0, 3.0, quad::kGauss4Nodes,
                                   quad::kGauss4Weights);
    const double want = (std::pow(3.0, d + 1) - std::pow(-1.0, d + 1)) / (d + 1);
    EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::abs(want))) << "degree " << d;
  }
}

TEST(Adaptive, SmoothAndWideIntervals) {
  EXPECT_NEAR(quad::adaptive([](double x) { return std::exp(x); }, 0.0, 1.0), std::numbers::e - 1.0, 1e-14);
  EXPECT_NEAR(quad::adaptive([](double x) { return 1.0 / x; }, 1.0, 1e3), std::log(1e3), 1e-12);
  EXPECT_NEAR(quad::adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0), 2.0 / 3.0, 1e-10);
  EXPECT_EQ(quad::adaptive([](double) { return 1.0; }, 2.0, 2.0), 0.0);
}

TEST(Adaptive, HighPowerVanishingAtEndpointStaysCheap) {
  long calls = 0;
  const double got = quad::adaptive(
      [&](double x) {
        ++calls;
        return std::pow(std::max(0.0, 1.0 - x), 60.0);
      },
      0.0, 1.0);
  EXPECT_NEAR(got, 1.0 / 61.0, 1e-12);
  EXPECT_LT(calls, 20000);
}

TEST(Panels, ExponentialMoments) {
  EXPECT_NEAR(quad::panels([](double t) { return std::exp(-t); }), 1.0, 1e-13);
  EXPECT_NEAR(quad::panels([](double t) { return t * std::exp(-2.0 * t); }), 0.25, 1e-13);
  EXPECT_NEAR(quad::panels([](double t) { return std::exp(-t); }, 2.0), 1.0 - std::exp(-2.0), 1e-14);
}

TEST(Panels, NonDecayingIntegrandThrows) {
  EXPECT_THROW(quad::panels([](double) { return 1.0; }), NumericalFailure);
  EXPECT_THROW(quad::panels([](double t) { return std::exp(t); }), NumericalFailure);
}

TEST(PowerIntegral, ClosedForms) {
  EXPECT_NEAR(quad::power_integral(0.0, 2.0, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(quad::power_integral(1.0, std::exp(1.0), -1.0), 1.0, 1e-15);
  EXPECT_NEAR(quad::power_integral(2.0, INFINITY, -3.0), 0.125, 1e-16);
  EXPECT_EQ(quad::power_integral(3.0, 1.0, 2.0), 0.0);
}

TEST(PowerIntegral, NearlyEqualEndpointsKeepRelativeAccuracy) {
  const double a = 1.0;
  const double b = 1.0 + 1e-12;
  // x^2.5 integrated over a tiny interval is the width times the midpoint value.
  const double w = b - a;
  EXPECT_NEAR(quad::power_integral(a, b, 2.5) / w, std::pow(1.0 + 0.5 * w, 2.5), 1e-12);
}

TEST(PowerIntegral, NonIntegrableEndsThrow) {
  EXPECT_THROW(quad::power_integral(0.0, 1.0, -1.0), NumericalFailure);
  EXPECT_THROW(quad::power_integral(1.0, INFINITY, -1.0), NumericalFailure);
  EXPECT_THROW(quad::power_integral(1.0, INFINITY, 0.5), NumericalFailure);
}

TEST(PowerIntegralProperty, AdditiveOverSubintervals) {
  wtm::testing::Gen g(11);
  for (int i = 0; i < 300; ++i) {
    const double a = g.log_uniform(1e-4, 10.0);
    const double b = a * (1.0 + g.log_uniform(1e-6, 10.0));
    const double c = b * (1.0 + g.log_uniform(1e-6, 10.0));
    const double e = g.uniform(-3.0, 3.0);
    const double whole = quad::power_integral(a, c, e);
    EXPECT_NEAR(quad::power_integral(a, b, e) + quad::power_integral(b, c, e), whole, 1e-12 * std::abs(whole));
  }
}

TEST(AdaptiveProperty, MatchesPowerIntegral) {
  wtm::testing::Gen g(12);
  for (int i = 0; i < 100; ++i) {
    const double a = g.log_uniform(1e-3, 10.0);
    const double b = a * (1.0 + g.log_uniform(1e-3, 1e3));
    const double e = g.uniform(-2.5, 4.0);
    const double want = quad::power_integral(a, b, e);
    EXPECT_NEAR(quad::adaptive([e](double x) { return std::pow(x, e); }, a, b), want, 1e-11 * want);
  }
}
