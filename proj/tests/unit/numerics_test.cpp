#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "greedygraph/numerics.hpp"

using namespace greedygraph;

namespace {

const double kHalfRootPi = 0.5 * std::sqrt(std::acos(-1.0));

// 40-term Maclaurin series of erfi in long double.
long double erfi_series_oracle(long double x) {
  long double sum = 0.0L;
  long double power = x;  // x^{2j+1}
  long double fact = 1.0L;
  for (int j = 0; j < 40; ++j) {
    if (j > 0) fact *= j;
    sum += power / (fact * (2 * j + 1));
    power *= x * x;
  }
  return sum * 2.0L / std::sqrt(std::acos(-1.0L));
}

// exp(x^2)/(sqrt(pi) x) * sum_j (2j-1)!! / (2x^2)^j, truncated at the smallest term.
long double erfi_asymptotic_oracle(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int j = 1; j < 200; ++j) {
    const long double next = term * (2 * j - 1) / (2.0L * x * x);
    if (next > term) break;
    term = next;
    sum += term;
  }
  return std::exp(x * x) / (std::sqrt(std::acos(-1.0L)) * x) * sum;
}

}  // namespace

TEST(Erfi, ZeroAndOddness) {
  EXPECT_EQ(erfi(0.0), 0.0);
  for (double x : {0.1, 0.7, 2.5, 5.0, 8.0, 20.0}) EXPECT_EQ(erfi(-x), -erfi(x));
}

TEST(Erfi, MatchesSeriesOracleAtOne) {
  const long double expected = erfi_series_oracle(1.0L);
  EXPECT_LE(std::fabs((erfi(1.0) - expected) / expected), 1e-13);
}

TEST(Erfi, MatchesAsymptoticOracleAtTen) {
  const long double expected = erfi_asymptotic_oracle(10.0L);
  EXPECT_LE(std::fabs((erfi(10.0) - expected) / expected), 1e-10);
}

TEST(Erfi, SeriesOracleAgreesAcrossTheSwitchPoint) {
  for (double x : {2.0, 3.5, 5.0, 5.99, 6.0, 6.01}) {
    // The long double series stays accurate to about 1e-15 here.
    long double sum = 0.0L;
    long double term = x;
    for (int j = 0; j < 400; ++j) {
      sum += term / (2 * j + 1);
      term *= static_cast<long double>(x) * x / (j + 1);
    }
    const long double expected = sum * 2.0L / std::sqrt(std::acos(-1.0L));
    EXPECT_LE(std::fabs((erfi(x) - expected) / expected), 1e-13) << "x=" << x;
  }
}

TEST(Erfi, RejectsOutOfDomain) {
  EXPECT_THROW(erfi(151.0), DomainError);
  EXPECT_THROW(erfi(-151.0), DomainError);
  EXPECT_THROW(erfi(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(erfi(30.0), DomainError);  // exp(900) overflows
  EXPECT_NO_THROW(erfi(26.0));
}

TEST(PhiBig, ZeroAndExactInversePair) {
  EXPECT_EQ(phi_big(0.0), 0.0);
  EXPECT_NEAR(phi_big(kHalfRootPi * erfi(1.0)), 1.0, 1e-12);
}

TEST(PhiBig, InversePairOnRandomPoints) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  for (int t = 0; t < 1000; ++t) {
    const double x = dist(gen);
    EXPECT_LE(std::fabs(kHalfRootPi * erfi(phi_big(x)) - x), 1e-12 * std::max(1.0, x)) << "x=" << x;
  }
}

TEST(PhiBig, DerivativeIsPhiSmall) {
  const double h = 1e-6;
  for (int j = 0; j < 100; ++j) {
    const double x = 0.05 + 0.2 * j;
    const double slope = (phi_big(x + h) - phi_big(x)) / h;
    EXPECT_NEAR(slope, phi_small(x), h + 1e-8) << "x=" << x;
  }
}

TEST(PhiBig, StrictlyIncreasing) {
  double prev = phi_big(0.0);
  for (int j = 1; j <= 500; ++j) {
    const double cur = phi_big(0.1 * j);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(PhiBig, AsymptoticRatioAtOneMillion) {
  const double x = 1e6;
  const double ratio = phi_big(x) / std::sqrt(std::log(x));
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

TEST(PhiBig, AsymptoticRatioApproachesOne) {
  double prev = std::numeric_limits<double>::infinity();
  for (double x : {1e3, 1e6, 1e12, 1e50, 1e200}) {
    const double ratio = phi_big(x) / std::sqrt(std::log(x));
    EXPECT_GT(ratio, 1.0);
    EXPECT_LT(ratio, prev);
    prev = ratio;
  }
  EXPECT_LT(prev, 1.01);
}

TEST(PhiSmall, DefinitionAndRange) {
  EXPECT_EQ(phi_small(0.0), 1.0);
  EXPECT_NEAR(phi_small(kHalfRootPi * erfi(1.0)), std::exp(-1.0), 1e-12);
  double prev = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double x = 0.25 * j;
    const double v = phi_small(x);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    EXPECT_EQ(v, std::exp(-phi_big(x) * phi_big(x)));
    prev = v;
  }
  const double x = 1e6;
  const double second = phi_small(x) * 2.0 * x * std::sqrt(std::log(x));
  EXPECT_GE(second, 0.9);
  EXPECT_LE(second, 1.1);
}

TEST(RoundContext, DerivedQuantities) {
  const RoundContext ctx = RoundContext::make(1000000, 0.1);
  EXPECT_EQ(ctx.k(), 3U);
  EXPECT_EQ(ctx.total_rounds(), 9U);
  EXPECT_DOUBLE_EQ(ctx.delta() * std::sqrt(static_cast<double>(ctx.total_rounds())), 1.0);
  EXPECT_EQ(RoundContext::make(100, 0.2).k(), 2U);
  EXPECT_EQ(RoundContext::make(5000, 0.1).k(), 2U);
  EXPECT_EQ(RoundContext::make(500, 0.1).k(), 1U);
  EXPECT_EQ(ctx.at_round(4).round(), 4U);
  EXPECT_THROW(ctx.at_round(10), std::out_of_range);
  EXPECT_THROW(ctx.Phi_at(10), std::out_of_range);
}

TEST(RoundContext, RejectsBadParameters) {
  EXPECT_THROW(RoundContext::make(2, 0.1), std::invalid_argument);
  EXPECT_THROW(RoundContext::make(100, 0.0), std::invalid_argument);
  EXPECT_THROW(RoundContext::make(100, 0.5), std::invalid_argument);
}

TEST(FloorPower, ExactAtIntegerBoundaries) {
  EXPECT_EQ(floor_power(1000, 1.0 / 3.0), 10U);
  EXPECT_EQ(floor_power(8, 1.0 / 3.0), 2U);
  EXPECT_EQ(floor_power(1000000, 0.5), 1000U);
  EXPECT_EQ(floor_power(999999, 0.5), 999U);
  EXPECT_EQ(floor_power(1024, 0.1), 2U);
  EXPECT_EQ(floor_power(1023, 0.1), 1U);
}

TEST(ErrorWindow, InitialValues) {
  const RoundContext ctx = RoundContext::make(5000, 0.1);
  const ErrorWindow w = error_window(ctx);
  EXPECT_DOUBLE_EQ(w.gamma, ctx.delta() * ctx.delta());
  EXPECT_NEAR(w.Gamma / std::pow(5000.0, -3.0), 1.0, 1e-12);
}

TEST(ErrorWindow, RecursionAndBounds) {
  for (auto [n, eps] : {std::pair<std::uint64_t, double>{5000, 0.1}, {1000000, 0.1}, {100000, 0.25}}) {
    const RoundContext ctx = RoundContext::make(n, eps);
    for (std::uint64_t i = 0; i < ctx.total_rounds(); ++i) {
      EXPECT_DOUBLE_EQ(ctx.Gamma_at(i + 1) / ctx.Gamma_at(i), 1.0 + 10.0 * ctx.gamma_at(i));
      EXPECT_GE(ctx.Gamma_at(i + 1), ctx.Gamma_at(i));
      const double Phi = ctx.Phi_at(i);
      const double phi = ctx.phi_at(i);
      EXPECT_DOUBLE_EQ(ctx.gamma_at(i), std::max(ctx.delta() * Phi * phi, ctx.delta() * ctx.delta() * phi * phi));
    }
    const double last = ctx.Gamma_at(ctx.total_rounds());
    EXPECT_GE(last, std::pow(static_cast<double>(n), -30.0 * eps));
    EXPECT_LE(last, std::pow(static_cast<double>(n), -10.0 * eps));
    EXPECT_EQ(error_window(ctx.at_round(2)).Gamma, ctx.Gamma_at(2));
  }
}

TEST(ErrorWindow, GammaDecaysLikeInverseRound) {
  const RoundContext ctx = RoundContext::make(1000000, 0.1);
  const double n = static_cast<double>(ctx.n());
  const double start = std::log(std::log(n)) / ctx.delta();
  for (std::uint64_t i = 1; i <= ctx.total_rounds(); ++i) {
    if (static_cast<double>(i) < start) continue;
    EXPECT_LE(ctx.gamma_at(i), 0.6 / static_cast<double>(i)) << "i=" << i;
  }
}

TEST(ErrorWindow, InverseRoundScalingStaysBounded) {
  // i * gamma(i) tends to 1/2 only very slowly; over realistic rounds it stays
  // below 0.65 once the process is past its first unit of time.
  const RoundContext ctx = RoundContext::make(1000000000000ULL, 0.2);
  for (std::uint64_t i = ctx.k(); i <= ctx.total_rounds(); ++i) {
    EXPECT_LE(static_cast<double>(i) * ctx.gamma_at(i), 0.65) << "i=" << i;
  }
}

TEST(Varphi, TelescopesToPhi) {
  const RoundContext ctx = RoundContext::make(1000000, 0.1);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < ctx.total_rounds(); ++i) {
    const double v = varphi(ctx, i);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    sum += ctx.delta() * v;
  }
  EXPECT_NEAR(sum, ctx.Phi_at(ctx.total_rounds()), 1e-10);
  EXPECT_NEAR(varphi(ctx, 0), ctx.Phi_at(1) / ctx.delta(), 1e-15);
  EXPECT_THROW(varphi(ctx, ctx.total_rounds()), std::out_of_range);
}

TEST(Varphi, PlacementIdentityForTwoEdges) {
  const RoundContext ctx = RoundContext::make(100000, 0.25);
  double double_sum = 0.0;
  const std::uint64_t I = ctx.total_rounds();
  for (std::uint64_t a = 0; a < I; ++a) {
    for (std::uint64_t b = 0; b < I; ++b) double_sum += varphi(ctx, a) * varphi(ctx, b);
  }
  const double Phi = ctx.Phi_at(I);
  EXPECT_NEAR(ctx.delta() * ctx.delta() * double_sum, Phi * Phi, 1e-10);
}
