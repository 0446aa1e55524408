#include <gtest/gtest.h>

#include <random>

#include "diqss/entropy.hpp"
#include "diqss/errors.hpp"
#include "diqss/keyrate.hpp"
#include "support/oracles.hpp"

using namespace diqss;

namespace {

double h2(double x) { return x <= 0 || x >= 1 ? 0.0 : -x * std::log2(x) - (1 - x) * std::log2(1 - x); }

}  // namespace

TEST(BinaryEntropy, KnownValues) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(1.0), 0.0);
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_NEAR(binary_entropy(0.11), 0.4999157, 1e-6);
  EXPECT_THROW(binary_entropy(1.2), UsageError);
}

TEST(GBound, ReducesToPlainBoundWithoutPreprocessing) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(g_bound_q(x, 0.0), g_bound(x), 1e-14);
    EXPECT_NEAR(g_bound(x), 1.0 - h2(0.5 + 0.5 * x), 1e-14);
    const double q = 0.5 * u(rng);
    const double inner = std::sqrt((1 - 2 * q) * (1 - 2 * q) + 4 * q * (1 - q) * x * x);
    EXPECT_NEAR(g_bound_q(x, q), 1.0 + h2(0.5 + 0.5 * inner) - h2(0.5 + 0.5 * x), 1e-14);
  }
  EXPECT_NEAR(g_bound(1.0), 1.0, 1e-15);
  EXPECT_NEAR(g_bound(0.0), 0.0, 1e-15);
}

TEST(ComplementaryCorrelation, SingleBasisReduction) {
  // lambda = 1 gives S^2/4 - 1 over a 512-point grid
  for (int i = 0; i < 512; ++i) {
    const double S = 2.0 + (kTsirelson - 2.0) * i / 511.0;
    EXPECT_NEAR(min_complementary_correlation(S, 1.0).squared, S * S / 4.0 - 1.0, 1e-5) << "S=" << S;
  }
}

TEST(ComplementaryCorrelation, EndpointsAndValidation) {
  EXPECT_EQ(min_complementary_correlation(2.0, 0.3).squared, 0.0);
  EXPECT_EQ(min_complementary_correlation(1.5, 0.3).squared, 0.0);
  EXPECT_NEAR(min_complementary_correlation(kTsirelson, 0.3).squared, 1.0, 1e-12);
  EXPECT_THROW(min_complementary_correlation(2.4, 1.5), UsageError);
  EXPECT_THROW(min_complementary_correlation(std::nan(""), 0.5), UsageError);
}

TEST(ComplementaryCorrelation, WitnessIsFeasibleAndAttainsValue) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 120; ++i) {
    const double S = 2.0 + 1e-3 + (kTsirelson - 2.0 - 2e-3) * u(rng);
    const double lambda = u(rng);
    const auto r = min_complementary_correlation(S, lambda);
    EXPECT_TRUE(r.witness.feasible(S, 1e-8)) << "S=" << S << " lambda=" << lambda;
    EXPECT_NEAR(r.witness.objective(lambda), r.squared, 1e-9);
    EXPECT_GE(r.squared, 0.0);
    EXPECT_LE(r.squared, 1.0);
  }
}

TEST(ComplementaryCorrelation, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double S = 2.02 + 0.8 * u(rng);
    const double lambda = u(rng);
    EXPECT_NEAR(min_complementary_correlation(S, lambda).squared, oracle::brute_force_E2(S, lambda),
                1e-4)
        << "S=" << S << " lambda=" << lambda;
  }
}

TEST(ComplementaryCorrelation, MonotoneInS) {
  for (double lambda : {0.5, 0.7, 0.9, 1.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double S = 2.0 + (kTsirelson - 2.0) * i / 100.0;
      const double v = min_complementary_correlation(S, lambda).squared;
      EXPECT_GE(v, prev - 1e-9);
      prev = v;
    }
  }
}

TEST(HalfWeight, KnownValues) {
  EXPECT_NEAR(min_complementary_correlation(2.4, 0.5).squared, 0.57345, 5e-5);
  EXPECT_NEAR(min_complementary_correlation(2.2, 0.5).squared, 0.30557, 5e-5);
}

TEST(HalfWeight, AnalyticRootAgreesWithSolver) {
  for (int i = 1; i <= 60; ++i) {
    const double S = 2.0 + (kTsirelson - 2.0) * i / 61.0;
    const HalfWeightRoot r = half_weight_analytic(S);
    EXPECT_NEAR(r.squared, min_complementary_correlation(S, 0.5).squared, 1e-4) << "S=" << S;
    EXPECT_GE(r.cos_phi, -1.0);
    EXPECT_LE(r.cos_phi, 1.0);
  }
  EXPECT_THROW(half_weight_analytic(2.0), UsageError);
}

TEST(Envelope, LowerConvexHull) {
  const std::vector<double> xs{0, 1, 2, 3, 4};
  const std::vector<double> ys{0, 2, 1, 3, 2};
  const auto e = lower_convex_envelope(xs, ys);
  const std::vector<double> want{0, 0.5, 1, 1.5, 2};
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(e[i], want[i], 1e-15);
  EXPECT_THROW(lower_convex_envelope({0, 0}, {1, 1}), UsageError);
  EXPECT_THROW(lower_convex_envelope({0, 1}, {1}), UsageError);
}

TEST(Envelope, RandomizedHullProperties) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 100; ++c) {
    const std::size_t n = 3 + rng() % 40;
    std::vector<double> xs(n), ys(n);
    double x = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x += 0.1 + std::abs(u(rng));
      xs[i] = x;
      ys[i] = u(rng);
    }
    const auto e = lower_convex_envelope(xs, ys);
    EXPECT_NEAR(e.front(), ys.front(), 1e-14);
    EXPECT_NEAR(e.back(), ys.back(), 1e-14);
    for (std::size_t i = 0; i < n; ++i) EXPECT_LE(e[i], ys[i] + 1e-12);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double w = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
      EXPECT_LE(e[i], (1 - w) * e[i - 1] + w * e[i + 1] + 1e-12);
    }
  }
}

TEST(EntropyBound, SpotValues) {
  EXPECT_NEAR(bound_for(1.0, 0.0)(2.4), 0.346, 0.002);
  EXPECT_NEAR(bound_for(0.5, 0.0)(2.4), 0.467, 0.002);
}

TEST(EntropyBound, ConvexityProperty) {
  const auto r = oracle::bound_convexity(120, 31);
  EXPECT_GE(r.cases, 100);
  EXPECT_EQ(r.failures, 0) << r.first_failure;
}

TEST(EntropyBound, ShapeAndValidation) {
  const EntropyBound b = EntropyBound::build(0.8, 0.1, 64);
  EXPECT_EQ(b.resolution(), 64u);
  EXPECT_TRUE(b.convexified());
  EXPECT_NEAR(b.S().front(), 2.0, 1e-15);
  EXPECT_NEAR(b.S().back(), kTsirelson, 1e-15);
  EXPECT_NEAR(b(1.0), b.H().front(), 0.0);
  EXPECT_NEAR(b(3.0), b.H().back(), 0.0);
  EXPECT_THROW(EntropyBound::build(0.8, 0.1, 16), UsageError);
  EXPECT_THROW(EntropyBound::build(0.8, 0.7), UsageError);
  EXPECT_THROW(EntropyBound::build(-0.1, 0.0), UsageError);
}

TEST(EntropyBound, PreprocessingNeverLowersTheBound) {
  const EntropyBound plain = bound_for(0.5, 0.0, 128);
  for (double q : {0.1, 0.25, 0.4}) {
    const EntropyBound pre = bound_for(0.5, q, 128);
    for (std::size_t i = 0; i < plain.S().size(); ++i) EXPECT_GE(pre.raw_H()[i], plain.raw_H()[i] - 1e-12);
  }
}
