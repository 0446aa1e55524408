#include <gtest/gtest.h>

#include <random>

#include "diqss/errors.hpp"
#include "diqss/states.hpp"
#include "support/oracles.hpp"

using namespace diqss;

namespace {

std::vector<BasisTriple> all_combinations() {
  std::vector<BasisTriple> out;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 2; ++k) out.push_back({i, j, k});
  return out;
}

}  // namespace

TEST(NoiseParams, Validation) {
  EXPECT_NO_THROW((NoiseParams{1.0, 1.0, 0.5, 0.0}.validate()));
  EXPECT_THROW((NoiseParams{1.1, 1.0, 0.5, 0.0}.validate()), UsageError);
  EXPECT_THROW((NoiseParams{1.0, -0.1, 0.5, 0.0}.validate()), UsageError);
  EXPECT_THROW((NoiseParams{1.0, 1.0, 1.5, 0.0}.validate()), UsageError);
  EXPECT_THROW((NoiseParams{1.0, 1.0, 0.5, 0.6}.validate()), UsageError);
}

TEST(NoiseParams, Lambda) {
  EXPECT_DOUBLE_EQ(NoiseParams::lambda_of(1.0), 1.0);
  EXPECT_DOUBLE_EQ(NoiseParams::lambda_of(0.5), 0.5);
  EXPECT_NEAR(NoiseParams::lambda_of(0.8), 0.64 / 0.68, 1e-15);
}

TEST(KeyRule, EncodingAndParity) {
  EXPECT_EQ(key_bit(Outcome::plus), 0);
  EXPECT_EQ(key_bit(Outcome::minus), 1);
  for (Outcome a : {Outcome::plus, Outcome::minus})
    for (Outcome b : {Outcome::plus, Outcome::minus})
      for (Outcome c : {Outcome::plus, Outcome::minus})
        EXPECT_EQ(satisfies_key_rule(a, b, c),
                  outcome_value(a) * outcome_value(b) * outcome_value(c) == 1);
}

TEST(OutcomeDistribution, IndexRoundTrip) {
  for (std::size_t i = 0; i < OutcomeDistribution::kCells; ++i) {
    const auto o = OutcomeDistribution::outcomes_of(i);
    EXPECT_EQ(OutcomeDistribution::index(o[0], o[1], o[2]), i);
  }
}

TEST(OutcomeDistribution, MatchesClosedFormOnRandomInputs) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto combos = all_combinations();
  for (int n = 0; n < 120; ++n) {
    const double F = u(rng), eta = u(rng);
    const BasisTriple b = combos[n % combos.size()];
    const OutcomeDistribution d = outcome_distribution(F, eta, b);
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
    for (std::size_t i = 0; i < OutcomeDistribution::kCells; ++i) {
      const auto o = OutcomeDistribution::outcomes_of(i);
      const double ref = oracle::ghz_prob(F, eta, oracle::angles_of(b),
                                          {outcome_value(o[0]), outcome_value(o[1]), outcome_value(o[2])});
      EXPECT_NEAR(d.cells()[i], ref, 1e-12) << "cell " << i;
    }
    EXPECT_NEAR(d.no_click_mass(), 1.0 - eta * eta * eta, 1e-12);
  }
}

TEST(OutcomeDistribution, NoiselessKeyCombinationsAlwaysSatisfyRule) {
  for (BasisTriple b : {BasisTriple{1, 1, 1}, BasisTriple{2, 1, 2}}) {
    const OutcomeDistribution d = outcome_distribution(1.0, 1.0, b);
    EXPECT_NEAR(d.key_rule_probability(), 1.0, 1e-12);
    EXPECT_NEAR(d.correlator(), 1.0, 1e-12);
  }
  // the discarded combinations are uncorrelated
  for (BasisTriple b : {BasisTriple{1, 1, 2}, BasisTriple{2, 1, 1}})
    EXPECT_NEAR(outcome_distribution(1.0, 1.0, b).correlator(), 0.0, 1e-12);
}

TEST(Postselect, RemovesNoClicksAndKeepsMass) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const double F = u(rng), eta = u(rng);
    const OutcomeDistribution d = postselect(outcome_distribution(F, eta, {1, 1, 1}));
    EXPECT_NEAR(d.total(), 1.0, 1e-12);
    EXPECT_NEAR(d.no_click_mass(), 0.0, 1e-15);
    // a fair coin on any lost photon kills the correlation of that branch
    EXPECT_NEAR(d.correlator(), F * eta * eta * eta, 1e-12);
  }
}

TEST(NoisyGhz, IsValidAndInterpolates) {
  const DensityMatrix a = noisy_ghz(1.0);
  EXPECT_NEAR((a.matrix() - ghz_state(1, Sign::plus).projector()).norm(), 0.0, 1e-14);
  const DensityMatrix b = noisy_ghz(0.0);
  EXPECT_NEAR((b.matrix() - identity(8) / 8.0).norm(), 0.0, 1e-14);
  EXPECT_THROW(noisy_ghz(1.2), UsageError);
}

TEST(Bases, Validation) {
  EXPECT_THROW((BasisTriple{3, 1, 1}.validate()), UsageError);
  EXPECT_THROW((BasisTriple{1, 4, 1}.validate()), UsageError);
  EXPECT_THROW((BasisTriple{1, 1, 0}.validate()), UsageError);
  EXPECT_THROW(bob_observable(0), UsageError);
  EXPECT_THROW(outcome_distribution(1.0, 1.0, {1, 1, 3}), UsageError);
}
