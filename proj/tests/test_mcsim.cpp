#include <gtest/gtest.h>

#include "diqss/correlations.hpp"
#include "diqss/errors.hpp"
#include "diqss/mcsim.hpp"

using namespace diqss;

namespace {

SimConfig config(double F, double eta, double p, double q, std::uint64_t rounds, std::uint64_t seed) {
  SimConfig c;
  c.noise = {F, eta, p, q};
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

bool same(const SimStats& a, const SimStats& b) {
  return a.combination_counts == b.combination_counts && a.sifted_key_rounds == b.sifted_key_rounds &&
         a.announced_rounds == b.announced_rounds && a.announced_errors == b.announced_errors &&
         a.key_errors == b.key_errors && a.reconstruction_failures == b.reconstruction_failures &&
         a.bell_counts == b.bell_counts && a.bell_sums == b.bell_sums;
}

}  // namespace

TEST(SimConfig, Validation) {
  SimConfig c;
  EXPECT_NO_THROW(c.validate());
  c.rounds = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = SimConfig{};
  c.announce_fraction = 1.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = SimConfig{};
  c.bob_probs = {0.5, 0.5, 0.5};
  EXPECT_THROW(c.validate(), UsageError);
  c = SimConfig{};
  c.noise.q = 0.7;
  EXPECT_THROW(run_simulation(c), UsageError);
}

TEST(Combination, IndexRoundTrip) {
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(combination_index(combination_of(i)), i);
  EXPECT_THROW(combination_of(12), UsageError);
}

TEST(Simulation, NoiselessRunHasNoErrors) {
  const SimStats s = run_simulation(config(1.0, 1.0, 0.5, 0.0, 1'000'000, 7));
  EXPECT_EQ(s.key_errors, 0u);
  EXPECT_EQ(s.announced_errors, 0u);
  EXPECT_EQ(s.reconstruction_failures, 0u);
  EXPECT_EQ(s.qber.value, 0.0);
  EXPECT_NEAR(s.S_ABC.value, 4 * std::sqrt(2.0), 3 * s.S_ABC.std_error);
}

TEST(Simulation, Accounting) {
  const SimStats s = run_simulation(config(0.9, 0.95, 0.7, 0.1, 300'001, 3));
  std::uint64_t sum = 0;
  for (auto n : s.combination_counts) sum += n;
  EXPECT_EQ(sum, s.rounds);
  EXPECT_EQ(s.sifted_key_rounds + s.discarded_rounds + s.bell_rounds, s.rounds);
  std::uint64_t bell = 0;
  for (auto n : s.bell_counts) bell += n;
  EXPECT_EQ(bell, s.bell_rounds);
  EXPECT_EQ(s.announced_rounds <= s.sifted_key_rounds, true);
  EXPECT_EQ(s.key_errors, s.announced_errors + s.reconstruction_failures);
}

TEST(Simulation, DeterministicAndIndependentOfWorkers) {
  SimConfig c = config(0.95, 0.97, 0.5, 0.2, 400'000, 99);
  c.block_rounds = 10'000;
  c.workers = 1;
  const SimStats a = run_simulation(c);
  const SimStats b = run_simulation(c);
  c.workers = 4;
  const SimStats d = run_simulation(c);
  EXPECT_TRUE(same(a, b));
  EXPECT_TRUE(same(a, d));
  c.seed = 100;
  EXPECT_FALSE(same(a, run_simulation(c)));
}

TEST(Simulation, DegenerateBasisChoice) {
  const SimStats s = run_simulation(config(1.0, 1.0, 1.0, 0.0, 100'000, 5));
  for (std::size_t i = 0; i < 12; ++i) {
    const BasisTriple b = combination_of(i);
    if (b.alice == 2 || b.charlie == 2) EXPECT_EQ(s.combination_counts[i], 0u);
  }
  // half of the Bell terms cannot be estimated: flagged, not fatal
  const ModelComparison m = estimate_vs_model(s, {1.0, 1.0, 1.0, 0.0});
  EXPECT_TRUE(std::isnan(s.S_effective.value));
  EXPECT_TRUE(m.scores[1].zero_variance);
  EXPECT_NEAR(m.scores[2].z, 0.0, 5.0);
}

TEST(Simulation, WhiteNoiseQber) {
  const SimStats s = run_simulation(config(0.96, 1.0, 0.5, 0.0, 1'000'000, 12));
  EXPECT_NEAR(s.qber.value, 0.02, 3 * s.qber.std_error);
}

TEST(Simulation, LossAndPreprocessingMatchModel) {
  const NoiseParams n{0.97, 0.93, 0.6, 0.25};
  SimConfig c = config(n.F, n.eta, n.p, n.q, 1'000'000, 21);
  const SimStats s = run_simulation(c);
  const double dq = preprocessed_qber(qber_model(n.F, n.eta).delta, n.q);
  EXPECT_NEAR(s.qber.value, dq, 3 * s.qber.std_error);
  EXPECT_NEAR(s.S_effective.value, 2 * std::sqrt(2.0) * n.F * std::pow(n.eta, 3),
              3 * s.S_effective.std_error);
}

TEST(ModelComparison, ZeroVarianceIsFlagged) {
  const SimStats s = run_simulation(config(1.0, 1.0, 0.5, 0.0, 50'000, 1));
  const ModelComparison m = estimate_vs_model(s, {1.0, 1.0, 0.5, 0.0});
  ASSERT_EQ(m.scores.size(), 3u);
  EXPECT_EQ(m.scores[0].name, "qber");
  EXPECT_TRUE(m.scores[0].zero_variance);
  EXPECT_EQ(m.scores[0].z, 0.0);
}

TEST(ModelComparison, DetectsMismatchedFidelity) {
  const SimStats s = run_simulation(config(0.9, 1.0, 0.5, 0.0, 1'000'000, 77));
  const ModelComparison m = estimate_vs_model(s, {1.0, 1.0, 0.5, 0.0});
  EXPECT_GT(std::abs(m.scores[0].z), 5.0);
}

TEST(ModelComparison, StatisticalContractOverSeeds) {
  // 200 seeded repetitions, 600 z-scores. At 3 sigma about 1.6 exceedances
  // are expected; the contract allows 1% of them.
  int exceed = 0;
  int total = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const NoiseParams n{0.95, 0.96, 0.5, 0.1};
    SimConfig c = config(n.F, n.eta, n.p, n.q, 200'000, 1000 + seed);
    const ModelComparison m = estimate_vs_model(run_simulation(c), n);
    for (const ZScore& z : m.scores) {
      ++total;
      exceed += std::abs(z.z) >= 3.0;
    }
  }
  EXPECT_EQ(total, 600);
  EXPECT_LE(exceed, 6);
}
