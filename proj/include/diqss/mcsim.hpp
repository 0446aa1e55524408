// Round-level Monte-Carlo simulation of the protocol: basis choice, outcome
// sampling, no-click coins, preprocessing flips, sifting, error estimation,
// Bell estimation and secret reconstruction.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "diqss/states.hpp"

namespace diqss {

struct SimConfig {
  std::uint64_t rounds = 1'000'000;
  NoiseParams noise;
  std::uint64_t seed = 1;
  double announce_fraction = 0.1;               // share of key rounds revealed to estimate the error rate
  std::array<double, 3> bob_probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::uint64_t block_rounds = 1 << 16;         // one RNG stream per block
  unsigned workers = 0;                         // 0: hardware concurrency

  void validate() const;
};

// Index of a basis combination in the 12-cell table: 6(i-1) + 2(j-1) + (k-1).
inline std::size_t combination_index(BasisTriple b) {
  return 6 * static_cast<std::size_t>(b.alice - 1) + 2 * static_cast<std::size_t>(b.bob - 1) +
         static_cast<std::size_t>(b.charlie - 1);
}
BasisTriple combination_of(std::size_t idx);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SimStats {
  std::uint64_t rounds = 0;
  std::array<std::uint64_t, 12> combination_counts{};
  std::uint64_t sifted_key_rounds = 0;   // A1B1C1 and A2B1C2
  std::uint64_t discarded_rounds = 0;    // A1B1C2 and A2B1C1
  std::uint64_t bell_rounds = 0;         // Bob chose B2 or B3
  std::uint64_t announced_rounds = 0;
  std::uint64_t announced_errors = 0;
  std::uint64_t key_errors = 0;          // over every sifted round, announced or not
  std::uint64_t reconstruction_failures = 0;  // unannounced rounds where K_A != K_B xor K_C
  // Bell tallies per Svetlichny term: rounds and sum of the signed product.
  std::array<std::uint64_t, 8> bell_counts{};
  std::array<std::int64_t, 8> bell_sums{};

  Estimate qber;         // from announced rounds
  Estimate S_ABC;
  Estimate S_effective;  // S_ABC / 2

  double sift_fraction() const {
    return rounds ? static_cast<double>(sifted_key_rounds) / static_cast<double>(rounds) : 0.0;
  }
};

// Deterministic in cfg (including seed); independent of cfg.workers.
SimStats run_simulation(const SimConfig& cfg);

struct ZScore {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double std_error = 0.0;  // from the model, not the sample
  double z = 0.0;
  bool zero_variance = false;  // z is 0 when observed == expected, else infinite
};

struct ModelComparison {
  std::vector<ZScore> scores;  // qber, S_effective, sift_fraction
  double max_abs_z() const;
};

// Compares the tallies to the closed-form postselected model for `noise`.
ModelComparison estimate_vs_model(const SimStats& stats, const NoiseParams& noise,
                                  double bob_key_probability = 1.0 / 3);

}  // namespace diqss
