// Protocol states and their measurement statistics.
//
// Loss is per-party and independent with one global efficiency eta; a lost
// photon yields the no-click outcome. Measurement settings:
//   Alice   A1 = sigma_x, A2 = sigma_y
//   Bob     B1 = sigma_x, B2 = -(sigma_x + sigma_y)/sqrt2, B3 = (sigma_x - sigma_y)/sqrt2
//   Charlie C1 = sigma_x, C2 = -sigma_y
// B2/B3 are only used in Bell-test rounds.

#pragma once

#include <array>
#include <cstdint>

#include "diqss/qmath.hpp"

namespace diqss {

struct NoiseParams {
  double F = 1.0;    // white-noise fidelity
  double eta = 1.0;  // global detection efficiency
  double p = 0.5;    // probability of A1 (Alice) and C1 (Charlie)
  double q = 0.0;    // Alice's preprocessing flip probability

  // Throws UsageError when any field is out of range.
  void validate() const;

  // Weight of the {A1 B1 C1} key combination among the two key combinations.
  double lambda() const { return lambda_of(p); }
  static double lambda_of(double p);
};

struct BasisTriple {
  int alice = 1;    // 1..2
  int bob = 1;      // 1..3
  int charlie = 1;  // 1..2

  void validate() const;
  bool operator==(const BasisTriple&) const = default;
};

ObservableXY alice_observable(int i);
ObservableXY bob_observable(int j);
ObservableXY charlie_observable(int k);

enum class Outcome : std::int8_t { plus = 0, minus = 1, none = 2 };

inline int outcome_value(Outcome o) {
  return o == Outcome::plus ? 1 : (o == Outcome::minus ? -1 : 0);
}

// Key bit encoding: +1 -> 0, -1 -> 1.
inline int key_bit(Outcome o) { return o == Outcome::minus ? 1 : 0; }

// K_A == K_B xor K_C
inline bool satisfies_key_rule(Outcome a, Outcome b, Outcome c) {
  return key_bit(a) == (key_bit(b) ^ key_bit(c));
}

// Joint distribution over {+1, -1, none}^3 for one basis combination.
class OutcomeDistribution {
 public:
  static constexpr std::size_t kCells = 27;

  explicit OutcomeDistribution(BasisTriple bases) : bases_(bases) { probs_.fill(0.0); }

  static std::size_t index(Outcome a, Outcome b, Outcome c) {
    return 9 * static_cast<std::size_t>(a) + 3 * static_cast<std::size_t>(b) +
           static_cast<std::size_t>(c);
  }
  static std::array<Outcome, 3> outcomes_of(std::size_t idx) {
    return {static_cast<Outcome>(idx / 9), static_cast<Outcome>((idx / 3) % 3),
            static_cast<Outcome>(idx % 3)};
  }

  const BasisTriple& bases() const { return bases_; }
  double prob(Outcome a, Outcome b, Outcome c) const { return probs_[index(a, b, c)]; }
  double& at(Outcome a, Outcome b, Outcome c) { return probs_[index(a, b, c)]; }
  const std::array<double, kCells>& cells() const { return probs_; }
  std::array<double, kCells>& cells() { return probs_; }

  double total() const;
  // Probability mass carried by outcomes containing at least one no-click.
  double no_click_mass() const;
  // P(a*b*c = +1) over detected-or-assigned outcomes (no-click cells ignored).
  double key_rule_probability() const;
  // E[a*b*c] with the no-click value counted as 0.
  double correlator() const;

 private:
  BasisTriple bases_;
  std::array<double, kCells> probs_;
};

// F |GHZ_1^+><GHZ_1^+| + (1-F)/8 * sum of the eight GHZ projectors.
DensityMatrix noisy_ghz(double F);

OutcomeDistribution outcome_distribution(double F, double eta, BasisTriple bases);

// Replaces every no-click by an independent fair +-1 coin.
OutcomeDistribution postselect(const OutcomeDistribution& dist);

}  // namespace diqss
