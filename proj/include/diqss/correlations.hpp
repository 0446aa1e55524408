// Bell polynomials and closed-form error-rate predictions of the noise model.

#pragma once

#include <array>

#include "diqss/states.hpp"

namespace diqss {

// How a no-click in a key round enters the error rate.
enum class NoClickPolicy {
  random_bit,        // replaced by a fair coin (postselection)
  counted_as_error,  // every key round with a missing click is an error
};

// In Bell-test rounds Charlie reports his C2 outcome with the opposite sign
// (the +sigma_y frame). C1 is reported as measured.
int charlie_bell_sign(int k);

struct SvetlichnyTerm {
  BasisTriple bases;
  int sign;
};

// The eight <a_i b_j c_k> terms of the Svetlichny polynomial, grouped as
// S_AB * c2 (first four) and S'_AB * c1 (last four).
const std::array<SvetlichnyTerm, 8>& svetlichny_terms();

struct BellReport {
  double S_AB = 0.0;        // <S_AB c2>: CHSH of Alice/Bob conditioned on Charlie's C2 outcome
  double S_AB_prime = 0.0;  // <S'_AB c1>: conditioned on Charlie's C1 outcome
  double S_ABC = 0.0;       // Svetlichny value, S_AB + S_AB_prime
  double S_effective = 0.0; // S_ABC / 2
};

// <a_i b_j c~_k> from the postselected model distribution.
double model_correlator(double F, double eta, BasisTriple bases);

// Assembles every Bell quantity from outcome distributions and checks
// S_effective against 2*sqrt(2)*F*eta^3.
BellReport chsh_pair(double F, double eta);

struct QberModel {
  double Q1 = 0.0;     // white noise, all photons detected
  double Q2 = 0.0;     // photon loss
  double delta = 0.0;  // total: Q1 * eta^3 + Q2
};

QberModel qber_model(double F, double eta, NoClickPolicy policy = NoClickPolicy::random_bit);

// q + (1 - 2q) * delta
double preprocessed_qber(double delta, double q);

// True when GHZ branch |GHZ_index^sign> breaks K_A = K_B xor K_C under a key
// basis combination; only (1,1,1) and (2,1,2) are accepted.
bool qber_per_branch(int ghz_index, Sign sign, BasisTriple bases);

}  // namespace diqss
