#include "diqss/correlations.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "diqss/errors.hpp"

namespace diqss {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw UsageError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
}

}  // namespace

int charlie_bell_sign(int k) {
  if (k < 1 || k > 2) throw UsageError("Charlie basis must be 1 or 2");
  return k == 1 ? 1 : -1;
}

const std::array<SvetlichnyTerm, 8>& svetlichny_terms() {
  static const std::array<SvetlichnyTerm, 8> terms = {{
      // S_AB * c2
      {{1, 2, 2}, +1},
      {{2, 2, 2}, +1},
      {{1, 3, 2}, +1},
      {{2, 3, 2}, -1},
      // S'_AB * c1
      {{2, 3, 1}, +1},
      {{2, 2, 1}, +1},
      {{1, 3, 1}, +1},
      {{1, 2, 1}, -1},
  }};
  return terms;
}

double model_correlator(double F, double eta, BasisTriple bases) {
  const OutcomeDistribution dist = postselect(outcome_distribution(F, eta, bases));
  return charlie_bell_sign(bases.charlie) * dist.correlator();
}

BellReport chsh_pair(double F, double eta) {
  check_unit(F, "F");
  check_unit(eta, "eta");
  BellReport r;
  const auto& terms = svetlichny_terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const double v = terms[t].sign * model_correlator(F, eta, terms[t].bases);
    (t < 4 ? r.S_AB : r.S_AB_prime) += v;
  }
  r.S_ABC = r.S_AB + r.S_AB_prime;
  r.S_effective = 0.5 * r.S_ABC;

  const double closed_form = 2.0 * std::numbers::sqrt2 * F * eta * eta * eta;
  if (std::abs(r.S_effective - closed_form) > 1e-9)
    throw std::logic_error("Bell assembly disagrees with 2*sqrt(2)*F*eta^3");
  return r;
}

QberModel qber_model(double F, double eta, NoClickPolicy policy) {
  check_unit(F, "F");
  check_unit(eta, "eta");
  const double eta3 = eta * eta * eta;
  QberModel m;
  m.Q1 = 0.5 * (1.0 - F);
  m.Q2 = policy == NoClickPolicy::random_bit ? 0.5 * (1.0 - eta3) : 1.0 - eta3;
  m.delta = m.Q1 * eta3 + m.Q2;
  return m;
}

double preprocessed_qber(double delta, double q) {
  check_unit(delta, "delta");
  if (!(q >= 0.0 && q <= 0.5)) throw UsageError("q must be in [0,0.5]");
  return q + (1.0 - 2.0 * q) * delta;
}

bool qber_per_branch(int ghz_index, Sign sign, BasisTriple bases) {
  const bool key_basis = (bases == BasisTriple{1, 1, 1}) || (bases == BasisTriple{2, 1, 2});
  if (!key_basis) throw UsageError("branch error rates are defined for (1,1,1) and (2,1,2) only");
  const DensityMatrix branch = DensityMatrix::from_pure(ghz_state(ghz_index, sign));
  const double v = correlator(branch, alice_observable(bases.alice), bob_observable(bases.bob),
                              charlie_observable(bases.charlie));
  // every branch is an eigenstate of the key observable, so v is +-1
  return v < 0.0;
}

}  // namespace diqss
