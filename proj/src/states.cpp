#include "diqss/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "diqss/errors.hpp"

namespace diqss {

namespace {

constexpr std::array<Outcome, 3> kAll = {Outcome::plus, Outcome::minus, Outcome::none};

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw UsageError(std::string(name) + " must be in [0,1], got " + std::to_string(v));
}

// Projector onto outcome o of a +-1 observable; identity for a lost photon.
Matrix outcome_operator(const ObservableXY& obs, Outcome o) {
  const Matrix id = identity(2);
  switch (o) {
    case Outcome::plus: return 0.5 * (id + obs.matrix());
    case Outcome::minus: return 0.5 * (id - obs.matrix());
    case Outcome::none: return id;
  }
  return id;
}

}  // namespace

void NoiseParams::validate() const {
  check_unit(F, "F");
  check_unit(eta, "eta");
  check_unit(p, "p");
  if (!(q >= 0.0 && q <= 0.5)) throw UsageError("q must be in [0,0.5], got " + std::to_string(q));
}

double NoiseParams::lambda_of(double p) {
  check_unit(p, "p");
  const double a = p * p;
  const double b = (1.0 - p) * (1.0 - p);
  return a / (a + b);
}

void BasisTriple::validate() const {
  if (alice < 1 || alice > 2) throw UsageError("Alice basis must be 1 or 2");
  if (bob < 1 || bob > 3) throw UsageError("Bob basis must be 1, 2 or 3");
  if (charlie < 1 || charlie > 2) throw UsageError("Charlie basis must be 1 or 2");
}

ObservableXY alice_observable(int i) {
  if (i < 1 || i > 2) throw UsageError("Alice basis must be 1 or 2");
  return {i == 1 ? 0.0 : std::numbers::pi / 2};
}

ObservableXY bob_observable(int j) {
  switch (j) {
    case 1: return {0.0};
    case 2: return {-3.0 * std::numbers::pi / 4};
    case 3: return {-std::numbers::pi / 4};
    default: throw UsageError("Bob basis must be 1, 2 or 3");
  }
}

ObservableXY charlie_observable(int k) {
  if (k < 1 || k > 2) throw UsageError("Charlie basis must be 1 or 2");
  return {k == 1 ? 0.0 : -std::numbers::pi / 2};
}

double OutcomeDistribution::total() const {
  double t = 0.0;
  for (double v : probs_) t += v;
  return t;
}

double OutcomeDistribution::no_click_mass() const {
  double t = 0.0;
  for (std::size_t i = 0; i < kCells; ++i) {
    const auto o = outcomes_of(i);
    if (o[0] == Outcome::none || o[1] == Outcome::none || o[2] == Outcome::none) t += probs_[i];
  }
  return t;
}

double OutcomeDistribution::key_rule_probability() const {
  double t = 0.0;
  for (std::size_t i = 0; i < kCells; ++i) {
    const auto o = outcomes_of(i);
    if (o[0] == Outcome::none || o[1] == Outcome::none || o[2] == Outcome::none) continue;
    if (satisfies_key_rule(o[0], o[1], o[2])) t += probs_[i];
  }
  return t;
}

double OutcomeDistribution::correlator() const {
  double t = 0.0;
  for (std::size_t i = 0; i < kCells; ++i) {
    const auto o = outcomes_of(i);
    t += probs_[i] * outcome_value(o[0]) * outcome_value(o[1]) * outcome_value(o[2]);
  }
  return t;
}

DensityMatrix noisy_ghz(double F) {
  check_unit(F, "F");
  Matrix white = Matrix::Zero(8, 8);
  for (int idx = 1; idx <= 4; ++idx) {
    white += ghz_state(idx, Sign::plus).projector();
    white += ghz_state(idx, Sign::minus).projector();
  }
  const Matrix target = ghz_state(1, Sign::plus).projector();
  return DensityMatrix(F * target + (1.0 - F) / 8.0 * white);
}

OutcomeDistribution outcome_distribution(double F, double eta, BasisTriple bases) {
  check_unit(eta, "eta");
  bases.validate();
  const DensityMatrix rho = noisy_ghz(F);
  const ObservableXY oa = alice_observable(bases.alice);
  const ObservableXY ob = bob_observable(bases.bob);
  const ObservableXY oc = charlie_observable(bases.charlie);

  auto weight = [eta](Outcome o) { return o == Outcome::none ? 1.0 - eta : eta; };

  OutcomeDistribution dist(bases);
  for (Outcome a : kAll)
    for (Outcome b : kAll)
      for (Outcome c : kAll) {
        const double w = weight(a) * weight(b) * weight(c);
        if (w == 0.0) continue;
        const Matrix op = tensor3(outcome_operator(oa, a), outcome_operator(ob, b),
                                  outcome_operator(oc, c));
        // Born probabilities can come out at -1e-17; keep them non-negative.
        dist.at(a, b, c) = w * std::max(0.0, expectation(rho, op));
      }
  return dist;
}

OutcomeDistribution postselect(const OutcomeDistribution& dist) {
  OutcomeDistribution out(dist.bases());
  for (std::size_t i = 0; i < OutcomeDistribution::kCells; ++i) {
    const double mass = dist.cells()[i];
    if (mass == 0.0) continue;
    const auto o = OutcomeDistribution::outcomes_of(i);
    // each no-click party spreads its mass evenly over +1 and -1
    int lost = 0;
    for (Outcome x : o) lost += x == Outcome::none;
    const double share = mass / static_cast<double>(1 << lost);
    for (Outcome a : {Outcome::plus, Outcome::minus}) {
      if (o[0] != Outcome::none && o[0] != a) continue;
      for (Outcome b : {Outcome::plus, Outcome::minus}) {
        if (o[1] != Outcome::none && o[1] != b) continue;
        for (Outcome c : {Outcome::plus, Outcome::minus}) {
          if (o[2] != Outcome::none && o[2] != c) continue;
          out.at(a, b, c) += share;
        }
      }
    }
  }
  return out;
}

}  // namespace diqss
