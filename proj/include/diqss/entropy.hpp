// Lower bound on Eve's conditional entropy H(A|E) as a function of the
// effective CHSH value S, for the two-basis key (mixing weight lambda) with
// optional noise preprocessing (flip probability q).

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace diqss {

inline constexpr double kTsirelson = 2.8284271247461903;  // 2*sqrt(2)

// Binary Shannon entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double x);

// h(1/2 + x/2)
double phi(double x);

// 1 - phi(x)
double g_bound(double x);

// 1 + phi(sqrt((1-2q)^2 + 4q(1-q)x^2)) - phi(x). Equals g_bound at q = 0.
double g_bound_q(double x, double q);

// Point of the qubit correlation problem:
//   s = sin(phi_A/2), c = cos(phi_A/2),
//   (E_XX, E_XY) = g (cos gamma, sin gamma), (E_YX, E_YY) = h (cos mu, sin mu),
//   delta = cos(gamma - mu).
struct QubitCorrelationVars {
  double s = 0.0;
  double c = 1.0;
  double g = 0.0;
  double h = 0.0;
  double delta = 0.0;

  // s^2 g^2 + c^2 h^2 + 2 (2 lambda - 1) s c g h delta
  double objective(double lambda) const;
  // All six constraints, each within tol.
  bool feasible(double S, double tol = 1e-9) const;
};

struct ComplementaryCorrelation {
  double squared = 0.0;  // smallest lambda-weighted squared correlation compatible with S
  QubitCorrelationVars witness;
};

// Minimum of the objective over all points with c g + s h >= S/2. Returns
// zero for S <= 2 (no certified secrecy) and one at S = 2*sqrt(2).
ComplementaryCorrelation min_complementary_correlation(double S, double lambda);

// Closed route for lambda = 1/2. The stationarity condition on the g = 1 face
// with x = cos(phi_A) is
//   4x(2-x) + 2(S^2+2) + S(x-5) sqrt(2(1+x)) = 0,
// and the squared correlation at a root is
//   (1-x)/2 + (1+x)(S/2 - sqrt((1+x)/2))^2 / (1-x).
// Throws InfeasibleError when no admissible root exists.
struct HalfWeightRoot {
  double cos_phi = 0.0;
  double squared = 0.0;
};
HalfWeightRoot half_weight_analytic(double S);

// Lower convex envelope of (xs[i], ys[i]) sampled back on xs. xs must be
// strictly increasing.
std::vector<double> lower_convex_envelope(const std::vector<double>& xs,
                                          const std::vector<double>& ys);

// Convexified H(S) on a uniform grid over [2, 2 sqrt 2]. Immutable.
class EntropyBound {
 public:
  static constexpr std::size_t kDefaultResolution = 512;

  // Throws UsageError for lambda outside [0,1], q outside [0,0.5] or
  // resolution < 32.
  static EntropyBound build(double lambda, double q,
                            std::size_t resolution = kDefaultResolution);

  double lambda() const { return lambda_; }
  double q() const { return q_; }
  bool convexified() const { return true; }
  std::size_t resolution() const { return S_.size(); }

  const std::vector<double>& S() const { return S_; }
  const std::vector<double>& H() const { return H_; }
  // The curve before taking the convex envelope.
  const std::vector<double>& raw_H() const { return raw_; }

  // Piecewise-linear evaluation; S is clamped to [2, 2 sqrt 2].
  double operator()(double S) const;

 private:
  EntropyBound() = default;

  double lambda_ = 0.0;
  double q_ = 0.0;
  std::vector<double> S_;
  std::vector<double> raw_;
  std::vector<double> H_;
};

// min_complementary_correlation(S, lambda).squared on the uniform S grid of
// the given resolution. Cached per (|2 lambda - 1|, resolution); thread safe.
const std::vector<double>& complementary_correlation_curve(double lambda,
                                                           std::size_t resolution);

}  // namespace diqss
