// Asymptotic key rate, thresholds and figure curves.

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "diqss/correlations.hpp"
#include "diqss/entropy.hpp"

namespace diqss {

struct ChannelParams {
  double alpha_db_per_km = 0.2;
  double eta_d = 0.98;  // detector
  double eta_c = 0.99;  // fibre coupling
  double L_km = 0.0;    // source to each user

  void validate() const;
  // 10^(-alpha L / 10)
  double transmission() const;
  double global_efficiency() const { return transmission() * eta_d * eta_c; }
};

// p^2 + (1-p)^2: fraction of rounds landing in a matched key combination
// (given Bob chose B1).
double sifting_factor(double p);

// (p^2 + pbar^2) [H(S) - h(q + (1-2q) delta)], unclamped. `bound` must have
// been built for lambda(p) and q.
double key_rate_unclamped(double S, double delta, double p, double q, const EntropyBound& bound);

// Rate for the white-noise/loss channel where S = 2 sqrt2 (1 - 2 delta);
// negative values are reported as 0.
double key_rate(double delta, double p, double q, const EntropyBound& bound);

// Rate at fidelity F and global efficiency eta for a given no-click policy.
double key_rate_channel(double F, double eta, double p, double q, const EntropyBound& bound,
                        NoClickPolicy policy = NoClickPolicy::random_bit);

EntropyBound bound_for(double p, double q, std::size_t resolution = EntropyBound::kDefaultResolution);

// Largest delta in [0, 0.25] with a positive rate.
double noise_threshold(double p, double q,
                       std::size_t resolution = EntropyBound::kDefaultResolution);

// Smallest eta in [0.5, 1] with a positive rate at fidelity F.
double efficiency_threshold(double p, double q, double F,
                            NoClickPolicy policy = NoClickPolicy::random_bit,
                            std::size_t resolution = EntropyBound::kDefaultResolution);

struct DistanceResult {
  double link_km = 0.0;  // source-to-user fibre length
  double user_km = 0.0;  // between two users, sqrt(3) * link (equilateral layout)
  bool feasible = false;
  std::string diagnostic;
};

// Longest L in [0, 50] km with a positive rate at F = 1. channel.L_km is ignored.
DistanceResult max_distance(double p, double q, const ChannelParams& channel,
                            NoClickPolicy policy = NoClickPolicy::random_bit,
                            std::size_t resolution = EntropyBound::kDefaultResolution);

enum class CurveKind { rate_vs_qber, rate_vs_eta, rate_vs_L, entropy_vs_S };

// Accepts "rate-vs-qber", "rate_vs_qber", etc. Throws UsageError otherwise.
CurveKind parse_curve_kind(const std::string& name);
std::string curve_kind_name(CurveKind kind);

struct CurveParams {
  double p = 0.5;
  double q = 0.0;
  double F = 1.0;
  NoClickPolicy policy = NoClickPolicy::random_bit;
  ChannelParams channel;
  double x_min = -1.0;  // negative: use the kind's default range
  double x_max = -1.0;
  std::size_t samples = 201;
  std::size_t resolution = EntropyBound::kDefaultResolution;
};

struct RateCurve {
  std::string abscissa;  // "delta", "eta", "L_km" or "S"
  std::string ordinate;  // "r" or "H"
  std::string label;
  std::vector<std::pair<double, double>> points;
};

RateCurve curve(CurveKind kind, const CurveParams& params);

// Named comparison scenario.
struct Scenario {
  std::string name;
  double p;
  double q;
  NoClickPolicy policy;
  std::string note;
};

// baseline, noise-preprocessing, postselection, advanced-postselection,
// advanced-random-basis (q = 0.2).
const std::vector<Scenario>& distance_scenarios();

struct SeriesSpec {
  std::string label;
  CurveKind kind;
  CurveParams params;
  std::string note;
};

// Series sets "fig2" .. "fig6". Throws UsageError for unknown names.
std::vector<SeriesSpec> preset_series(const std::string& name);

}  // namespace diqss
