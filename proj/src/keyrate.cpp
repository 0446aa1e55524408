#include "diqss/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diqss/errors.hpp"

namespace diqss {

namespace {

constexpr double kBisectionTol = 1e-9;

// Largest x in [lo, hi] with positive(x), given positive(lo) && !positive(hi).
template <class Pred>
double last_positive(Pred&& positive, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? lo : hi) = mid;
  }
  return lo;
}

double tsirelson_scaled(double delta) { return kTsirelson * (1.0 - 2.0 * delta); }

double default_lo(CurveKind k) {
  switch (k) {
    case CurveKind::rate_vs_qber: return 0.0;
    case CurveKind::rate_vs_eta: return 0.9;
    case CurveKind::rate_vs_L: return 0.0;
    case CurveKind::entropy_vs_S: return 2.0;
  }
  return 0.0;
}

double default_hi(CurveKind k) {
  switch (k) {
    case CurveKind::rate_vs_qber: return 0.12;
    case CurveKind::rate_vs_eta: return 1.0;
    case CurveKind::rate_vs_L: return 1.0;
    case CurveKind::entropy_vs_S: return kTsirelson;
  }
  return 1.0;
}

std::string percent_label(double v) {
  return std::to_string(static_cast<int>(std::lround(v * 100.0)));
}

}  // namespace

void ChannelParams::validate() const {
  if (!(alpha_db_per_km >= 0.0 && std::isfinite(alpha_db_per_km)))
    throw UsageError("alpha must be a non-negative attenuation in dB/km");
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) throw UsageError("eta_d must be in [0,1]");
  if (!(eta_c >= 0.0 && eta_c <= 1.0)) throw UsageError("eta_c must be in [0,1]");
  if (!(L_km >= 0.0 && std::isfinite(L_km))) throw UsageError("L must be a non-negative length");
}

double ChannelParams::transmission() const {
  return std::pow(10.0, -alpha_db_per_km * L_km / 10.0);
}

double sifting_factor(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p must be in [0,1]");
  return p * p + (1.0 - p) * (1.0 - p);
}

double key_rate_unclamped(double S, double delta, double p, double q, const EntropyBound& bound) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw UsageError("delta must be in [0,1]");
  if (!(q >= 0.0 && q <= 0.5)) throw UsageError("q must be in [0,0.5]");
  if (std::abs(bound.lambda() - NoiseParams::lambda_of(p)) > 1e-12)
    throw UsageError("entropy bound was built for a different lambda than p implies");
  if (std::abs(bound.q() - q) > 1e-12)
    throw UsageError("entropy bound was built for a different q");
  return sifting_factor(p) * (bound(S) - binary_entropy(preprocessed_qber(delta, q)));
}

double key_rate(double delta, double p, double q, const EntropyBound& bound) {
  if (!(delta >= 0.0 && delta <= 0.5)) throw UsageError("delta must be in [0,0.5]");
  return std::max(0.0, key_rate_unclamped(tsirelson_scaled(delta), delta, p, q, bound));
}

namespace {

double channel_rate_unclamped(double F, double eta, double p, double q, const EntropyBound& bound,
                              NoClickPolicy policy) {
  const double S = kTsirelson * F * eta * eta * eta;
  const double delta = qber_model(F, eta, policy).delta;
  return key_rate_unclamped(S, std::min(delta, 1.0), p, q, bound);
}

}  // namespace

double key_rate_channel(double F, double eta, double p, double q, const EntropyBound& bound,
                        NoClickPolicy policy) {
  return std::max(0.0, channel_rate_unclamped(F, eta, p, q, bound, policy));
}

EntropyBound bound_for(double p, double q, std::size_t resolution) {
  return EntropyBound::build(NoiseParams::lambda_of(p), q, resolution);
}

double noise_threshold(double p, double q, std::size_t resolution) {
  const EntropyBound bound = bound_for(p, q, resolution);
  auto positive = [&](double d) {
    return key_rate_unclamped(tsirelson_scaled(d), d, p, q, bound) > 0.0;
  };
  if (!positive(0.0)) throw InfeasibleError("key rate is not positive even without noise");
  if (positive(0.25)) return 0.25;
  return last_positive(positive, 0.0, 0.25, kBisectionTol);
}

double efficiency_threshold(double p, double q, double F, NoClickPolicy policy,
                            std::size_t resolution) {
  if (!(F > 0.0 && F <= 1.0)) throw UsageError("F must be in (0,1]");
  const EntropyBound bound = bound_for(p, q, resolution);
  auto positive = [&](double eta) {
    return channel_rate_unclamped(F, eta, p, q, bound, policy) > 0.0;
  };
  if (!positive(1.0)) throw InfeasibleError("no positive key rate at eta = 1");
  if (positive(0.5)) return 0.5;
  // mirror so that the bisection helper can look for the last positive point
  const double t = last_positive([&](double x) { return positive(1.0 - x); }, 0.0, 0.5,
                                 kBisectionTol);
  return 1.0 - t;
}

DistanceResult max_distance(double p, double q, const ChannelParams& channel, NoClickPolicy policy,
                            std::size_t resolution) {
  channel.validate();
  const EntropyBound bound = bound_for(p, q, resolution);
  auto positive = [&](double L) {
    ChannelParams ch = channel;
    ch.L_km = L;
    return channel_rate_unclamped(1.0, ch.global_efficiency(), p, q, bound, policy) > 0.0;
  };
  DistanceResult out;
  if (!positive(0.0)) {
    out.diagnostic = "eta_d * eta_c is below the efficiency threshold; no positive rate at L = 0";
    return out;
  }
  constexpr double kMaxL = 50.0;
  out.feasible = true;
  out.link_km = positive(kMaxL) ? kMaxL : last_positive(positive, 0.0, kMaxL, 1e-7);
  out.user_km = std::sqrt(3.0) * out.link_km;
  return out;
}

CurveKind parse_curve_kind(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '_', '-');
  if (n == "rate-vs-qber") return CurveKind::rate_vs_qber;
  if (n == "rate-vs-eta") return CurveKind::rate_vs_eta;
  if (n == "rate-vs-L" || n == "rate-vs-l") return CurveKind::rate_vs_L;
  if (n == "entropy-vs-S" || n == "entropy-vs-s") return CurveKind::entropy_vs_S;
  throw UsageError("unknown curve kind '" + name + "'");
}

std::string curve_kind_name(CurveKind kind) {
  switch (kind) {
    case CurveKind::rate_vs_qber: return "rate-vs-qber";
    case CurveKind::rate_vs_eta: return "rate-vs-eta";
    case CurveKind::rate_vs_L: return "rate-vs-L";
    case CurveKind::entropy_vs_S: return "entropy-vs-S";
  }
  return "?";
}

RateCurve curve(CurveKind kind, const CurveParams& params) {
  if (params.samples < 2) throw UsageError("a curve needs at least two samples");
  params.channel.validate();
  if (!(params.F >= 0.0 && params.F <= 1.0)) throw UsageError("F must be in [0,1]");
  const double lo = params.x_min >= 0.0 ? params.x_min : default_lo(kind);
  const double hi = params.x_max >= 0.0 ? params.x_max : default_hi(kind);
  if (!(hi > lo)) throw UsageError("curve range is empty");

  const EntropyBound bound = bound_for(params.p, params.q, params.resolution);
  RateCurve out;
  out.points.reserve(params.samples);
  for (std::size_t i = 0; i < params.samples; ++i) {
    const double x =
        i + 1 == params.samples ? hi : lo + (hi - lo) * static_cast<double>(i) / (params.samples - 1);
    double y = 0.0;
    switch (kind) {
      case CurveKind::rate_vs_qber:
        if (x > 0.5) throw UsageError("delta must be in [0,0.5]");
        y = key_rate(x, params.p, params.q, bound);
        break;
      case CurveKind::rate_vs_eta:
        if (x > 1.0) throw UsageError("eta must be in [0,1]");
        y = key_rate_channel(params.F, x, params.p, params.q, bound, params.policy);
        break;
      case CurveKind::rate_vs_L: {
        ChannelParams ch = params.channel;
        ch.L_km = x;
        y = key_rate_channel(params.F, ch.global_efficiency(), params.p, params.q, bound,
                             params.policy);
        break;
      }
      case CurveKind::entropy_vs_S:
        y = bound(x);
        break;
    }
    out.points.emplace_back(x, y);
  }
  switch (kind) {
    case CurveKind::rate_vs_qber: out.abscissa = "delta"; break;
    case CurveKind::rate_vs_eta: out.abscissa = "eta"; break;
    case CurveKind::rate_vs_L: out.abscissa = "L_km"; break;
    case CurveKind::entropy_vs_S: out.abscissa = "S"; break;
  }
  out.ordinate = kind == CurveKind::entropy_vs_S ? "H" : "r";
  out.label = "p=" + percent_label(params.p) + "% q=" + percent_label(params.q) + "%";
  return out;
}

const std::vector<Scenario>& distance_scenarios() {
  static const std::vector<Scenario> scenarios = {
      {"baseline", 1.0, 0.0, NoClickPolicy::counted_as_error,
       "approximation: no-click key rounds counted as errors (no postselection)"},
      {"noise-preprocessing", 1.0, 0.2, NoClickPolicy::counted_as_error,
       "approximation: no-click key rounds counted as errors (no postselection)"},
      {"postselection", 1.0, 0.0, NoClickPolicy::random_bit, ""},
      {"advanced-postselection", 1.0, 0.2, NoClickPolicy::random_bit, ""},
      {"advanced-random-basis", 0.5, 0.2, NoClickPolicy::random_bit, ""},
  };
  return scenarios;
}

std::vector<SeriesSpec> preset_series(const std::string& name) {
  static const double kPs[] = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
  std::vector<SeriesSpec> out;
  auto add = [&](std::string label, CurveKind kind, double p, double q, NoClickPolicy policy,
                 std::string note = {}) {
    CurveParams cp;
    cp.p = p;
    cp.q = q;
    cp.policy = policy;
    out.push_back({std::move(label), kind, cp, std::move(note)});
  };
  if (name == "fig2") {
    for (double p : kPs)
      add("p=" + percent_label(p) + "%", CurveKind::entropy_vs_S, p, 0.0, NoClickPolicy::random_bit);
  } else if (name == "fig3") {
    for (double p : kPs)
      add("p=" + percent_label(p) + "%", CurveKind::rate_vs_qber, p, 0.0, NoClickPolicy::random_bit);
  } else if (name == "fig4") {
    for (double q : {0.0, 0.2, 0.4})
      for (double p : {1.0, 0.5})
        add("p=" + percent_label(p) + "% q=" + percent_label(q) + "%", CurveKind::rate_vs_qber, p, q,
            NoClickPolicy::random_bit);
  } else if (name == "fig5") {
    add("postselection", CurveKind::rate_vs_eta, 1.0, 0.0, NoClickPolicy::random_bit);
    add("advanced-postselection q=40%", CurveKind::rate_vs_eta, 1.0, 0.4, NoClickPolicy::random_bit);
    add("random-basis", CurveKind::rate_vs_eta, 0.5, 0.0, NoClickPolicy::random_bit);
    add("advanced-random-basis q=40%", CurveKind::rate_vs_eta, 0.5, 0.4, NoClickPolicy::random_bit);
  } else if (name == "fig6") {
    for (const Scenario& s : distance_scenarios())
      add(s.name, CurveKind::rate_vs_L, s.p, s.q, s.policy, s.note);
  } else {
    throw UsageError("unknown preset '" + name + "' (expected fig2..fig6)");
  }
  return out;
}

}  // namespace diqss
