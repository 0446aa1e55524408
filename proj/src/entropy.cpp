#include "diqss/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "diqss/errors.hpp"

namespace diqss {

namespace {

constexpr double kGoldenTol = 1e-10;
constexpr int kAngleGrid = 48;

struct Minimum {
  double x;
  double f;
};

// Golden-section search for a unimodal function on [a, b].
template <class Fn>
Minimum golden_min(Fn&& f, double a, double b, double tol = kGoldenTol) {
  constexpr double r = 0.6180339887498949;
  if (b - a <= tol) {
    const double m = 0.5 * (a + b);
    return {m, f(m)};
  }
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  Minimum best = f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
  // the minimum of a convex piece may sit on the bracket edge
  for (double edge : {a, b}) {
    const double fe = f(edge);
    if (fe < best.f) best = {edge, fe};
  }
  return best;
}

// Objective with delta already at its optimal boundary value, for g, h >= 0
// and s, c >= 0: the cross term enters with magnitude k * min(gh, sqrt(...)).
inline double reduced_objective(double s, double c, double k, double g, double h) {
  const double cross = std::min(g * h, std::sqrt(std::max(0.0, (1.0 - g * g) * (1.0 - h * h))));
  return s * s * g * g + c * c * h * h - k * cross;
}

double optimal_delta(double lambda, double g, double h) {
  const double gh = g * h;
  const double mag = gh > 0.0 ? std::min(1.0, std::sqrt(std::max(0.0, (1.0 - g * g) * (1.0 - h * h))) / gh)
                              : 1.0;
  const double w = 2.0 * lambda - 1.0;
  return w > 0.0 ? -mag : (w < 0.0 ? mag : 0.0);
}

struct AngleResult {
  double f;
  double g;
  double h;
};

// For fixed phi_A/2 = t the reduced problem is convex in (g, h).
AngleResult solve_at_angle(double t, double half_S, double k) {
  const double s = std::sin(t);
  const double c = std::cos(t);
  if (c + s < half_S) return {std::numeric_limits<double>::infinity(), 1.0, 1.0};

  auto h_min_for = [&](double g) {
    return s > 0.0 ? std::clamp((half_S - c * g) / s, 0.0, 1.0) : 1.0;
  };
  auto best_over_h = [&](double g) {
    return golden_min([&](double h) { return reduced_objective(s, c, k, g, h); }, h_min_for(g), 1.0);
  };
  const double g_lo = c > 0.0 ? std::clamp((half_S - s) / c, 0.0, 1.0) : 1.0;
  const Minimum gm = golden_min([&](double g) { return best_over_h(g).f; }, g_lo, 1.0);
  const Minimum hm = best_over_h(gm.x);
  return {hm.f, gm.x, hm.x};
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw UsageError("lambda must be in [0,1]");
}

std::vector<double> uniform_S_grid(std::size_t n) {
  std::vector<double> S(n);
  for (std::size_t i = 0; i < n; ++i)
    S[i] = 2.0 + (kTsirelson - 2.0) * static_cast<double>(i) / static_cast<double>(n - 1);
  S.back() = kTsirelson;
  return S;
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw UsageError("binary entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double phi(double x) { return binary_entropy(std::clamp(0.5 + 0.5 * x, 0.0, 1.0)); }

double g_bound(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw UsageError("g_bound argument outside [0,1]");
  return 1.0 - phi(x);
}

double g_bound_q(double x, double q) {
  if (!(x >= 0.0 && x <= 1.0)) throw UsageError("g_bound_q argument outside [0,1]");
  if (!(q >= 0.0 && q <= 0.5)) throw UsageError("q must be in [0,0.5]");
  const double inner = (1.0 - 2.0 * q) * (1.0 - 2.0 * q) + 4.0 * q * (1.0 - q) * x * x;
  return 1.0 + phi(std::sqrt(std::min(1.0, inner))) - phi(x);
}

double QubitCorrelationVars::objective(double lambda) const {
  return s * s * g * g + c * c * h * h + 2.0 * (2.0 * lambda - 1.0) * s * c * g * h * delta;
}

bool QubitCorrelationVars::feasible(double S, double tol) const {
  return c * g + s * h >= S / 2.0 - tol && g * g <= 1.0 + tol && h * h <= 1.0 + tol &&
         (1.0 - g * g) * (1.0 - h * h) >= g * g * h * h * delta * delta - tol &&
         std::abs(c * c + s * s - 1.0) <= tol && delta * delta <= 1.0 + tol;
}

ComplementaryCorrelation min_complementary_correlation(double S, double lambda) {
  check_lambda(lambda);
  if (!std::isfinite(S)) throw UsageError("S must be finite");
  if (S <= 2.0) {
    // classical region: Eve may know everything
    const double r = 1.0 / std::numbers::sqrt2;
    return {0.0, {r, r, 0.0, 0.0, 0.0}};
  }
  if (S >= kTsirelson - 1e-12) {
    const double r = 1.0 / std::numbers::sqrt2;
    return {1.0, {r, r, 1.0, 1.0, 0.0}};
  }

  const double half_S = 0.5 * S;
  const double k = 2.0 * std::abs(2.0 * lambda - 1.0);  // times s*c below
  // c + s >= S/2 restricts t = phi_A/2 to a window centred on pi/4
  const double t_lo = std::asin(S / kTsirelson) - std::numbers::pi / 4;
  const double t_hi = std::numbers::pi / 2 - t_lo;

  auto at = [&](double t) { return solve_at_angle(t, half_S, k * std::sin(t) * std::cos(t)); };

  std::size_t best = 0;
  std::vector<double> ts(kAngleGrid + 1), fs(kAngleGrid + 1);
  for (int i = 0; i <= kAngleGrid; ++i) {
    ts[i] = t_lo + (t_hi - t_lo) * i / kAngleGrid;
    fs[i] = at(ts[i]).f;
    if (fs[i] < fs[best]) best = static_cast<std::size_t>(i);
  }
  const double a = ts[best == 0 ? 0 : best - 1];
  const double b = ts[std::min<std::size_t>(kAngleGrid, best + 1)];
  const Minimum tm = golden_min([&](double t) { return at(t).f; }, a, b);
  const double t = tm.f <= fs[best] ? tm.x : ts[best];

  const AngleResult r = at(t);
  QubitCorrelationVars w{std::sin(t), std::cos(t), r.g, r.h, optimal_delta(lambda, r.g, r.h)};
  return {std::clamp(w.objective(lambda), 0.0, 1.0), w};
}

HalfWeightRoot half_weight_analytic(double S) {
  if (!(S > 2.0 && S <= kTsirelson + 1e-12))
    throw UsageError("half-weight root needs 2 < S <= 2 sqrt 2");
  S = std::min(S, kTsirelson);

  auto poly = [S](double x) {
    return 4.0 * x * (2.0 - x) + 2.0 * (S * S + 2.0) + S * (x - 5.0) * std::sqrt(2.0 * (1.0 + x));
  };
  auto squared_at = [S](double x) {
    const double c = std::sqrt(0.5 * (1.0 + x));
    const double d = 0.5 * S - c;
    return 0.5 * (1.0 - x) + (1.0 + x) * d * d / (1.0 - x);
  };
  auto admissible = [S](double x) {
    const double c = std::sqrt(0.5 * (1.0 + x));
    const double s = std::sqrt(0.5 * (1.0 - x));
    const double h = (0.5 * S - c) / s;
    return h >= -1e-9 && h <= 1.0 + 1e-9;
  };

  HalfWeightRoot best{0.0, std::numeric_limits<double>::infinity()};
  constexpr int kScan = 4000;
  const double lo = -1.0 + 1e-12;
  const double hi = 1.0 - 1e-9;
  double x_prev = lo;
  double f_prev = poly(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double f = poly(x);
    double root = std::numeric_limits<double>::quiet_NaN();
    if (f == 0.0) {
      root = x;
    } else if (f_prev * f < 0.0) {
      double a = x_prev, b = x, fa = f_prev;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = poly(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      root = 0.5 * (a + b);
    }
    if (!std::isnan(root) && admissible(root)) {
      const double v = squared_at(root);
      if (v < best.squared) best = {root, v};
    }
    x_prev = x;
    f_prev = f;
  }
  if (!std::isfinite(best.squared)) {
    // x = 0 is a root at S = 2 sqrt 2 where the sign change can vanish
    if (S >= kTsirelson - 1e-9) return {0.0, 1.0};
    throw InfeasibleError("no admissible root of the half-weight equation at S = " +
                          std::to_string(S));
  }
  best.squared = std::clamp(best.squared, 0.0, 1.0);
  return best;
}

std::vector<double> lower_convex_envelope(const std::vector<double>& xs,
                                          const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw UsageError("envelope needs matching non-empty inputs");
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(xs[i] > xs[i - 1])) throw UsageError("envelope abscissae must increase");
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const double cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o]);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<double> out(xs.size());
  std::size_t seg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
    if (seg + 1 >= hull.size() || hull[seg] == i) {
      out[i] = ys[hull[seg]];
      continue;
    }
    const std::size_t a = hull[seg];
    const std::size_t b = hull[seg + 1];
    const double w = (xs[i] - xs[a]) / (xs[b] - xs[a]);
    out[i] = (1.0 - w) * ys[a] + w * ys[b];
  }
  return out;
}

const std::vector<double>& complementary_correlation_curve(double lambda, std::size_t resolution) {
  check_lambda(lambda);
  // the problem depends on lambda only through |2 lambda - 1|
  const double key = std::abs(2.0 * lambda - 1.0);
  static std::mutex mu;
  static std::map<std::pair<double, std::size_t>, std::unique_ptr<std::vector<double>>> cache;

  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{key, resolution}];
  if (!slot) {
    const std::vector<double> S = uniform_S_grid(resolution);
    auto values = std::make_unique<std::vector<double>>(resolution);
    const double lam = 0.5 + 0.5 * key;
    parallel_for(resolution, [&](std::size_t i) {
      (*values)[i] = min_complementary_correlation(S[i], lam).squared;
    });
    slot = std::move(values);
  }
  return *slot;
}

EntropyBound EntropyBound::build(double lambda, double q, std::size_t resolution) {
  check_lambda(lambda);
  if (!(q >= 0.0 && q <= 0.5)) throw UsageError("q must be in [0,0.5]");
  if (resolution < 32) throw UsageError("entropy bound resolution must be at least 32");

  EntropyBound b;
  b.lambda_ = lambda;
  b.q_ = q;
  b.S_ = uniform_S_grid(resolution);
  const std::vector<double>& e2 = complementary_correlation_curve(lambda, resolution);
  b.raw_.resize(resolution);
  for (std::size_t i = 0; i < resolution; ++i)
    b.raw_[i] = g_bound_q(std::sqrt(std::clamp(e2[i], 0.0, 1.0)), q);
  b.H_ = lower_convex_envelope(b.S_, b.raw_);
  return b;
}

double EntropyBound::operator()(double S) const {
  if (S <= S_.front()) return H_.front();
  if (S >= S_.back()) return H_.back();
  const double pos = (S - S_.front()) / (S_.back() - S_.front()) * static_cast<double>(S_.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(pos), S_.size() - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * H_[i] + w * H_[i + 1];
}

}  // namespace diqss
