#include "diqss/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "diqss/correlations.hpp"
#include "diqss/errors.hpp"

namespace diqss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream for block b of a run seeded with `seed`.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ splitmix64(block + 0x632be59bd9b4e019ULL));
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

struct Tables {
  std::array<std::array<double, OutcomeDistribution::kCells>, 12> cumulative{};
  std::array<int, 12> bell_term{};  // index into svetlichny_terms(), or -1
  std::array<int, 12> bell_sign{};  // term sign times Charlie's frame sign
};

Tables make_tables(const NoiseParams& noise) {
  Tables t;
  t.bell_term.fill(-1);
  const auto& terms = svetlichny_terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::size_t c = combination_index(terms[i].bases);
    t.bell_term[c] = static_cast<int>(i);
    t.bell_sign[c] = terms[i].sign * charlie_bell_sign(terms[i].bases.charlie);
  }
  for (std::size_t c = 0; c < 12; ++c) {
    const OutcomeDistribution d = outcome_distribution(noise.F, noise.eta, combination_of(c));
    double acc = 0.0;
    for (std::size_t k = 0; k < OutcomeDistribution::kCells; ++k) {
      acc += d.cells()[k];
      t.cumulative[c][k] = acc;
    }
    // guard the top against rounding so a draw never falls off the end
    t.cumulative[c].back() = std::numeric_limits<double>::infinity();
  }
  return t;
}

struct Tally {
  std::array<std::uint64_t, 12> combination_counts{};
  std::uint64_t announced = 0;
  std::uint64_t announced_errors = 0;
  std::uint64_t key_errors = 0;
  std::uint64_t failures = 0;
  std::array<std::uint64_t, 8> bell_counts{};
  std::array<std::int64_t, 8> bell_sums{};

  void merge(const Tally& o) {
    for (std::size_t i = 0; i < 12; ++i) combination_counts[i] += o.combination_counts[i];
    announced += o.announced;
    announced_errors += o.announced_errors;
    key_errors += o.key_errors;
    failures += o.failures;
    for (std::size_t i = 0; i < 8; ++i) {
      bell_counts[i] += o.bell_counts[i];
      bell_sums[i] += o.bell_sums[i];
    }
  }
};

int resolve(Outcome o, Uniform& u) {
  if (o == Outcome::none) return u() < 0.5 ? 1 : -1;
  return outcome_value(o);
}

Tally run_block(const SimConfig& cfg, const Tables& t, std::uint64_t block, std::uint64_t n) {
  Uniform u(block_seed(cfg.seed, block));
  Tally tally;
  const double p = cfg.noise.p;
  const double bob1 = cfg.bob_probs[0];
  const double bob12 = cfg.bob_probs[0] + cfg.bob_probs[1];
  for (std::uint64_t r = 0; r < n; ++r) {
    BasisTriple b;
    b.alice = u() < p ? 1 : 2;
    const double ub = u();
    b.bob = ub < bob1 ? 1 : (ub < bob12 ? 2 : 3);
    b.charlie = u() < p ? 1 : 2;
    const std::size_t c = combination_index(b);
    ++tally.combination_counts[c];

    const auto& cum = t.cumulative[c];
    const double x = u();
    const std::size_t cell =
        static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    const auto outs = OutcomeDistribution::outcomes_of(cell);
    int a = resolve(outs[0], u);
    const int bv = resolve(outs[1], u);
    const int cv = resolve(outs[2], u);

    if (b.bob == 1) {
      if (b.alice != b.charlie) continue;  // discarded combination
      if (u() < cfg.noise.q) a = -a;
      const bool error = a * bv * cv != 1;  // K_A != K_B xor K_C
      tally.key_errors += error;
      if (u() < cfg.announce_fraction) {
        ++tally.announced;
        tally.announced_errors += error;
      } else {
        tally.failures += error;
      }
    } else {
      const int term = t.bell_term[c];
      ++tally.bell_counts[term];
      tally.bell_sums[term] += t.bell_sign[c] * a * bv * cv;
    }
  }
  return tally;
}

}  // namespace

void SimConfig::validate() const {
  noise.validate();
  if (rounds < 1) throw UsageError("rounds must be at least 1");
  if (!(announce_fraction > 0.0 && announce_fraction < 1.0))
    throw UsageError("announce_fraction must be in (0,1)");
  double sum = 0.0;
  for (double v : bob_probs) {
    if (!(v >= 0.0)) throw UsageError("Bob's basis probabilities must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw UsageError("Bob's basis probabilities must sum to 1");
  if (block_rounds < 1) throw UsageError("block_rounds must be at least 1");
}

BasisTriple combination_of(std::size_t idx) {
  if (idx >= 12) throw UsageError("combination index must be below 12");
  return {static_cast<int>(idx / 6) + 1, static_cast<int>((idx / 2) % 3) + 1,
          static_cast<int>(idx % 2) + 1};
}

SimStats run_simulation(const SimConfig& cfg) {
  cfg.validate();
  const Tables tables = make_tables(cfg.noise);
  const std::uint64_t blocks = (cfg.rounds + cfg.block_rounds - 1) / cfg.block_rounds;

  std::vector<Tally> per_block(blocks);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(cfg.workers ? cfg.workers : hw, blocks));
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
      const std::uint64_t n = std::min(cfg.block_rounds, cfg.rounds - b * cfg.block_rounds);
      per_block[b] = run_block(cfg, tables, b, n);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  Tally total;
  for (const Tally& t : per_block) total.merge(t);

  SimStats s;
  s.rounds = cfg.rounds;
  s.combination_counts = total.combination_counts;
  for (std::size_t c = 0; c < 12; ++c) {
    const BasisTriple b = combination_of(c);
    if (b.bob != 1)
      s.bell_rounds += total.combination_counts[c];
    else if (b.alice == b.charlie)
      s.sifted_key_rounds += total.combination_counts[c];
    else
      s.discarded_rounds += total.combination_counts[c];
  }
  s.announced_rounds = total.announced;
  s.announced_errors = total.announced_errors;
  s.key_errors = total.key_errors;
  s.reconstruction_failures = total.failures;
  s.bell_counts = total.bell_counts;
  s.bell_sums = total.bell_sums;

  if (s.announced_rounds > 0) {
    const double n = static_cast<double>(s.announced_rounds);
    const double e = static_cast<double>(s.announced_errors) / n;
    s.qber = {e, std::sqrt(e * (1.0 - e) / n)};
  }
  double S = 0.0;
  double var = 0.0;
  bool complete = true;
  for (std::size_t i = 0; i < 8; ++i) {
    if (s.bell_counts[i] == 0) {
      complete = false;
      continue;
    }
    const double n = static_cast<double>(s.bell_counts[i]);
    const double m = static_cast<double>(s.bell_sums[i]) / n;
    S += m;
    var += (1.0 - m * m) / n;
  }
  if (complete) {
    s.S_ABC = {S, std::sqrt(var)};
    s.S_effective = {0.5 * S, 0.5 * std::sqrt(var)};
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.S_ABC = {nan, nan};
    s.S_effective = {nan, nan};
  }
  return s;
}

double ModelComparison::max_abs_z() const {
  double m = 0.0;
  for (const ZScore& z : scores) m = std::max(m, std::abs(z.z));
  return m;
}

namespace {

ZScore make_z(std::string name, double observed, double expected, double se) {
  ZScore z{std::move(name), observed, expected, se, 0.0, false};
  if (!(se > 0.0) || !std::isfinite(se)) {
    z.zero_variance = true;
    z.z = observed == expected ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    z.z = (observed - expected) / se;
  }
  return z;
}

}  // namespace

ModelComparison estimate_vs_model(const SimStats& stats, const NoiseParams& noise,
                                  double bob_key_probability) {
  noise.validate();
  ModelComparison out;

  const double delta = qber_model(noise.F, noise.eta, NoClickPolicy::random_bit).delta;
  const double dq = preprocessed_qber(delta, noise.q);
  const double na = static_cast<double>(stats.announced_rounds);
  out.scores.push_back(make_z("qber", stats.qber.value, dq,
                              na > 0 ? std::sqrt(dq * (1.0 - dq) / na) : 0.0));

  // every Svetlichny term has model mean F eta^3 / sqrt2
  const double eta3 = noise.eta * noise.eta * noise.eta;
  const double m = noise.F * eta3 / std::sqrt(2.0);
  double var = 0.0;
  bool complete = true;
  for (std::uint64_t n : stats.bell_counts) {
    if (n == 0) complete = false;
    else var += (1.0 - m * m) / static_cast<double>(n);
  }
  const double s_model = 2.0 * std::sqrt(2.0) * noise.F * eta3;
  out.scores.push_back(
      make_z("S_effective", stats.S_effective.value, s_model, complete ? 0.5 * std::sqrt(var) : 0.0));

  const double pk = (noise.p * noise.p + (1.0 - noise.p) * (1.0 - noise.p)) * bob_key_probability;
  const double n = static_cast<double>(stats.rounds);
  out.scores.push_back(make_z("sift_fraction", stats.sift_fraction(), pk,
                              n > 0 ? std::sqrt(pk * (1.0 - pk) / n) : 0.0));
  return out;
}

}  // namespace diqss
