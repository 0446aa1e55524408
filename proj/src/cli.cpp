#include "diqss/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "diqss/correlations.hpp"
#include "diqss/entropy.hpp"
#include "diqss/errors.hpp"
#include "diqss/keyrate.hpp"
#include "diqss/mcsim.hpp"

#ifndef DIQSS_VERSION
#define DIQSS_VERSION "0.0.0"
#endif

namespace diqss::cli {

namespace {

struct Options {
  double p = 0.5;
  double q = 0.0;
  double F = 1.0;
  double eta = 1.0;
  double eta_d = 0.98;
  double eta_c = 0.99;
  double alpha = 0.2;
  std::size_t resolution = EntropyBound::kDefaultResolution;
  std::uint64_t rounds = 1'000'000;
  std::uint64_t seed = 1;
  double announce = 0.1;
  unsigned workers = 0;
  std::string no_click = "coin";
  std::string out;
  std::optional<double> delta;
  std::optional<double> at_S;
  std::size_t samples = 201;
  double x_min = -1.0;
  double x_max = -1.0;
  std::string threshold_kind;
  std::string curve_kind;
  std::string preset;

  NoClickPolicy policy() const {
    return no_click == "error" ? NoClickPolicy::counted_as_error : NoClickPolicy::random_bit;
  }
  ChannelParams channel() const {
    ChannelParams c;
    c.alpha_db_per_km = alpha;
    c.eta_d = eta_d;
    c.eta_c = eta_c;
    return c;
  }
  NoiseParams noise() const { return {F, eta, p, q}; }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string metadata(const std::string& command, const Options& o, bool with_sim = false) {
  std::ostringstream s;
  s << "# diqss " << version() << "\n";
  s << "# command=" << command << "\n";
  s << "# p=" << format_number(o.p) << ",q=" << format_number(o.q) << ",F=" << format_number(o.F)
    << ",eta=" << format_number(o.eta) << ",eta_d=" << format_number(o.eta_d)
    << ",eta_c=" << format_number(o.eta_c) << ",alpha=" << format_number(o.alpha)
    << ",resolution=" << o.resolution << ",no_click=" << o.no_click << "\n";
  if (with_sim)
    s << "# rounds=" << o.rounds << ",seed=" << o.seed
      << ",announce_fraction=" << format_number(o.announce) << "\n";
  return s.str();
}

// CSV goes to --out when given, otherwise to stdout.
void emit_csv(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path = resolve_output(o.out);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

void validate_common(const Options& o) {
  o.noise().validate();
  o.channel().validate();
  if (o.resolution < 32) throw UsageError("resolution must be at least 32");
}

int cmd_entropy(const Options& o, std::ostream& out) {
  validate_common(o);
  const EntropyBound bound = bound_for(o.p, o.q, o.resolution);
  if (o.at_S) {
    if (!(*o.at_S >= 0.0 && *o.at_S <= kTsirelson + 1e-12))
      throw UsageError("S must be in [0, 2 sqrt 2]");
    out << "S=" << format_number(*o.at_S) << "\n";
    out << "H=" << format_number(bound(*o.at_S)) << "\n";
    return ok;
  }
  std::string csv = metadata("entropy", o) + "S,H\n";
  for (std::size_t i = 0; i < bound.S().size(); ++i)
    csv += format_number(bound.S()[i]) + "," + format_number(bound.H()[i]) + "\n";
  emit_csv(o, csv, out);
  return ok;
}

int cmd_rate(const Options& o, std::ostream& out) {
  validate_common(o);
  const EntropyBound bound = bound_for(o.p, o.q, o.resolution);
  double delta = 0.0, S = 0.0, r = 0.0;
  if (o.delta) {
    delta = *o.delta;
    if (!(delta >= 0.0 && delta <= 0.5)) throw UsageError("delta must be in [0,0.5]");
    S = kTsirelson * (1.0 - 2.0 * delta);
    r = key_rate(delta, o.p, o.q, bound);
  } else {
    delta = qber_model(o.F, o.eta, o.policy()).delta;
    S = kTsirelson * o.F * o.eta * o.eta * o.eta;
    r = key_rate_channel(o.F, o.eta, o.p, o.q, bound, o.policy());
  }
  std::ostringstream s;
  s << "p=" << format_number(o.p) << "\nq=" << format_number(o.q) << "\n";
  s << "delta=" << format_number(delta) << "\n";
  s << "delta_q=" << format_number(preprocessed_qber(std::min(delta, 1.0), o.q)) << "\n";
  s << "S=" << format_number(S) << "\nH=" << format_number(bound(S)) << "\n";
  s << "rate=" << format_number(r) << "\n";
  out << s.str();
  if (!o.out.empty()) emit_csv(o, metadata("rate", o) + "delta,S,rate\n" + format_number(delta) +
                                      "," + format_number(S) + "," + format_number(r) + "\n",
                               out);
  return ok;
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream& err) {
  validate_common(o);
  std::ostringstream s;
  std::string csv = metadata("threshold " + o.threshold_kind, o);
  try {
    if (o.threshold_kind == "noise") {
      const double d = noise_threshold(o.p, o.q, o.resolution);
      s << "noise_threshold=" << format_number(d) << "\n";
      csv += "noise_threshold\n" + format_number(d) + "\n";
    } else if (o.threshold_kind == "efficiency") {
      const double e = efficiency_threshold(o.p, o.q, o.F, o.policy(), o.resolution);
      s << "efficiency_threshold=" << format_number(e) << "\n";
      csv += "efficiency_threshold\n" + format_number(e) + "\n";
    } else {
      const DistanceResult d = max_distance(o.p, o.q, o.channel(), o.policy(), o.resolution);
      if (!d.feasible) {
        err << "infeasible: " << d.diagnostic << "\n";
        return infeasible;
      }
      s << "link_km=" << format_number(d.link_km) << "\n";
      s << "user_km=" << format_number(d.user_km) << "\n";
      csv += "link_km,user_km\n" + format_number(d.link_km) + "," + format_number(d.user_km) + "\n";
    }
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return infeasible;
  }
  out << "p=" << format_number(o.p) << "\nq=" << format_number(o.q)
      << "\nno_click=" << o.no_click << "\n"
      << s.str();
  if (!o.out.empty()) emit_csv(o, csv, out);
  return ok;
}

int cmd_curve(const Options& o, std::ostream& out) {
  validate_common(o);
  std::vector<SeriesSpec> series;
  if (!o.preset.empty()) {
    series = preset_series(o.preset);
    if (!o.curve_kind.empty() && parse_curve_kind(o.curve_kind) != series.front().kind)
      throw UsageError("preset " + o.preset + " is a " + curve_kind_name(series.front().kind) +
                       " family");
  } else {
    if (o.curve_kind.empty()) throw UsageError("curve needs a kind or --preset");
    CurveParams cp;
    cp.p = o.p;
    cp.q = o.q;
    cp.policy = o.policy();
    series.push_back({"", parse_curve_kind(o.curve_kind), cp, ""});
  }

  std::string csv = metadata("curve " + curve_kind_name(series.front().kind) +
                                 (o.preset.empty() ? "" : " --preset " + o.preset),
                             o);
  std::string body;
  std::string columns;
  for (SeriesSpec& spec : series) {
    CurveParams& cp = spec.params;
    cp.F = o.F;
    cp.channel = o.channel();
    cp.x_min = o.x_min;
    cp.x_max = o.x_max;
    cp.samples = o.samples;
    cp.resolution = o.resolution;
    const RateCurve c = curve(spec.kind, cp);
    const std::string label = spec.label.empty() ? c.label : spec.label;
    csv += "# series=" + label + ",p=" + format_number(cp.p) + ",q=" + format_number(cp.q) +
           ",no_click=" + (cp.policy == NoClickPolicy::random_bit ? "coin" : "error");
    if (!spec.note.empty()) csv += ",note=" + spec.note;
    csv += "\n";
    columns = "series," + c.abscissa + "," + c.ordinate + "\n";
    for (const auto& [x, y] : c.points) body += label + "," + format_number(x) + "," + format_number(y) + "\n";
  }
  emit_csv(o, csv + columns + body, out);
  return ok;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  validate_common(o);
  SimConfig cfg;
  cfg.rounds = o.rounds;
  cfg.noise = o.noise();
  cfg.seed = o.seed;
  cfg.announce_fraction = o.announce;
  cfg.workers = o.workers;
  const SimStats s = run_simulation(cfg);
  const ModelComparison cmp = estimate_vs_model(s, cfg.noise);

  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](std::string k, std::string v) { kv.emplace_back(std::move(k), std::move(v)); };
  add("rounds", std::to_string(s.rounds));
  for (std::size_t c = 0; c < 12; ++c) {
    const BasisTriple b = combination_of(c);
    add("count_A" + std::to_string(b.alice) + "B" + std::to_string(b.bob) + "C" +
            std::to_string(b.charlie),
        std::to_string(s.combination_counts[c]));
  }
  add("sifted_key_rounds", std::to_string(s.sifted_key_rounds));
  add("discarded_rounds", std::to_string(s.discarded_rounds));
  add("bell_rounds", std::to_string(s.bell_rounds));
  add("announced_rounds", std::to_string(s.announced_rounds));
  add("key_errors", std::to_string(s.key_errors));
  add("qber", format_number(s.qber.value));
  add("qber_se", format_number(s.qber.std_error));
  add("S_ABC", format_number(s.S_ABC.value));
  add("S_ABC_se", format_number(s.S_ABC.std_error));
  add("S_effective", format_number(s.S_effective.value));
  add("S_effective_se", format_number(s.S_effective.std_error));
  add("reconstruction_failures", std::to_string(s.reconstruction_failures));
  for (const ZScore& z : cmp.scores) {
    add("z_" + z.name, format_number(z.z));
    if (z.zero_variance) add("z_" + z.name + "_flag", "zero_variance");
  }

  std::string text;
  std::string csv = metadata("simulate", o, true) + "key,value\n";
  for (const auto& [k, v] : kv) {
    text += k + "=" + v + "\n";
    csv += k + "," + v + "\n";
  }
  out << text;
  if (!o.out.empty()) emit_csv(o, csv, out);
  return ok;
}

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "probability of A1 and C1")->capture_default_str();
  sub->add_option("--q", o.q, "preprocessing flip probability")->capture_default_str();
  sub->add_option("--F", o.F, "white-noise fidelity")->capture_default_str();
  sub->add_option("--eta", o.eta, "global detection efficiency")->capture_default_str();
  sub->add_option("--eta-d", o.eta_d, "detector efficiency")->capture_default_str();
  sub->add_option("--eta-c", o.eta_c, "coupling efficiency")->capture_default_str();
  sub->add_option("--alpha", o.alpha, "fibre attenuation in dB/km")->capture_default_str();
  sub->add_option("--resolution", o.resolution, "S grid points of the entropy bound")
      ->capture_default_str();
  sub->add_option("--no-click", o.no_click, "no-click handling in key rounds")
      ->check(CLI::IsMember({"coin", "error"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "output CSV path");
}

}  // namespace

std::string version() { return DIQSS_VERSION; }

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
  }
  return p;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // avoids "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Key rates, thresholds and simulation for GHZ-based DI secret sharing", "diqss"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  auto* entropy = app.add_subcommand("entropy", "entropy bound H(S) as CSV");
  add_model_flags(entropy, o);
  entropy->add_option("--at", o.at_S, "print H at a single S instead of the table");

  auto* rate = app.add_subcommand("rate", "key rate at one operating point");
  add_model_flags(rate, o);
  rate->add_option("--delta", o.delta, "error rate (white-noise channel); default uses F and eta");

  auto* threshold = app.add_subcommand("threshold", "noise, efficiency or distance threshold");
  add_model_flags(threshold, o);
  threshold->add_option("kind", o.threshold_kind, "noise | efficiency | distance")
      ->required()
      ->check(CLI::IsMember({"noise", "efficiency", "distance"}));

  auto* curve_cmd = app.add_subcommand("curve", "rate or entropy curve as CSV");
  add_model_flags(curve_cmd, o);
  curve_cmd->add_option("kind", o.curve_kind, "rate-vs-qber | rate-vs-eta | rate-vs-L | entropy-vs-S");
  curve_cmd->add_option("--preset", o.preset, "fig2 .. fig6");
  curve_cmd->add_option("--samples", o.samples, "points per series")->capture_default_str();
  curve_cmd->add_option("--from", o.x_min, "first abscissa");
  curve_cmd->add_option("--to", o.x_max, "last abscissa");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo protocol simulation");
  add_model_flags(simulate, o);
  simulate->add_option("--rounds", o.rounds, "protocol rounds")->capture_default_str();
  simulate->add_option("--seed", o.seed, "master seed")->capture_default_str();
  simulate->add_option("--announce", o.announce, "fraction of key rounds announced")
      ->capture_default_str();
  simulate->add_option("--workers", o.workers, "threads (0: all cores); output does not depend on it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage;
  }

  try {
    if (entropy->parsed()) return cmd_entropy(o, out);
    if (rate->parsed()) return cmd_rate(o, out);
    if (threshold->parsed()) return cmd_threshold(o, out, err);
    if (curve_cmd->parsed()) return cmd_curve(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return infeasible;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return io;
  }
  return usage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"diqss"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace diqss::cli
