// qent: command-line front end.
//
// Exit codes: 0 all checks pass / counterexample found, 1 usage or input
// error, 2 inequality violation, 3 search budget exhausted.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "qent/io.hpp"
#include "qent/search.hpp"

namespace {

using namespace qent;
using io::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitViolation = 2;
constexpr int kExitNotFound = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_order_above_one(double q) {
  if (!(q > 1.0)) {
    std::ostringstream os;
    os << "q must satisfy the q > 1 precondition (got q = " << q << ")";
    throw InputError(os.str());
  }
}

io::RunManifest start_manifest(std::string command, json config, std::uint64_t seed = 0) {
  io::RunManifest m;
  m.command = std::move(command);
  m.config = std::move(config);
  m.seed = seed;
  m.start = std::chrono::system_clock::now();
  return m;
}

json finish_manifest(io::RunManifest m, bool pass) {
  m.end = std::chrono::system_clock::now();
  m.pass = pass;
  return io::to_json(m);
}

/// Writes to `path` when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// verify --------------------------------------------------------------------

struct VerifyArgs {
  std::string state_file;
  double q = 2.0;
  std::string mode = "direct";
  double tolerance = tol::kPass;
  std::string output;
};

int cmd_verify(const VerifyArgs& a) {
  require_order_above_one(a.q);
  auto manifest = start_manifest(
      "verify", {{"state", a.state_file}, {"q", a.q}, {"mode", a.mode}, {"tolerance", a.tolerance}});
  const AnalyzedState s(io::load_state(a.state_file));
  const QExp q(a.q);
  const CheckOptions opts{a.tolerance};

  std::vector<VerificationRecord> records;
  if (a.mode == "direct" || a.mode == "all") {
    records.push_back(theorem1_check(s, q, Theorem1Mode::kDirect, opts));
  }
  if (a.mode == "constructive" || a.mode == "all") {
    records.push_back(theorem1_check(s, q, Theorem1Mode::kConstructive, opts));
  }
  records.push_back(kyfan_power_check(s, q, opts));
  records.push_back(weak_majorization_check(majorization_pair(s, q), a.q, opts));
  records.push_back(theorem2_check(s, q, opts));

  bool pass = true;
  Output out(a.output);
  for (auto& r : records) {
    r.context["state"] = a.state_file;
    pass = pass && r.pass;
    out.stream() << io::to_json(r).dump() << '\n';
  }
  out.stream() << json{{"manifest", finish_manifest(std::move(manifest), pass)}}.dump() << '\n';
  return pass ? kExitOk : kExitViolation;
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
  std::string state_file;
  double q_min = 1.1;
  double q_max = 5.0;
  int steps = 10;
  std::string grid = "linear";
  double tolerance = tol::kPass;
  std::string output;
  std::string manifest;
};

std::vector<double> make_grid(double lo, double hi, int steps, const std::string& kind) {
  std::vector<double> qs;
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    if (i == 0) {
      qs.push_back(lo);
    } else if (i == steps - 1) {
      qs.push_back(hi);
    } else if (kind == "log") {
      qs.push_back(lo * std::pow(hi / lo, t));
    } else {
      qs.push_back(lo + t * (hi - lo));
    }
  }
  return qs;
}

int cmd_sweep(const SweepArgs& a) {
  if (!(a.q_min > 1.0)) throw InputError("--q-min must satisfy the q > 1 precondition");
  if (!(a.q_max > a.q_min)) throw InputError("--q-max must exceed --q-min");
  if (a.steps < 2) throw InputError("--steps must be >= 2");
  if (a.grid != "linear" && a.grid != "log") throw InputError("--grid must be linear or log");
  auto manifest = start_manifest("sweep", {{"state", a.state_file},
                                           {"q_min", a.q_min},
                                           {"q_max", a.q_max},
                                           {"steps", a.steps},
                                           {"grid", a.grid},
                                           {"tolerance", a.tolerance}});
  const AnalyzedState s(io::load_state(a.state_file));
  const CheckOptions opts{a.tolerance};

  Output out(a.output);
  out.stream() << "q,slack_theorem1,slack_theorem2\n";
  bool pass = true;
  for (double qv : make_grid(a.q_min, a.q_max, a.steps, a.grid)) {
    const QExp q(qv);
    const auto t1 = theorem1_check(s, q, Theorem1Mode::kDirect, opts);
    const auto t2 = theorem2_check(s, q, opts);
    pass = pass && t1.pass && t2.pass;
    out.stream() << io::format_number(qv) << ',' << io::format_number(t1.slack) << ','
                 << io::format_number(t2.slack) << '\n';
  }
  if (!a.manifest.empty()) {
    std::ofstream mf(a.manifest);
    if (!mf) throw InputError("cannot open manifest file '" + a.manifest + "'");
    mf << finish_manifest(std::move(manifest), pass).dump(2) << '\n';
  }
  return pass ? kExitOk : kExitViolation;
}

// montecarlo ----------------------------------------------------------------

struct MonteCarloArgs {
  long long d1 = 2;
  long long d2 = 2;
  std::vector<double> q{2.0};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 20070101;
  std::string measure = "hilbert-schmidt";
  std::vector<std::string> inequalities{"theorem1", "theorem2"};
  std::string mode = "direct";
  unsigned threads = 0;
  double tolerance = tol::kPass;
  std::string output;
  std::string records;
};

int cmd_montecarlo(const MonteCarloArgs& a) {
  CampaignConfig cfg;
  try {
    cfg.d1 = a.d1;
    cfg.d2 = a.d2;
    cfg.q_values = a.q;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.measure = parse_measure(a.measure);
    cfg.inequalities.clear();
    for (const auto& name : a.inequalities) cfg.inequalities.push_back(parse_inequality(name));
    if (a.mode != "direct" && a.mode != "constructive") {
      throw ConfigError("--mode must be direct or constructive");
    }
    cfg.theorem1_mode = a.mode == "direct" ? Theorem1Mode::kDirect : Theorem1Mode::kConstructive;
    cfg.threads = a.threads;
    cfg.check.tol_pass = a.tolerance;
    validate(cfg);
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }

  auto manifest = start_manifest("montecarlo", io::to_json(cfg), cfg.seed);
  std::unique_ptr<std::ofstream> stream;
  TrialSink sink;
  if (!a.records.empty()) {
    stream = std::make_unique<std::ofstream>(a.records);
    if (!*stream) throw InputError("cannot open records file '" + a.records + "'");
    *stream << json{{"manifest", io::to_json(manifest)}}.dump() << '\n';
    sink = [&](std::uint64_t, const std::vector<VerificationRecord>& recs) {
      for (const auto& r : recs) *stream << io::to_json(r).dump() << '\n';
    };
  }
  const CampaignSummary summary = run_campaign(cfg, sink);
  const bool pass = summary.all_pass();

  json doc = io::to_json(summary);
  doc["manifest"] = finish_manifest(std::move(manifest), pass);
  Output out(a.output);
  out.stream() << doc.dump(2) << '\n';
  return pass ? kExitOk : kExitViolation;
}

// witness -------------------------------------------------------------------

struct WitnessArgs {
  std::string state_file;
  double q = 2.0;
  double tolerance = tol::kPass;
  std::string output;
};

int cmd_witness(const WitnessArgs& a) {
  require_order_above_one(a.q);
  auto manifest = start_manifest("witness",
                                 {{"state", a.state_file}, {"q", a.q}, {"tolerance", a.tolerance}});
  const BipartiteState state = io::load_state(a.state_file);
  const AnalyzedState s(state);
  const WitnessChain chain = theorem1_witnesses(s, QExp(a.q));
  const bool pass = chain.holds(a.tolerance);

  json doc = io::to_json(chain);
  doc["state"] = io::to_json(state);
  doc["manifest"] = finish_manifest(std::move(manifest), pass);
  Output out(a.output);
  out.stream() << doc.dump(2) << '\n';
  return pass ? kExitOk : kExitViolation;
}

// search --------------------------------------------------------------------

struct SearchArgs {
  double q = 0.5;
  std::string direction = "subadditivity-violated";
  long long d1 = 2;
  long long d2 = 2;
  std::uint64_t budget = 100000;
  std::uint64_t seed = 20070101;
  std::string output;
};

int cmd_search(const SearchArgs& a) {
  if (!(a.q > 0.0 && a.q < 1.0)) {
    throw InputError("search requires 0 < q < 1 (got q = " + std::to_string(a.q) + ")");
  }
  Direction direction;
  try {
    direction = parse_direction(a.direction);
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
  if (a.d1 < 1 || a.d2 < 1) throw InputError("--d1 and --d2 must be >= 1");
  auto manifest = start_manifest("search",
                                 {{"q", a.q},
                                  {"direction", a.direction},
                                  {"d1", a.d1},
                                  {"d2", a.d2},
                                  {"budget", a.budget},
                                  {"seed", a.seed}},
                                 a.seed);
  const SearchResult r = find_violation(QExp(a.q), direction, a.d1, a.d2, a.budget, a.seed);

  json doc;
  if (r.counterexample) {
    doc = io::to_json(*r.counterexample);
    doc["found"] = true;
  } else {
    doc = {{"found", false},
           {"q", a.q},
           {"direction", std::string(to_string(direction))},
           {"best_slack", r.best_slack}};
  }
  doc["evaluated"] = r.evaluated;
  doc["manifest"] = finish_manifest(std::move(manifest), r.counterexample.has_value());
  Output out(a.output);
  out.stream() << doc.dump(2) << '\n';
  return r.counterexample ? kExitOk : kExitNotFound;
}

// probe / sample -------------------------------------------------------------

struct ProbeArgs {
  double q = 2.0;
  long long d1 = 2;
  long long d2 = 2;
  std::uint64_t budget = 1000;
  std::uint64_t seed = 20070101;
  std::string output;
};

int cmd_probe(const ProbeArgs& a) {
  require_order_above_one(a.q);
  if (a.d1 < 1 || a.d2 < 1) throw InputError("--d1 and --d2 must be >= 1");
  auto manifest = start_manifest(
      "probe", {{"q", a.q}, {"d1", a.d1}, {"d2", a.d2}, {"budget", a.budget}, {"seed", a.seed}},
      a.seed);
  json items = json::array();
  for (const auto& c : equality_probe(QExp(a.q), a.d1, a.d2, a.budget, a.seed)) {
    items.push_back({{"origin", c.origin}, {"slack", c.slack}, {"state", io::to_json(c.state)}});
  }
  json doc{{"candidates", std::move(items)}};
  doc["manifest"] = finish_manifest(std::move(manifest), true);
  Output out(a.output);
  out.stream() << doc.dump(2) << '\n';
  return kExitOk;
}

struct SampleArgs {
  long long d1 = 2;
  long long d2 = 2;
  std::string measure = "hilbert-schmidt";
  std::uint64_t seed = 20070101;
  std::string kind;
  std::string output;
};

int cmd_sample(const SampleArgs& a) {
  BipartiteState s = [&] {
    try {
      if (a.kind == "bell") return maximally_entangled(a.d1);
      if (a.kind == "mixed") {
        return product_state(DensityMatrix::maximally_mixed(a.d1),
                             DensityMatrix::maximally_mixed(a.d2));
      }
      if (!a.kind.empty()) throw ConfigError("--kind must be bell or mixed");
      return sample_state(a.d1, a.d2, parse_measure(a.measure), a.seed);
    } catch (const ConfigError& e) {
      throw InputError(e.what());
    }
  }();
  Output out(a.output);
  out.stream() << io::to_json(s).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schatten-norm and q-entropy inequality verification for bipartite states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check the norm, majorization and entropy inequalities on a state");
  v->add_option("state", verify.state_file, "State JSON file")->required();
  v->add_option("--q", verify.q, "Order q > 1");
  v->add_option("--mode", verify.mode, "direct, constructive or all")
      ->check(CLI::IsMember({"direct", "constructive", "all"}));
  v->add_option("--tolerance", verify.tolerance, "Pass threshold on slacks");
  v->add_option("-o,--output", verify.output, "Write records here instead of stdout");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Slack of both theorems over a grid of q");
  sw->add_option("state", sweep.state_file, "State JSON file")->required();
  sw->add_option("--q-min", sweep.q_min);
  sw->add_option("--q-max", sweep.q_max);
  sw->add_option("--steps", sweep.steps);
  sw->add_option("--grid", sweep.grid, "linear or log");
  sw->add_option("--tolerance", sweep.tolerance);
  sw->add_option("-o,--output", sweep.output, "CSV output file");
  sw->add_option("--manifest", sweep.manifest, "Write the run manifest here");

  MonteCarloArgs mc;
  auto* m = app.add_subcommand("montecarlo", "Monte Carlo campaign over random states");
  m->add_option("--d1", mc.d1);
  m->add_option("--d2", mc.d2);
  m->add_option("--q", mc.q, "One or more orders")->delimiter(',');
  m->add_option("--trials", mc.trials);
  m->add_option("--seed", mc.seed);
  m->add_option("--measure", mc.measure,
                "hilbert-schmidt, induced:K, spectrum-dirichlet, haar-pure, rank:R");
  m->add_option("--inequalities", mc.inequalities,
                "lemma, corollary, theorem1, theorem2, kyfan-power, weak-majorization")
      ->delimiter(',');
  m->add_option("--mode", mc.mode, "theorem1 mode: direct or constructive");
  m->add_option("--threads", mc.threads, "Worker threads (0 = all cores)");
  m->add_option("--tolerance", mc.tolerance);
  m->add_option("-o,--output", mc.output, "Summary JSON file");
  m->add_option("--records", mc.records, "Line-delimited per-trial records");

  WitnessArgs wit;
  auto* w = app.add_subcommand("witness", "Emit the dual and Z witnesses for a state");
  w->add_option("state", wit.state_file, "State JSON file")->required();
  w->add_option("--q", wit.q, "Order q > 1");
  w->add_option("--tolerance", wit.tolerance);
  w->add_option("-o,--output", wit.output);

  SearchArgs search;
  auto* se = app.add_subcommand("search", "Counterexample search for 0 < q < 1");
  se->add_option("--q", search.q);
  se->add_option("--direction", search.direction,
                 "subadditivity-violated or superadditivity-violated");
  se->add_option("--d1", search.d1);
  se->add_option("--d2", search.d2);
  se->add_option("--budget", search.budget);
  se->add_option("--seed", search.seed);
  se->add_option("-o,--output", search.output);

  ProbeArgs probe;
  auto* p = app.add_subcommand("probe", "Near-equality states of the norm inequality");
  p->add_option("--q", probe.q);
  p->add_option("--d1", probe.d1);
  p->add_option("--d2", probe.d2);
  p->add_option("--budget", probe.budget);
  p->add_option("--seed", probe.seed);
  p->add_option("-o,--output", probe.output);

  SampleArgs sample;
  auto* sa = app.add_subcommand("sample", "Write a random or named state as JSON");
  sa->add_option("--d1", sample.d1);
  sa->add_option("--d2", sample.d2);
  sa->add_option("--measure", sample.measure);
  sa->add_option("--seed", sample.seed);
  sa->add_option("--kind", sample.kind, "bell (d1 x d1 maximally entangled) or mixed");
  sa->add_option("-o,--output", sample.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*v) return cmd_verify(verify);
    if (*sw) return cmd_sweep(sweep);
    if (*m) return cmd_montecarlo(mc);
    if (*w) return cmd_witness(wit);
    if (*se) return cmd_search(search);
    if (*p) return cmd_probe(probe);
    if (*sa) return cmd_sample(sample);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
