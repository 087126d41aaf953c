#include "markov_id/contrast.hpp"
#include "markov_id/embedding.hpp"
#include "markov_id/errors.hpp"
#include "markov_id/matrix_io.hpp"
#include "markov_id/sampling.hpp"
#include "markov_id/testing.hpp"
#include "markov_id/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace markov_id;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kPrecondition = 3, kNumerical = 4 };

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    T v{};
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size()) {
      throw InvalidConfig(std::string(what) + ": cannot parse '" + item + "' in '" + text + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out)
    write_file(*out, text);
  else
    std::cout << text;
}

// Resolves a seed, generating and announcing one when the user gave none.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "markov_id: no --seed given, using seed " << s << "\n";
  return s;
}

RationalStationary resolve_law(const TransitionMatrix& ref, const std::optional<std::string>& law,
                               std::int64_t max_delta) {
  if (law) return RationalStationary(parse_list<std::int64_t>(*law, "--law"));
  return rationalize(stationary_distribution(ref), max_delta);
}

std::string law_string(const RationalStationary& r) {
  std::string s;
  for (auto v : r.numerators()) s += (s.empty() ? "" : ",") + std::to_string(v);
  return s;
}

// ---------------------------------------------------------------------------

struct InspectArgs {
  std::string p;
  std::int64_t max_delta = 1000;
};

int run_inspect(const InspectArgs& a) {
  const auto p = load_matrix(a.p);
  json doc = {{"states", p.state_count()}, {"edges", p.edges().size()}, {"symmetric", p.is_symmetric(kStochasticTol)}};
  const bool irreducible = is_irreducible(p);
  doc["irreducible"] = irreducible;
  if (irreducible) {
    const auto pi = stationary_distribution(p);
    doc["stationary"] = pi.probs();
    doc["reversible"] = is_reversible(p, pi);
    try {
      const auto r = rationalize(pi, a.max_delta);
      doc["rational_law"] = r.numerators();
      doc["delta"] = r.delta();
    } catch (const RationalizationFailed&) {
      doc["rational_law"] = nullptr;
    }
  }
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

struct ContrastArgs {
  std::string p, q;
  std::string format = "text";
};

int run_contrast(const ContrastArgs& a) {
  const auto c = contrast(load_matrix(a.p), load_matrix(a.q));
  if (a.format == "json") {
    // Infinite rates have no JSON number; emit them as strings.
    json doc = {{"k", c.k}, {"product_irreducible", c.product_irreducible}};
    doc["renyi_rate"] = std::isfinite(c.renyi_rate) ? json(c.renyi_rate) : json(format_real(c.renyi_rate));
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << "k " << format_real(c.k) << "\nrenyi_rate " << format_real(c.renyi_rate) << "\n";
  }
  return kOk;
}

struct SymmetrizeArgs {
  std::string ref;
  std::optional<std::string> law, out;
  std::int64_t max_delta = 1000;
};

int run_symmetrize(const SymmetrizeArgs& a) {
  const auto ref = load_matrix(a.ref);
  const auto law = resolve_law(ref, a.law, a.max_delta);
  const auto s = build_symmetrizer(law, ref.edges());
  verify_symmetrization(s, ref);
  emit(a.out, symmetrizer_to_json(s));
  return kOk;
}

struct SimulateArgs {
  std::string p;
  std::size_t n = 0;
  std::optional<std::string> initial, out;
  std::optional<State> start;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  std::string format = "text";
};

int run_simulate(const SimulateArgs& a) {
  const auto p = load_matrix(a.p);
  std::vector<double> init;
  if (a.start) {
    if (*a.start >= p.state_count()) throw InvalidConfig("--start is not a state of the chain");
    init.assign(p.state_count(), 0.0);
    init[*a.start] = 1.0;
  } else if (a.initial) {
    init = parse_list<double>(*a.initial, "--initial");
    if (init.size() != p.state_count()) throw InvalidConfig("--initial has the wrong number of entries");
  } else {
    init = stationary_distribution(p).probs();
  }
  RandomSource rng(resolve_seed(a.seed), a.stream);
  const auto x = simulate(p, init, a.n, rng);
  const bool as_json = a.format == "json" || (a.out && fs::path(*a.out).extension() == ".json");
  emit(a.out, as_json ? trajectory_to_json(x) : trajectory_to_text(x));
  return kOk;
}

struct EmbedArgs {
  std::string sigma, traj;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  std::string format = "text";
};

int run_embed(const EmbedArgs& a) {
  const auto s = symmetrizer_from_json(read_file(a.sigma));
  const auto x = load_trajectory(a.traj);
  RandomSource rng(resolve_seed(a.seed), a.stream);
  const auto y = embed_trajectory(s.embedding(), x, rng);
  const bool as_json = a.format == "json" || (a.out && fs::path(*a.out).extension() == ".json");
  emit(a.out, as_json ? trajectory_to_json(y) : trajectory_to_text(y));
  return kOk;
}

struct TestArgs {
  std::string ref, traj;
  std::optional<std::string> law, out;
  std::int64_t max_delta = 1000;
  double epsilon = 0.1;
  std::optional<std::uint64_t> seed;
  std::string tester = "plugin";
};

int run_test(const TestArgs& a) {
  const auto ref = load_matrix(a.ref);
  const auto x = load_trajectory(a.traj);
  TestConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.n = x.size();
  cfg.tester_id = a.tester;
  cfg.seed = resolve_seed(a.seed);
  RandomSource rng(cfg.seed, 0);
  const auto verdict =
      reduced_identity_test(ref, resolve_law(ref, a.law, a.max_delta), x, cfg, make_tester(cfg.tester_id), rng);
  emit(a.out, verdict_to_json(verdict));
  return kOk;
}

// ---------------------------------------------------------------------------
// Experiments: a JSON config supplies defaults, flags override.

struct ExperimentArgs {
  std::optional<std::string> config, ref, law, out, n_grid, initial;
  std::vector<std::string> alternatives;
  std::optional<double> epsilon, delta;
  std::optional<std::size_t> n, trials, threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> tester;
  std::int64_t max_delta = 1000;
  std::string format = "csv";
};

struct Experiment {
  TransitionMatrix reference;
  RationalStationary law;
  std::vector<TransitionMatrix> alternatives;
  TestConfig config;
  std::vector<std::size_t> n_grid;
  std::size_t trials = 100;
  RiskOptions options;
};

Experiment load_experiment(const ExperimentArgs& a, bool scan) {
  json cfg = json::object();
  fs::path base = ".";
  if (a.config) {
    try {
      cfg = json::parse(read_file(*a.config));
    } catch (const json::exception& e) {
      throw FormatError("experiment config: " + std::string(e.what()));
    }
    if (!cfg.is_object()) throw FormatError("experiment config must be a JSON object");
    base = fs::path(*a.config).parent_path();
    static const std::vector<std::string> known = {"reference", "alternatives", "epsilon", "delta",
                                                   "n",         "n_grid",       "trials",  "seed",
                                                   "tester",    "law",          "threads", "initial"};
    for (const auto& [key, _] : cfg.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw InvalidConfig("experiment config: unknown key '" + key + "'");
      }
    }
  }
  const auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    std::optional<fs::path> ref_path;
    if (a.ref)
      ref_path = *a.ref;
    else if (cfg.contains("reference"))
      ref_path = resolve(cfg["reference"].get<std::string>());
    if (!ref_path) throw InvalidConfig("no reference chain (use --ref or the config key 'reference')");
    auto reference = load_matrix(*ref_path);

    std::vector<TransitionMatrix> alternatives;
    if (!a.alternatives.empty()) {
      for (const auto& p : a.alternatives) alternatives.push_back(load_matrix(p));
    } else if (cfg.contains("alternatives")) {
      for (const auto& p : cfg["alternatives"]) alternatives.push_back(load_matrix(resolve(p.get<std::string>())));
    }

    std::optional<std::string> law = a.law;
    if (!law && cfg.contains("law")) law = law_string(RationalStationary(cfg["law"].get<std::vector<std::int64_t>>()));

    TestConfig tc;
    tc.epsilon = a.epsilon.value_or(cfg.value("epsilon", tc.epsilon));
    tc.delta = a.delta.value_or(cfg.value("delta", tc.delta));
    tc.n = a.n.value_or(cfg.value("n", tc.n));
    tc.tester_id = a.tester.value_or(cfg.value("tester", tc.tester_id));
    std::optional<std::uint64_t> seed = a.seed;
    if (!seed && cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
    tc.seed = resolve_seed(seed);

    std::vector<std::size_t> grid;
    if (a.n_grid)
      grid = parse_list<std::size_t>(*a.n_grid, "--n-grid");
    else if (cfg.contains("n_grid"))
      grid = cfg["n_grid"].get<std::vector<std::size_t>>();
    if (scan && grid.empty()) throw InvalidConfig("scan needs an n grid (--n-grid or the config key 'n_grid')");

    Experiment e{std::move(reference), RationalStationary({1, 1}), std::move(alternatives), tc, grid, 100, {}};
    e.law = resolve_law(e.reference, law, a.max_delta);
    e.trials = a.trials.value_or(cfg.value("trials", e.trials));
    e.options.threads = a.threads.value_or(cfg.value("threads", std::size_t{0}));
    // Every hypothesis starts from its own stationary law unless a common
    // initial law is given.
    if (a.initial)
      e.options.initial = parse_list<double>(*a.initial, "--initial");
    else if (cfg.contains("initial"))
      e.options.initial = cfg["initial"].get<std::vector<double>>();
    return e;
  } catch (const json::exception& e) {
    throw FormatError("experiment config: " + std::string(e.what()));
  }
}

json report_to_json(const RiskReport& r) {
  json row = {{"n", r.n},
              {"trials", r.trials},
              {"type1_freq", r.type1_freq},
              {"type2_freqs", r.type2_freqs},
              {"risk_estimate", r.risk_estimate}};
  row["type2_freq_max"] = r.type2_freq_max ? json(*r.type2_freq_max) : json(nullptr);
  return row;
}

int run_risk(const ExperimentArgs& a) {
  const auto e = load_experiment(a, false);
  const auto r = estimate_risk(e.reference, e.law, e.alternatives, e.config, e.trials, e.options);
  if (a.format == "json") {
    json doc = report_to_json(r);
    doc["seed"] = e.config.seed;
    emit(a.out, doc.dump() + "\n");
  } else {
    emit(a.out, risk_table_to_csv({r}));
  }
  return kOk;
}

int run_scan(const ExperimentArgs& a) {
  const auto e = load_experiment(a, true);
  const auto s = sample_complexity_scan(e.reference, e.law, e.alternatives, e.config, e.n_grid, e.trials, e.options);
  if (a.format == "json") {
    json rows = json::array();
    for (const auto& r : s.rows) rows.push_back(report_to_json(r));
    json doc = {{"rows", rows}, {"seed", e.config.seed}, {"delta", e.config.delta}};
    doc["smallest_n"] = s.smallest_n ? json(*s.smallest_n) : json(nullptr);
    emit(a.out, doc.dump() + "\n");
  } else {
    emit(a.out, risk_table_to_csv(s.rows));
  }
  return kOk;
}

struct VerifyArgs {
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
};

int run_verify(const VerifyArgs& a) {
  const auto report = run_oracle_suite(a.trials, resolve_seed(a.seed));
  std::cout << format_report(report);
  return report.passed() ? kOk : kFailure;
}

int classify(const std::exception& e) {
  std::cerr << "markov_id: " << e.what() << "\n";
  if (dynamic_cast<const ValidationError*>(&e)) return kUsage;
  if (dynamic_cast<const PreconditionError*>(&e)) return kPrecondition;
  if (dynamic_cast<const NumericalError*>(&e)) return kNumerical;
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity testing of reversible Markov chains by symmetrization"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "markov_id 0.1.0");
  std::function<int()> action;

  const auto format_check = CLI::IsMember({"text", "json"});
  const auto table_check = CLI::IsMember({"csv", "json"});

  InspectArgs inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Validate a chain and report its structure");
  c_inspect->add_option("--p,p", inspect.p, "Transition matrix file")->required()->check(CLI::ExistingFile);
  c_inspect->add_option("--max-delta", inspect.max_delta, "Largest denominator for the rational law");
  c_inspect->callback([&] { action = [&] { return run_inspect(inspect); }; });

  ContrastArgs con;
  auto* c_con = app.add_subcommand("contrast", "Kazakos contrast and Renyi-1/2 rate of two chains");
  c_con->add_option("--p", con.p, "First matrix")->required()->check(CLI::ExistingFile);
  c_con->add_option("--q", con.q, "Second matrix")->required()->check(CLI::ExistingFile);
  c_con->add_option("--format", con.format)->check(format_check);
  c_con->callback([&] { action = [&] { return run_contrast(con); }; });

  SymmetrizeArgs sym;
  auto* c_sym = app.add_subcommand("symmetrize", "Build the symmetrizing embedding of a reversible reference");
  c_sym->add_option("--ref", sym.ref, "Reference matrix")->required()->check(CLI::ExistingFile);
  c_sym->add_option("--law", sym.law, "Stationary numerators, e.g. 1,1,2 (default: rationalized)");
  c_sym->add_option("--max-delta", sym.max_delta, "Largest denominator when rationalizing");
  c_sym->add_option("--out,-o", sym.out, "Output file (default: stdout)");
  c_sym->callback([&] { action = [&] { return run_symmetrize(sym); }; });

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Sample a trajectory");
  c_sim->add_option("--p", sim.p, "Transition matrix")->required()->check(CLI::ExistingFile);
  c_sim->add_option("--n", sim.n, "Trajectory length")->required()->check(CLI::PositiveNumber);
  auto* o_start = c_sim->add_option("--start", sim.start, "Start in this state");
  c_sim->add_option("--initial", sim.initial, "Initial law as comma-separated weights")->excludes(o_start);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--stream", sim.stream);
  c_sim->add_option("--format", sim.format)->check(format_check);
  c_sim->add_option("--out,-o", sim.out);
  c_sim->callback([&] { action = [&] { return run_simulate(sim); }; });

  EmbedArgs emb;
  auto* c_emb = app.add_subcommand("embed", "Lift a trajectory through a symmetrizer");
  c_emb->add_option("--sigma", emb.sigma, "Symmetrizer JSON")->required()->check(CLI::ExistingFile);
  c_emb->add_option("--traj", emb.traj, "Trajectory file")->required()->check(CLI::ExistingFile);
  c_emb->add_option("--seed", emb.seed);
  c_emb->add_option("--stream", emb.stream);
  c_emb->add_option("--format", emb.format)->check(format_check);
  c_emb->add_option("--out,-o", emb.out);
  c_emb->callback([&] { action = [&] { return run_embed(emb); }; });

  TestArgs tst;
  auto* c_tst = app.add_subcommand("test", "Run the identity test on one trajectory");
  c_tst->add_option("--ref", tst.ref, "Reference matrix")->required()->check(CLI::ExistingFile);
  c_tst->add_option("--traj", tst.traj, "Observed trajectory")->required()->check(CLI::ExistingFile);
  c_tst->add_option("--law", tst.law);
  c_tst->add_option("--max-delta", tst.max_delta);
  c_tst->add_option("--epsilon", tst.epsilon);
  c_tst->add_option("--tester", tst.tester);
  c_tst->add_option("--seed", tst.seed);
  c_tst->add_option("--out,-o", tst.out);
  c_tst->callback([&] { action = [&] { return run_test(tst); }; });

  ExperimentArgs risk, scan;
  const auto experiment_options = [&](CLI::App* c, ExperimentArgs& a) {
    c->add_option("--config", a.config, "Experiment config JSON")->check(CLI::ExistingFile);
    c->add_option("--ref", a.ref);
    c->add_option("--alt", a.alternatives, "Alternative matrix (repeatable)");
    c->add_option("--law", a.law);
    c->add_option("--max-delta", a.max_delta);
    c->add_option("--epsilon", a.epsilon);
    c->add_option("--delta", a.delta);
    c->add_option("--trials", a.trials);
    c->add_option("--seed", a.seed);
    c->add_option("--tester", a.tester);
    c->add_option("--threads", a.threads);
    c->add_option("--initial", a.initial, "Common initial law (default: each chain's stationary law)");
    c->add_option("--format", a.format)->check(table_check);
    c->add_option("--out,-o", a.out);
  };
  auto* c_risk = app.add_subcommand("risk", "Monte Carlo risk at one sample length");
  experiment_options(c_risk, risk);
  c_risk->add_option("--n", risk.n);
  c_risk->callback([&] { action = [&] { return run_risk(risk); }; });

  auto* c_scan = app.add_subcommand("scan", "Risk over a grid of sample lengths");
  experiment_options(c_scan, scan);
  c_scan->add_option("--n-grid", scan.n_grid, "Comma-separated lengths");
  c_scan->callback([&] { action = [&] { return run_scan(scan); }; });

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run the randomized identity oracles");
  c_ver->add_option("--trials", ver.trials)->check(CLI::PositiveNumber);
  c_ver->add_option("--seed", ver.seed);
  c_ver->callback([&] { action = [&] { return run_verify(ver); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    return classify(e);
  }
}
