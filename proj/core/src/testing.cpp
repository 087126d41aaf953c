#include "markov_id/testing.hpp"

#include "markov_id/contrast.hpp"
#include "markov_id/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace markov_id {

using nlohmann::json;

void TestConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidConfig("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidConfig("delta must lie in (0, 1)");
  if (n < 1) throw InvalidConfig("sample length n must be at least 1");
  if (epsilon_low && !(*epsilon_low > 0.0 && *epsilon_low < epsilon)) {
    throw InvalidConfig("epsilon_low must lie in (0, epsilon)");
  }
}

std::string verdict_to_json(const TestVerdict& v) {
  json doc = {
      {"decision", static_cast<int>(v.decision)},
      {"decision_label", v.decision == Decision::Reject ? "reject" : "accept"},
      {"tester", v.diagnostics.tester_id},
      {"contrast_estimate", v.diagnostics.contrast_estimate},
      {"insufficient_data", v.diagnostics.insufficient_data},
      {"off_edge_transitions", v.diagnostics.off_edge_transitions},
      {"visit_counts", v.diagnostics.visit_counts},
  };
  return doc.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Plug-in tester

PluginSymmetricTester::PluginSymmetricTester(std::size_t min_visits, std::optional<double> smoothing)
    : min_visits_(min_visits), smoothing_(smoothing) {
  if (smoothing_ && !(*smoothing_ > 0.0)) throw InvalidConfig("smoothing must be positive");
}

TestVerdict PluginSymmetricTester::test(const TransitionMatrix& reference, const Trajectory& y,
                                        const TestConfig& config, RandomSource& /*rng*/) const {
  config.validate();
  if (!reference.is_symmetric(kStochasticTol)) throw PreconditionFailed("plug-in tester needs a symmetric reference");
  if (!is_irreducible(reference)) throw PreconditionFailed("plug-in tester needs an irreducible reference");
  const auto k = reference.state_count();
  if (y.state_count > k) {
    throw IncompatibleStateCount("trajectory alphabet (" + std::to_string(y.state_count) +
                                 ") exceeds the reference's state count (" + std::to_string(k) + ")");
  }
  Trajectory traj = y;
  traj.state_count = k;
  const Eigen::MatrixXd counts = transition_counts(traj);
  const double alpha = smoothing_.value_or(1.0 / static_cast<double>(k));

  TestVerdict verdict;
  auto& diag = verdict.diagnostics;
  diag.tester_id = id();
  diag.visit_counts.resize(k);

  Eigen::MatrixXd estimate = reference.matrix();
  std::size_t sparse_rows = 0;
  for (State x = 0; x < k; ++x) {
    const auto visits = static_cast<std::size_t>(counts.row(x).sum());
    diag.visit_counts[x] = visits;
    double on_edges = 0.0;
    std::size_t degree = 0;
    for (State x2 = 0; x2 < k; ++x2) {
      if (reference.edges().contains(x, x2)) {
        on_edges += counts(x, x2);
        ++degree;
      } else {
        diag.off_edge_transitions += static_cast<std::size_t>(counts(x, x2));
      }
    }
    if (visits < min_visits_) {
      ++sparse_rows;
      continue;
    }
    const double denom = on_edges + alpha * static_cast<double>(degree);
    for (State x2 = 0; x2 < k; ++x2) {
      estimate(x, x2) = reference.edges().contains(x, x2) ? (counts(x, x2) + alpha) / denom : 0.0;
    }
  }
  diag.insufficient_data = 2 * sparse_rows > k;

  const auto p_hat = TransitionMatrix::validate(reference.edges(), std::move(estimate));
  diag.contrast_estimate = contrast(p_hat, reference).k;
  verdict.decision = diag.contrast_estimate > config.epsilon / 2.0 ? Decision::Reject : Decision::AcceptNull;
  return verdict;
}

std::shared_ptr<const SymmetricTester> make_tester(const std::string& id) {
  if (id == PluginSymmetricTester::kId) return std::make_shared<PluginSymmetricTester>();
  throw InvalidConfig("unknown tester id '" + id + "' (available: plugin)");
}

// ---------------------------------------------------------------------------
// Reduction pipeline

namespace {

void require_membership(const TransitionMatrix& p, const RationalStationary& law, const EdgeSet& edges,
                        const char* who) {
  const auto report = check_vtest_membership(p, law, edges);
  if (report.member) return;
  std::string failed;
  for (auto a : report.failed) failed += (failed.empty() ? "" : ", ") + to_string(a);
  throw NotInVtest(std::string(who) + " is outside the restricted class (failed: " + failed + ")");
}

Symmetrizer checked_symmetrizer(const TransitionMatrix& reference, const RationalStationary& law) {
  require_membership(reference, law, reference.edges(), "reference");
  return build_symmetrizer(law, reference.edges());
}

}  // namespace

ReductionTester::ReductionTester(TransitionMatrix reference, RationalStationary law,
                                 std::shared_ptr<const SymmetricTester> tester)
    : reference_(std::move(reference)),
      symmetrizer_(checked_symmetrizer(reference_, law)),
      embedded_reference_(embed_matrix(symmetrizer_, reference_)),
      tester_(std::move(tester)) {
  if (!tester_) throw InvalidConfig("no symmetric tester supplied");
  const double asymmetry = verify_symmetrization(symmetrizer_, reference_);
  if (asymmetry > 1e-12) {
    std::ostringstream os;
    os << "embedded reference is not symmetric (max asymmetry " << asymmetry << ")";
    throw PreconditionFailed(os.str());
  }
}

TestVerdict ReductionTester::test(const Trajectory& x, const TestConfig& config, RandomSource& rng) const {
  config.validate();
  const Trajectory y = embed_trajectory(symmetrizer_.embedding(), x, rng);
  return tester_->test(embedded_reference_, y, config, rng);
}

TestVerdict reduced_identity_test(const TransitionMatrix& reference, const RationalStationary& law, const Trajectory& x,
                                  const TestConfig& config, std::shared_ptr<const SymmetricTester> tester,
                                  RandomSource& rng) {
  const ReductionTester pipeline(reference, law, std::move(tester));
  return pipeline.test(x, config, rng);
}

// ---------------------------------------------------------------------------
// Risk harness

std::size_t default_thread_count() {
  if (const char* env = std::getenv("MARKOV_ID_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Hypothesis {
  const TransitionMatrix* chain;
  std::vector<double> initial;
};

}  // namespace

RiskReport estimate_risk(const TransitionMatrix& reference, const RationalStationary& law,
                         const std::vector<TransitionMatrix>& alternatives, const TestConfig& config,
                         std::size_t trials, const RiskOptions& options) {
  config.validate();
  if (trials == 0) throw InvalidConfig("trials must be positive");
  const ReductionTester pipeline(reference, law, make_tester(config.tester_id));

  std::vector<Hypothesis> hypotheses;
  auto initial_for = [&](const TransitionMatrix& chain) {
    if (options.initial) {
      if (options.initial->size() != chain.state_count()) throw InvalidConfig("initial law has the wrong size");
      return *options.initial;
    }
    return stationary_distribution(chain).probs();
  };
  hypotheses.push_back({&reference, initial_for(reference)});
  for (std::size_t a = 0; a < alternatives.size(); ++a) {
    const auto& alt = alternatives[a];
    const auto report = check_vtest_membership(alt, law, reference.edges());
    if (!report.member) {
      std::string failed;
      for (auto f : report.failed) failed += (failed.empty() ? "" : ", ") + to_string(f);
      throw ExclusionRegion("alternative " + std::to_string(a) + " is outside the restricted class (failed: " + failed +
                            ")");
    }
    const double k = contrast(alt, reference).k;
    if (!(k > config.epsilon)) {
      std::ostringstream os;
      os << "alternative " << a << " has contrast " << k << " <= epsilon = " << config.epsilon;
      throw ExclusionRegion(os.str());
    }
    hypotheses.push_back({&alt, initial_for(alt)});
  }

  const std::size_t tasks = hypotheses.size() * trials;
  std::vector<char> rejected(tasks, 0);
  parallel_for(tasks, options.threads ? options.threads : default_thread_count(), [&](std::size_t i) {
    const std::size_t h = i / trials;
    const std::size_t t = i % trials;
    RandomSource rng(config.seed, (static_cast<std::uint64_t>(h) << 32) | t);
    const auto x = simulate(*hypotheses[h].chain, hypotheses[h].initial, config.n, rng);
    rejected[i] = pipeline.test(x, config, rng).decision == Decision::Reject;
  });

  RiskReport report;
  report.n = config.n;
  report.trials = trials;
  const auto freq = [&](std::size_t h, bool count_rejections) {
    std::size_t hits = 0;
    for (std::size_t t = 0; t < trials; ++t) hits += (rejected[h * trials + t] != 0) == count_rejections;
    return static_cast<double>(hits) / static_cast<double>(trials);
  };
  report.type1_freq = freq(0, true);
  for (std::size_t h = 1; h < hypotheses.size(); ++h) {
    const double f = freq(h, false);
    report.type2_freqs.push_back(f);
    report.type2_freq_max = std::max(report.type2_freq_max.value_or(0.0), f);
  }
  report.risk_estimate = report.type1_freq + report.type2_freq_max.value_or(0.0);
  return report;
}

ScanResult sample_complexity_scan(const TransitionMatrix& reference, const RationalStationary& law,
                                  const std::vector<TransitionMatrix>& alternatives, const TestConfig& config,
                                  const std::vector<std::size_t>& n_grid, std::size_t trials,
                                  const RiskOptions& options) {
  ScanResult out;
  for (std::size_t n : n_grid) {
    TestConfig at = config;
    at.n = n;
    out.rows.push_back(estimate_risk(reference, law, alternatives, at, trials, options));
    if (!out.smallest_n && out.rows.back().risk_estimate < config.delta) out.smallest_n = n;
  }
  return out;
}

std::string risk_table_to_csv(const std::vector<RiskReport>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "n,type1_freq,type2_freq_max,risk_estimate\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.type1_freq << ',';
    if (r.type2_freq_max) os << *r.type2_freq_max;
    os << ',' << r.risk_estimate << '\n';
  }
  return os.str();
}

}  // namespace markov_id
