#pragma once

#include "markov_id/embedding.hpp"
#include "markov_id/markov_core.hpp"
#include "markov_id/sampling.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace markov_id {

struct TestConfig {
  double epsilon = 0.1;
  double delta = 0.2;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string tester_id = "plugin";
  // Lower threshold of the robust variant (K < epsilon_low vs K > epsilon).
  // Reserved: no shipped tester reads it.
  std::optional<double> epsilon_low;

  // Throws InvalidConfig unless 0 < epsilon < 1, 0 < delta < 1, n >= 1 and
  // 0 < epsilon_low < epsilon when set.
  void validate() const;
};

enum class Decision : int { AcceptNull = 0, Reject = 1 };

struct TestDiagnostics {
  std::vector<std::size_t> visit_counts;
  double contrast_estimate = 0.0;
  std::string tester_id;
  bool insufficient_data = false;
  // Observed transitions outside the reference's edge set; dropped by the
  // projection onto the reference support.
  std::size_t off_edge_transitions = 0;
};

struct TestVerdict {
  Decision decision = Decision::AcceptNull;
  TestDiagnostics diagnostics;
};

std::string verdict_to_json(const TestVerdict& v);

// Identity tester for symmetric chains: given the symmetric reference over
// [delta] and a trajectory over [delta], decide K(P, ref) > epsilon versus
// P == ref. Implementations must be deterministic given the RandomSource.
class SymmetricTester {
 public:
  virtual ~SymmetricTester() = default;
  virtual std::string id() const = 0;
  virtual TestVerdict test(const TransitionMatrix& reference, const Trajectory& y, const TestConfig& config,
                           RandomSource& rng) const = 0;
};

// Baseline plug-in tester. Rows visited at least min_visits times are
// estimated from counts on the reference's edges plus additive smoothing
// (default 1/|states|) and normalized; the remaining rows are copied from the
// reference. Rejects iff K(estimate, reference) > epsilon / 2.
//
// This is a stand-in with empirically calibrated sample sizes, not a tester
// with a proven O(|states| / epsilon^4) guarantee.
class PluginSymmetricTester final : public SymmetricTester {
 public:
  static constexpr const char* kId = "plugin";

  explicit PluginSymmetricTester(std::size_t min_visits = 10, std::optional<double> smoothing = std::nullopt);

  std::string id() const override { return kId; }
  TestVerdict test(const TransitionMatrix& reference, const Trajectory& y, const TestConfig& config,
                   RandomSource& rng) const override;

 private:
  std::size_t min_visits_;
  std::optional<double> smoothing_;
};

// Throws InvalidConfig for unknown ids.
std::shared_ptr<const SymmetricTester> make_tester(const std::string& id);

// Reduction of reversible identity testing to symmetric identity testing.
// Construction checks the reference against its own restricted class, builds
// the symmetrizer and the symmetric embedded reference once; test() embeds a
// trajectory and delegates to the symmetric tester.
class ReductionTester {
 public:
  // Throws NotInVtest, or PreconditionFailed if the embedded reference is not
  // symmetric to 1e-12.
  ReductionTester(TransitionMatrix reference, RationalStationary law, std::shared_ptr<const SymmetricTester> tester);

  const TransitionMatrix& reference() const noexcept { return reference_; }
  const Symmetrizer& symmetrizer() const noexcept { return symmetrizer_; }
  const TransitionMatrix& embedded_reference() const noexcept { return embedded_reference_; }
  const SymmetricTester& tester() const noexcept { return *tester_; }

  TestVerdict test(const Trajectory& x, const TestConfig& config, RandomSource& rng) const;

 private:
  TransitionMatrix reference_;
  Symmetrizer symmetrizer_;
  TransitionMatrix embedded_reference_;
  std::shared_ptr<const SymmetricTester> tester_;
};

TestVerdict reduced_identity_test(const TransitionMatrix& reference, const RationalStationary& law, const Trajectory& x,
                                  const TestConfig& config, std::shared_ptr<const SymmetricTester> tester,
                                  RandomSource& rng);

struct RiskOptions {
  // Initial law of every simulated trajectory; the chain's own stationary law
  // when unset.
  std::optional<std::vector<double>> initial;
  // 0 selects MARKOV_ID_THREADS or the hardware concurrency.
  std::size_t threads = 0;
};

struct RiskReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  double type1_freq = 0.0;
  std::vector<double> type2_freqs;  // one per alternative
  std::optional<double> type2_freq_max;
  double risk_estimate = 0.0;  // type1 + max type2
};

// Monte Carlo estimate of the risk at sample size config.n. Trial t under
// hypothesis h (0 = reference, h >= 1 the alternatives) draws from
// RandomSource(config.seed, (h << 32) | t). Alternatives outside the
// restricted class or with K <= epsilon raise ExclusionRegion.
RiskReport estimate_risk(const TransitionMatrix& reference, const RationalStationary& law,
                         const std::vector<TransitionMatrix>& alternatives, const TestConfig& config,
                         std::size_t trials, const RiskOptions& options = {});

struct ScanResult {
  std::vector<RiskReport> rows;
  std::optional<std::size_t> smallest_n;  // first grid n with risk < delta
};

ScanResult sample_complexity_scan(const TransitionMatrix& reference, const RationalStationary& law,
                                  const std::vector<TransitionMatrix>& alternatives, const TestConfig& config,
                                  const std::vector<std::size_t>& n_grid, std::size_t trials,
                                  const RiskOptions& options = {});

// Columns: n,type1_freq,type2_freq_max,risk_estimate.
std::string risk_table_to_csv(const std::vector<RiskReport>& rows);

std::size_t default_thread_count();

}  // namespace markov_id
