// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria. Criterion k draws its random cases from seed k,
// fixed before any run.

#include "markov_id/contrast.hpp"
#include "markov_id/embedding.hpp"
#include "markov_id/generators.hpp"
#include "markov_id/paths.hpp"
#include "markov_id/sampling.hpp"
#include "markov_id/testing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace markov_id;

namespace {

struct Line {
  int id;
  std::string name;
  bool ok;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Criteria 1 and 2 share the same 200 references.
std::vector<Line> contrast_and_symmetrizer() {
  constexpr double kContrastTol = 1e-9;
  constexpr double kSymTol = 1e-12;
  constexpr double kRuntime = 30.0;
  Stopwatch clock;
  RandomSource rng(1, 0);
  double worst_k = 0.0, worst_sym = 0.0, worst_uniform = 0.0, worst_lump = 0.0;
  std::size_t max_delta_seen = 0;
  for (int t = 0; t < 200; ++t) {
    const auto pair = random_vtest_pair(2 + static_cast<std::size_t>(t % 4), 12, rng);
    const auto s = build_symmetrizer(pair.law, pair.p_ref.edges());
    max_delta_seen = std::max<std::size_t>(max_delta_seen, static_cast<std::size_t>(s.delta()));
    const auto sp = embed_matrix(s, pair.p);
    const auto sp_ref = embed_matrix(s, pair.p_ref);
    worst_k = std::max(worst_k, std::abs(contrast(sp, sp_ref).k - contrast(pair.p, pair.p_ref).k));

    worst_sym = std::max(worst_sym, verify_symmetrization(s, pair.p_ref));
    const auto law = embed_distribution(s.embedding(), pair.law.distribution());
    const double uniform = 1.0 / static_cast<double>(s.delta());
    for (double v : law.probs()) worst_uniform = std::max(worst_uniform, std::abs(v - uniform));
    worst_lump = std::max(worst_lump, max_abs_diff(lump(sp_ref, s.lumping()).matrix(), pair.p_ref.matrix()));
  }
  const double elapsed = clock.seconds();
  const bool ok1 = worst_k <= kContrastTol && elapsed < kRuntime;
  const bool ok2 = worst_sym <= kSymTol && worst_uniform <= kSymTol && worst_lump <= kSymTol;
  return {
      {1, "contrast preserved by symmetrizer", ok1,
       fmt("cases=200 |X|=2..5 max_delta=%zu worst=%.3g tol=%.0e time=%.2fs (<%.0fs)", max_delta_seen, worst_k,
           kContrastTol, elapsed, kRuntime)},
      {2, "symmetrizer correctness", ok2,
       fmt("cases=200 asym=%.3g uniform=%.3g lump=%.3g tol=%.0e", worst_sym, worst_uniform, worst_lump, kSymTol)},
  };
}

Line path_law_oracle() {
  constexpr double kCommuteTol = 1e-12;
  constexpr double kRenyiTol = 1e-10;
  constexpr double kRuntime = 60.0;
  Stopwatch clock;
  RandomSource rng(3, 0);
  double worst_commute = 0.0, worst_renyi = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto pair = random_vtest_pair(2 + static_cast<std::size_t>(t % 4), 6, rng);
    const auto s = build_symmetrizer(pair.law, pair.p_ref.edges());
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    worst_commute = std::max(worst_commute, verify_lemma1(pair.p, s.embedding(), n));
    const auto [lhs, rhs] = verify_monotonicity_equality(pair.p, pair.p_ref, s.embedding(), n);
    worst_renyi = std::max(worst_renyi, std::abs(lhs - rhs));
  }
  const double elapsed = clock.seconds();
  const bool ok = worst_commute <= kCommuteTol && worst_renyi <= kRenyiTol && elapsed < kRuntime;
  return {3, "path-law morphism identity", ok,
          fmt("cases=50 n=2..4 commute=%.3g (tol %.0e) renyi=%.3g (tol %.0e) time=%.2fs (<%.0fs)", worst_commute,
              kCommuteTol, worst_renyi, kRenyiTol, elapsed, kRuntime)};
}

Line rate_identity() {
  // Length-12 enumeration caps the alphabet at three states.
  constexpr double kSlack = 1e-9;
  RandomSource rng(4, 0);
  std::size_t violations = 0;
  std::string worst;
  double worst_excess = -INFINITY;
  for (int t = 0; t < 20; ++t) {
    const auto pair = random_vtest_pair(2 + static_cast<std::size_t>(t % 2), 12, rng);
    const auto pi = pair.law.distribution();
    const double target = contrast(pair.p, pair.p_ref).renyi_rate;
    const double gap4 = std::abs(renyi_rate_via_paths(pair.p, pair.p_ref, pi, pi, 4) - target);
    const double gap12 = std::abs(renyi_rate_via_paths(pair.p, pair.p_ref, pi, pi, 12) - target);
    if (!(gap12 < gap4 + kSlack)) ++violations;
    if (gap12 - gap4 > worst_excess) {
      worst_excess = gap12 - gap4;
      worst = fmt("case %d: gap4=%.3g gap12=%.3g", t, gap4, gap12);
    }
  }
  return {4, "finite-n rate approaches spectral rate", violations == 0,
          fmt("cases=20 violations=%zu slack=%.0e worst %s", violations, kSlack, worst.c_str())};
}

// Fixture found by sample_complexity_scan over the doubling grid below with
// seed 5 and 200 trials; the check re-runs the scan and requires it to land
// on the same n.
constexpr std::size_t kSeparationFixtureN = 80;

Line tester_separation() {
  constexpr double kRuntime = 600.0;
  Stopwatch clock;
  const auto reference = TransitionMatrix::from_rows({{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.05, 0.05, 0.9}});
  const auto alternative = TransitionMatrix::from_rows({{0.04, 0.48, 0.48}, {0.48, 0.04, 0.48}, {0.24, 0.24, 0.52}});
  const RationalStationary law({1, 1, 2});
  TestConfig cfg;
  cfg.epsilon = 0.15;
  cfg.delta = 0.2;
  cfg.seed = 5;
  const double k = contrast(alternative, reference).k;
  const std::vector<std::size_t> grid = {10, 20, 40, 80, 160, 320, 640, 1280};
  const auto scan = sample_complexity_scan(reference, law, {alternative}, cfg, grid, 200);
  cfg.n = kSeparationFixtureN;
  const auto at_fixture = estimate_risk(reference, law, {alternative}, cfg, 200);
  const double elapsed = clock.seconds();
  const bool ok = k > cfg.epsilon && scan.smallest_n == kSeparationFixtureN && at_fixture.risk_estimate < cfg.delta &&
                  elapsed < kRuntime;
  return {5, "end-to-end tester separation", ok,
          fmt("K=%.4f eps=%.2f scan_smallest_n=%zu fixture_n=%zu trials=200 type1=%.3f type2=%.3f risk=%.3f "
              "(<%.2f) time=%.2fs (<%.0fs)",
              k, cfg.epsilon, scan.smallest_n.value_or(0), kSeparationFixtureN, at_fixture.type1_freq,
              at_fixture.type2_freq_max.value_or(0.0), at_fixture.risk_estimate, cfg.delta, elapsed, kRuntime)};
}

Line operational_commutation() {
  constexpr double kTol = 0.02;
  constexpr std::size_t kLength = 100000;
  RandomSource gen(6, 0);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto pair = random_vtest_pair(2 + static_cast<std::size_t>(t % 4), 12, gen);
    const auto s = build_symmetrizer(pair.law, pair.p_ref.edges());
    RandomSource rng(6, t + 1);
    const auto x = simulate(pair.p_ref, pair.law.distribution().probs(), kLength, rng);
    const auto y = embed_trajectory(s.embedding(), x, rng);
    worst = std::max(worst, max_abs_diff(empirical_transition_matrix(y), embed_matrix(s, pair.p_ref).matrix()));
  }
  return {6, "operational embedding matches algebraic embedding", worst <= kTol,
          fmt("cases=10 n=%zu worst=%.4f tol=%.2f", kLength, worst, kTol)};
}

Line shared_component() {
  constexpr double kTol = 1e-12;
  const auto p = TransitionMatrix::from_rows({{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}});
  const auto q = TransitionMatrix::from_rows({{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.3, 0.3, 0.4}});
  const auto c = contrast(p, q);
  return {7, "contrast vanishes on a shared component", !(p == q) && std::abs(c.k) <= kTol,
          fmt("K=%.3g tol=%.0e product_irreducible=%s", c.k, kTol, c.product_irreducible ? "yes" : "no")};
}

}  // namespace

int main() {
  std::vector<Line> lines;
  try {
    lines = contrast_and_symmetrizer();
    lines.push_back(path_law_oracle());
    lines.push_back(rate_identity());
    lines.push_back(tester_separation());
    lines.push_back(operational_commutation());
    lines.push_back(shared_component());
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  int failed = 0;
  for (const auto& l : lines) {
    std::printf("%s %d %s: %s\n", l.ok ? "PASS" : "FAIL", l.id, l.name.c_str(), l.detail.c_str());
    failed += l.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed;
}
