#include "markov_id/verify.hpp"

#include "markov_id/contrast.hpp"
#include "markov_id/embedding.hpp"
#include "markov_id/generators.hpp"
#include "markov_id/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace markov_id {

bool OracleReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed(); });
}

namespace {

void record(OracleCheck& check, double deviation) {
  ++check.cases;
  if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
  check.worst = std::max(check.worst, deviation);
  if (!(deviation <= check.tolerance)) ++check.failures;
}

}  // namespace

OracleReport run_oracle_suite(std::size_t trials, std::uint64_t seed) {
  OracleCheck preservation{"contrast-preservation", 0, 0.0, 1e-9, 0};
  OracleCheck symmetry{"embedded-reference-symmetric", 0, 0.0, 1e-12, 0};
  OracleCheck uniform{"embedded-law-uniform", 0, 0.0, 1e-12, 0};
  OracleCheck retraction{"lump-after-embed", 0, 0.0, 1e-12, 0};
  OracleCheck commute{"path-morphism-identity", 0, 0.0, 1e-12, 0};
  OracleCheck renyi{"path-renyi-equality", 0, 0.0, 1e-10, 0};
  OracleCheck generic{"path-morphism-random-embedding", 0, 0.0, 1e-12, 0};

  for (std::size_t t = 0; t < trials; ++t) {
    RandomSource rng(seed, t);
    const std::size_t states = 2 + static_cast<std::size_t>(rng.uniform01() * 4.0);
    const auto pair = random_vtest_pair(std::min<std::size_t>(states, 5), 12, rng);
    const auto sigma = build_symmetrizer(pair.law, pair.p_ref.edges());
    const auto ep = embed_matrix(sigma, pair.p);
    const auto eref = embed_matrix(sigma, pair.p_ref);

    record(preservation, std::abs(contrast(ep, eref).k - contrast(pair.p, pair.p_ref).k));
    record(symmetry, verify_symmetrization(sigma, pair.p_ref));

    const auto law = embed_distribution(sigma.embedding(), pair.law.distribution());
    double dev = 0.0;
    for (double v : law.probs()) dev = std::max(dev, std::abs(v - 1.0 / static_cast<double>(sigma.delta())));
    record(uniform, dev);

    const auto back = lump(eref, sigma.lumping());
    record(retraction, (back.matrix() - pair.p_ref.matrix()).cwiseAbs().maxCoeff());
  }

  const std::size_t path_cases = std::min<std::size_t>(trials, 50);
  for (std::size_t t = 0; t < path_cases; ++t) {
    RandomSource rng(seed ^ 0x5eed5eedULL, t);
    const std::size_t states = 2 + (t % 2);
    const auto pair = random_vtest_pair(states, 6, rng);
    const auto sigma = build_symmetrizer(pair.law, pair.p_ref.edges());
    const std::size_t n = 2 + t % 3;
    record(commute, verify_lemma1(pair.p, sigma.embedding(), n));
    const auto [base, embedded] = verify_monotonicity_equality(pair.p, pair.p_ref, sigma.embedding(), n);
    record(renyi, std::abs(base - embedded));

    const auto l = random_memoryless_embedding(states, states + 1 + t % 3, rng);
    record(generic, verify_lemma1(random_irreducible(states, rng), l, n));
  }

  return OracleReport{{preservation, symmetry, uniform, retraction, commute, renyi, generic}};
}

std::string format_report(const OracleReport& report) {
  std::string out;
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-4s %-32s cases=%-5zu worst=%.3e tol=%.0e\n", c.passed() ? "PASS" : "FAIL",
                  c.name.c_str(), c.cases, c.worst, c.tolerance);
    out += line;
  }
  return out;
}

}  // namespace markov_id
