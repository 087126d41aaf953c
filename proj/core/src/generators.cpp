#include "markov_id/generators.hpp"

#include "markov_id/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace markov_id {

namespace {

std::size_t uniform_index(std::size_t n, RandomSource& rng) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n)));
}

double uniform(double lo, double hi, RandomSource& rng) { return lo + (hi - lo) * rng.uniform01(); }

}  // namespace

RationalStationary random_rational(std::size_t states, std::int64_t max_delta, RandomSource& rng) {
  if (states < 2 || max_delta < static_cast<std::int64_t>(states)) {
    throw InvalidConfig("random_rational needs 2 <= states <= max_delta");
  }
  const auto span = static_cast<std::size_t>(max_delta) - states + 1;
  const auto delta = static_cast<std::int64_t>(states + uniform_index(span, rng));
  // states - 1 distinct cut points in 1..delta-1.
  std::vector<std::int64_t> points(static_cast<std::size_t>(delta - 1));
  std::iota(points.begin(), points.end(), std::int64_t{1});
  for (std::size_t i = 0; i + 1 < states; ++i) {
    std::swap(points[i], points[i + uniform_index(points.size() - i, rng)]);
  }
  std::vector<std::int64_t> cuts(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(states - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::int64_t> p;
  std::int64_t prev = 0;
  for (auto c : cuts) {
    p.push_back(c - prev);
    prev = c;
  }
  p.push_back(delta - prev);
  return RationalStationary(std::move(p));
}

EdgeSet random_reversible_edges(std::size_t states, RandomSource& rng, double density) {
  std::vector<State> perm(states);
  std::iota(perm.begin(), perm.end(), State{0});
  for (std::size_t i = states; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(i, rng)]);
  std::vector<char> adj(states * states, 0);
  for (State x = 0; x < states; ++x) adj[x * states + x] = 1;
  for (std::size_t i = 1; i < states; ++i) {
    const State a = perm[i];
    const State b = perm[uniform_index(i, rng)];
    adj[a * states + b] = adj[b * states + a] = 1;
  }
  for (State x = 0; x < states; ++x)
    for (State y = x + 1; y < states; ++y)
      if (rng.uniform01() < density) adj[x * states + y] = adj[y * states + x] = 1;
  std::vector<Edge> edges;
  for (State x = 0; x < states; ++x)
    for (State y = 0; y < states; ++y)
      if (adj[x * states + y]) edges.emplace_back(x, y);
  return EdgeSet(states, std::move(edges));
}

TransitionMatrix random_reversible(const RationalStationary& r, const EdgeSet& d, RandomSource& rng) {
  const auto n = d.state_count();
  if (r.state_count() != n) throw InvalidConfig("law and edge set disagree on the state count");
  for (State x = 0; x < n; ++x)
    if (!d.contains(x, x)) throw InvalidConfig("random_reversible needs a self-loop on every state");

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [x, y] : d.edges()) {
    if (x < y) {
      if (!d.contains(y, x)) throw InvalidConfig("random_reversible needs a symmetric edge set");
      w(x, y) = w(y, x) = uniform(0.1, 1.0, rng);
    }
  }
  // Scale so off-diagonal flow out of x stays below 0.9 pi(x).
  double scale = std::numeric_limits<double>::infinity();
  for (State x = 0; x < n; ++x) {
    const double out = w.row(x).sum();
    if (out > 0) scale = std::min(scale, 0.9 * r.prob(x) / out);
  }
  scale *= uniform(0.3, 1.0, rng);

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (State x = 0; x < n; ++x) {
    double off = 0.0;
    for (State y = 0; y < n; ++y) {
      if (y == x || w(x, y) == 0.0) continue;
      p(x, y) = scale * w(x, y) / r.prob(x);
      off += p(x, y);
    }
    p(x, x) = 1.0 - off;
  }
  return TransitionMatrix::validate(d, std::move(p));
}

TransitionMatrix random_stochastic(std::size_t states, RandomSource& rng, double sparsity) {
  Eigen::MatrixXd p(states, states);
  for (State x = 0; x < states; ++x) {
    const State keep = uniform_index(states, rng);
    for (State y = 0; y < states; ++y) {
      const double v = uniform(0.05, 1.0, rng);
      p(x, y) = (y != keep && rng.uniform01() < sparsity) ? 0.0 : v;
    }
    p.row(x) /= p.row(x).sum();
    // Pin the row sum with the kept entry.
    p(x, keep) = 0.0;
    p(x, keep) = 1.0 - p.row(x).sum();
  }
  // Inferred edges need every state as a target; reinstate a self-loop where
  // a column came out empty.
  for (State y = 0; y < states; ++y) {
    if (p.col(y).maxCoeff() > 0.0) continue;
    p(y, y) = 0.5;
    p.row(y) /= p.row(y).sum();
  }
  return TransitionMatrix::from_dense(std::move(p));
}

TransitionMatrix random_irreducible(std::size_t states, RandomSource& rng) {
  return random_stochastic(states, rng, 0.0);
}

MemorylessEmbedding random_memoryless_embedding(std::size_t states, std::size_t target_states, RandomSource& rng) {
  if (target_states < states) throw InvalidConfig("embedding target must be at least as large as the source");
  std::vector<State> kappa(target_states);
  for (State y = 0; y < target_states; ++y) kappa[y] = y < states ? y : uniform_index(states, rng);
  for (std::size_t i = target_states; i > 1; --i) std::swap(kappa[i - 1], kappa[uniform_index(i, rng)]);
  LumpingMap lumping(states, std::move(kappa));
  std::vector<double> weights(target_states);
  for (State x = 0; x < states; ++x) {
    const auto& block = lumping.block(x);
    if (block.size() == 1) {
      weights[block.front()] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (State y : block) sum += weights[y] = uniform(0.1, 1.0, rng);
    for (State y : block) weights[y] /= sum;
  }
  return MemorylessEmbedding(std::move(lumping), std::move(weights));
}

VtestPair random_vtest_pair(std::size_t states, std::int64_t max_delta, RandomSource& rng) {
  RationalStationary law = random_rational(states, max_delta, rng);
  const EdgeSet d = random_reversible_edges(states, rng);
  TransitionMatrix p = random_reversible(law, d, rng);
  TransitionMatrix p_ref = random_reversible(law, d, rng);
  return {std::move(p), std::move(p_ref), std::move(law)};
}

}  // namespace markov_id
