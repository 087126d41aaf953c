#pragma once

#include "markov_id/embedding.hpp"
#include "markov_id/markov_core.hpp"
#include "markov_id/sampling.hpp"

#include <cstdint>

namespace markov_id {

// Random instances for property sweeps and the oracle suite.

// delta uniform on [states, max_delta], p a uniform composition of delta.
RationalStationary random_rational(std::size_t states, std::int64_t max_delta, RandomSource& rng);

// Symmetric, strongly connected edge set with a self-loop on every state:
// a random spanning tree plus each remaining pair with probability density.
EdgeSet random_reversible_edges(std::size_t states, RandomSource& rng, double density = 0.5);

// Reversible chain on d with stationary law r, built from a random symmetric
// flow matrix F (F(x,y) = F(y,x), row sums r.prob(x)): P(x,y) = F(x,y)/pi(x)
// off the diagonal and the diagonal takes the remainder. d must contain
// every self-loop.
TransitionMatrix random_reversible(const RationalStationary& r, const EdgeSet& d, RandomSource& rng);

// Dense random row-stochastic matrix; entries are zeroed with probability
// sparsity while keeping one entry per row.
TransitionMatrix random_stochastic(std::size_t states, RandomSource& rng, double sparsity = 0.0);

// Random irreducible chain (complete support, entries bounded away from 0).
TransitionMatrix random_irreducible(std::size_t states, RandomSource& rng);

// Random surjective kappa: [target_states] -> [states] and positive
// block-normalized weights.
MemorylessEmbedding random_memoryless_embedding(std::size_t states, std::size_t target_states, RandomSource& rng);

struct VtestPair {
  TransitionMatrix p;
  TransitionMatrix p_ref;
  RationalStationary law;
};

// Two independent reversible chains sharing edge set and rational law.
VtestPair random_vtest_pair(std::size_t states, std::int64_t max_delta, RandomSource& rng);

}  // namespace markov_id
