#pragma once

#include "markov_id/embedding.hpp"
#include "markov_id/markov_core.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace markov_id {

// Dense enumeration guard: at most this many sequences per path law.
inline constexpr std::size_t kMaxPathEntries = 1'000'000;

// base^n, throwing TooLarge if it exceeds kMaxPathEntries.
std::size_t guarded_power(std::size_t base, std::size_t n);

// Law over X^n. Sequences are indexed row-major, first symbol most
// significant: index(x_1..x_n) = sum_t x_t |X|^(n-t).
class PathDistribution {
 public:
  PathDistribution(std::size_t length, std::size_t state_count, std::vector<double> probs);

  std::size_t length() const noexcept { return length_; }
  std::size_t state_count() const noexcept { return state_count_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double operator[](std::size_t index) const { return probs_[index]; }
  double at(const std::vector<State>& path) const;

 private:
  std::size_t length_;
  std::size_t state_count_;
  std::vector<double> probs_;
};

std::size_t encode_path(const std::vector<State>& path, std::size_t state_count);
std::vector<State> decode_path(std::size_t index, std::size_t length, std::size_t state_count);

// Q^n(x_1..x_n) = pi(x_1) prod_t P(x_t, x_{t+1}).
PathDistribution path_distribution(const TransitionMatrix& p, const StationaryDistribution& pi, std::size_t n);

// kappa_n(y_1..y_n) = (kappa(y_t))_t as a lumping of Y^n onto X^n.
LumpingMap block_lumping(const LumpingMap& kappa, std::size_t n);

// Markov morphism induced by a memoryless embedding on paths of length n:
// the kernel M^{x}(y) = prod_t L(y_t) is supported on the block S_x of kappa_n.
class PathMorphism {
 public:
  PathMorphism(MemorylessEmbedding embedding, std::size_t length);

  const MemorylessEmbedding& embedding() const noexcept { return embedding_; }
  std::size_t length() const noexcept { return length_; }

  // prod_t L(y_t) for the sequence with the given index.
  double kernel_weight(std::size_t y_index) const;
  // Total mass of M^{x}; one for every x by block normalization.
  double kernel_mass(std::size_t x_index) const;

 private:
  MemorylessEmbedding embedding_;
  std::size_t length_;
};

// (M_* Q)(y) = Q(kappa_n(y)) prod_t L(y_t); unrealizable x contribute nothing.
PathDistribution pushforward(const PathMorphism& m, const PathDistribution& q);

// max_y |M_* Q^n(y) - Q~^n(y)| where Q~^n is the stationary path law of the
// embedded chain, computed independently from L_* P and L_* pi.
double verify_lemma1(const TransitionMatrix& p, const MemorylessEmbedding& l, std::size_t n);

// (R_{1/2}(Q^n || Qbar^n), R_{1/2}(L_* Q^n || L_* Qbar^n)), both from
// stationary starts.
std::pair<double, double> verify_monotonicity_equality(const TransitionMatrix& p, const TransitionMatrix& p_ref,
                                                       const MemorylessEmbedding& l, std::size_t n);

}  // namespace markov_id
