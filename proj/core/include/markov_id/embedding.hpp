#pragma once

#include "markov_id/markov_core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace markov_id {

// Surjective map kappa: Y -> X with its blocks S_x = kappa^{-1}(x).
class LumpingMap {
 public:
  // Throws InvalidLumping if kappa is not onto 0..target_count-1.
  LumpingMap(std::size_t target_count, std::vector<State> kappa);

  static LumpingMap identity(std::size_t n);

  std::size_t source_count() const noexcept { return kappa_.size(); }
  std::size_t target_count() const noexcept { return blocks_.size(); }
  State operator()(State y) const { return kappa_[y]; }
  const std::vector<State>& kappa() const noexcept { return kappa_; }
  const std::vector<std::vector<State>>& blocks() const noexcept { return blocks_; }
  const std::vector<State>& block(State x) const { return blocks_[x]; }

  friend bool operator==(const LumpingMap& a, const LumpingMap& b) {
    return a.kappa_ == b.kappa_ && a.blocks_.size() == b.blocks_.size();
  }

 private:
  std::vector<State> kappa_;
  std::vector<std::vector<State>> blocks_;
};

// Memoryless embedding: Lambda(y, y') = L(y') whenever (kappa(y), kappa(y'))
// is an edge. Weights are positive and sum to one on every block; this is
// enforced on all blocks, not only those reachable in one step.
class MemorylessEmbedding {
 public:
  // Throws InvalidEmbedding.
  MemorylessEmbedding(LumpingMap lumping, std::vector<double> weights);

  static MemorylessEmbedding identity(std::size_t n);

  const LumpingMap& lumping() const noexcept { return lumping_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(State y) const { return weights_[y]; }
  std::size_t source_count() const noexcept { return lumping_.target_count(); }
  std::size_t target_count() const noexcept { return lumping_.source_count(); }

 private:
  LumpingMap lumping_;
  std::vector<double> weights_;
};

// General Markov embedding with edge-dependent weights Lambda over E.
// Validation checks that kappa maps E onto the domain edge set D, that
// Lambda > 0 on E and vanishes elsewhere, and that for every y and every x'
// with (kappa(y), x') in D the weights (Lambda(y, y'))_{y' in S_x'} form a
// probability vector.
class MarkovEmbedding {
 public:
  MarkovEmbedding(LumpingMap lumping, EdgeSet domain_edges, EdgeSet target_edges, Eigen::MatrixXd weights);

  // The memoryless embedding L viewed as a general one over the domain D.
  static MarkovEmbedding from_memoryless(const MemorylessEmbedding& l, const EdgeSet& domain_edges);

  const LumpingMap& lumping() const noexcept { return lumping_; }
  const EdgeSet& domain_edges() const noexcept { return domain_edges_; }
  const EdgeSet& target_edges() const noexcept { return target_edges_; }
  const Eigen::MatrixXd& weights() const noexcept { return weights_; }

 private:
  LumpingMap lumping_;
  EdgeSet domain_edges_;
  EdgeSet target_edges_;
  Eigen::MatrixXd weights_;
};

// The constructive symmetrizer for a rational stationary law pi = p / delta:
// kappa: [delta] -> X assigns consecutive runs of p_x states to each x (in
// ascending order of p, ties by state index) and L(y) = 1 / p_{kappa(y)}.
//
// States are 0-indexed: target state y corresponds to j = y + 1 in the
// 1-indexed formula kappa(j) = min{ i : p_(1) + ... + p_(i) >= j }.
class Symmetrizer {
 public:
  const MemorylessEmbedding& embedding() const noexcept { return embedding_; }
  const LumpingMap& lumping() const noexcept { return embedding_.lumping(); }
  const RationalStationary& rational() const noexcept { return rational_; }
  const EdgeSet& domain_edges() const noexcept { return domain_edges_; }
  const EdgeSet& target_edges() const noexcept { return target_edges_; }
  std::int64_t delta() const noexcept { return rational_.delta(); }

 private:
  friend Symmetrizer build_symmetrizer(const RationalStationary& r, const EdgeSet& d);
  Symmetrizer(MemorylessEmbedding embedding, RationalStationary rational, EdgeSet domain, EdgeSet target)
      : embedding_(std::move(embedding)),
        rational_(std::move(rational)),
        domain_edges_(std::move(domain)),
        target_edges_(std::move(target)) {}

  MemorylessEmbedding embedding_;
  RationalStationary rational_;
  EdgeSet domain_edges_;
  EdgeSet target_edges_;
};

// kappa_2(E) = { (kappa(y), kappa(y')) : (y, y') in E }.
EdgeSet induced_edge_image(const LumpingMap& kappa, const EdgeSet& e);

// E = { (y, y') : (kappa(y), kappa(y')) in D }.
EdgeSet induced_edge_preimage(const LumpingMap& kappa, const EdgeSet& d);

// Row-block-sum criterion: within each block S_x every row puts the same mass
// on every block S_x' (within tol).
bool is_lumpable(const TransitionMatrix& p, const LumpingMap& kappa, double tol = kStochasticTol);

// kappa_* P. Throws NotLumpable.
TransitionMatrix lump(const TransitionMatrix& p, const LumpingMap& kappa, double tol = kStochasticTol);

// (L_* P)(y, y') = P(kappa(y), kappa(y')) L(y') on E = kappa^{-1}(D).
// Throws EdgeMismatch when P is not over the embedding's source space.
TransitionMatrix embed_matrix(const MemorylessEmbedding& l, const TransitionMatrix& p);
TransitionMatrix embed_matrix(const MarkovEmbedding& l, const TransitionMatrix& p);
// Also checks that P is supported on the symmetrizer's domain edge set.
TransitionMatrix embed_matrix(const Symmetrizer& s, const TransitionMatrix& p);

// (L_* pi)(y) = pi(kappa(y)) L(y).
StationaryDistribution embed_distribution(const MemorylessEmbedding& l, const StationaryDistribution& pi);

Symmetrizer build_symmetrizer(const RationalStationary& r, const EdgeSet& d);

// max |M(y,y') - M(y',y)| for M = sigma_* P. Throws PreconditionFailed when
// P is not reversible with stationary law r.
double verify_symmetrization(const Symmetrizer& s, const TransitionMatrix& p);

// {"kappa": [...], "weights": [...], "delta": n, "p": [...], "states": m,
//  "edges": [[i,j],...]}. Reading rebuilds the symmetrizer from p and the
// edges and rejects files whose kappa or weights disagree with it.
std::string symmetrizer_to_json(const Symmetrizer& s);
Symmetrizer symmetrizer_from_json(std::string_view text);

}  // namespace markov_id
