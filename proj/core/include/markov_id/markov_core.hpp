#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace markov_id {

using State = std::size_t;
using Edge = std::pair<State, State>;

// Tolerances used across the library.
inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kDetailedBalanceTol = 1e-9;
inline constexpr double kStationaryResidualTol = 1e-10;
inline constexpr double kRationalTol = 1e-9;

// Directed support graph (X, D) of a chain. Edges are kept sorted and unique.
// Every state must have at least one outgoing and one incoming edge; strong
// connectivity is checked separately by is_irreducible.
class EdgeSet {
 public:
  EdgeSet(std::size_t state_count, std::vector<Edge> edges);

  // All |X|^2 ordered pairs.
  static EdgeSet complete(std::size_t state_count);

  std::size_t state_count() const noexcept { return state_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool contains(State from, State to) const;

  friend bool operator==(const EdgeSet& a, const EdgeSet& b) {
    return a.state_count_ == b.state_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t state_count_;
  std::vector<Edge> edges_;
  std::vector<char> adjacency_;  // row-major |X| x |X|
};

// Row-stochastic matrix P in W(X, D): strictly positive exactly on its edge
// set, zero elsewhere, rows summing to one within kStochasticTol.
class TransitionMatrix {
 public:
  // Throws RowSumError, ZeroOnEdge or OffEdgeMass.
  static TransitionMatrix validate(EdgeSet edges, Eigen::MatrixXd entries);
  static TransitionMatrix validate(std::size_t state_count, std::vector<Edge> edges,
                                   const std::vector<std::vector<double>>& rows);
  // Edge set inferred from the nonzero entries.
  static TransitionMatrix from_dense(Eigen::MatrixXd entries);
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t state_count() const noexcept { return edges_.state_count(); }
  const EdgeSet& edges() const noexcept { return edges_; }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double operator()(State from, State to) const { return entries_(from, to); }

  bool is_symmetric(double tol = 0.0) const;

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.edges_ == b.edges_ && a.entries_ == b.entries_;
  }

 private:
  TransitionMatrix(EdgeSet edges, Eigen::MatrixXd entries) : edges_(std::move(edges)), entries_(std::move(entries)) {}

  EdgeSet edges_;
  Eigen::MatrixXd entries_;
};

// A probability vector pi with pi P = pi for its generating matrix.
class StationaryDistribution {
 public:
  // Checks nonnegativity and unit mass (within 1e-9).
  explicit StationaryDistribution(std::vector<double> probs);

  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](State x) const { return probs_[x]; }
  double min_prob() const noexcept { return min_prob_; }

 private:
  std::vector<double> probs_;
  double min_prob_;
};

// pi = p / delta with positive integer numerators summing to delta.
//
// Numerators are stored in the caller's state order. order() is the stable
// ascending permutation of the states by numerator (ties by state index), so
// sorted_numerators()[k] == numerators()[order()[k]].
class RationalStationary {
 public:
  explicit RationalStationary(std::vector<std::int64_t> numerators);

  std::size_t state_count() const noexcept { return numerators_.size(); }
  std::int64_t delta() const noexcept { return delta_; }
  const std::vector<std::int64_t>& numerators() const noexcept { return numerators_; }
  const std::vector<State>& order() const noexcept { return order_; }
  std::vector<std::int64_t> sorted_numerators() const;

  double prob(State x) const { return static_cast<double>(numerators_[x]) / static_cast<double>(delta_); }
  StationaryDistribution distribution() const;

  friend bool operator==(const RationalStationary& a, const RationalStationary& b) {
    return a.numerators_ == b.numerators_;
  }

 private:
  std::vector<std::int64_t> numerators_;
  std::int64_t delta_;
  std::vector<State> order_;
};

// Throws NotIrreducible when P is reducible.
StationaryDistribution stationary_distribution(const TransitionMatrix& p);

bool is_irreducible(const TransitionMatrix& p);
bool is_strongly_connected(const EdgeSet& edges);

bool is_reversible(const TransitionMatrix& p, const StationaryDistribution& pi, double tol = kDetailedBalanceTol);

struct SpectralRadiusOptions {
  double rel_tol = 1e-13;
  std::size_t max_iterations = 1'000'000;
};

// Perron root of a nonnegative square matrix. The support graph is split into
// strongly connected components; each irreducible block is handled by shifted
// power iteration from the all-ones vector, stopped once the Collatz-Wielandt
// bracket min_i (Ax)_i/x_i <= rho <= max_i (Ax)_i/x_i closes to rel_tol.
// Throws NoConvergence when a block exhausts max_iterations.
double spectral_radius(const Eigen::MatrixXd& a, const SpectralRadiusOptions& options = {});

// Continued-fraction best approximants per entry, least common denominator,
// then the largest numerator absorbs the rounding so that sum(p) == delta.
// Throws RationalizationFailed if no delta <= max_denominator reproduces pi
// within kRationalTol.
RationalStationary rationalize(const StationaryDistribution& pi, std::int64_t max_denominator);

enum class Assumption { Irreducible, Reversible, StationaryLaw, EdgeSet };

std::string to_string(Assumption a);

struct MembershipReport {
  bool member = false;
  std::vector<Assumption> failed;
};

// Irreducible, reversible, supported on ref_edges, with stationary law equal
// to ref_pi within kRationalTol.
MembershipReport check_vtest_membership(const TransitionMatrix& p, const RationalStationary& ref_pi,
                                        const EdgeSet& ref_edges);

namespace detail {
// Component index per vertex of the digraph given by a row-major adjacency.
std::vector<std::size_t> strongly_connected_components(std::size_t n, std::span<const char> adjacency,
                                                       std::size_t* component_count);
}  // namespace detail

}  // namespace markov_id
