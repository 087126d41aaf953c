#include "markov_id/markov_core.hpp"

#include "markov_id/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace markov_id {

namespace {

std::string edge_str(State x, State y) {
  std::ostringstream os;
  os << "(" << x << "," << y << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// EdgeSet

EdgeSet::EdgeSet(std::size_t state_count, std::vector<Edge> edges)
    : state_count_(state_count), edges_(std::move(edges)) {
  if (state_count_ == 0) throw InvalidEdgeSet("edge set must have at least one state");
  adjacency_.assign(state_count_ * state_count_, 0);
  std::vector<char> has_out(state_count_, 0), has_in(state_count_, 0);
  for (const auto& [x, y] : edges_) {
    if (x >= state_count_ || y >= state_count_) {
      throw InvalidEdgeSet("edge " + edge_str(x, y) + " out of range for " + std::to_string(state_count_) + " states");
    }
    adjacency_[x * state_count_ + y] = 1;
    has_out[x] = 1;
    has_in[y] = 1;
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (State x = 0; x < state_count_; ++x) {
    if (!has_out[x]) throw InvalidEdgeSet("state " + std::to_string(x) + " has no outgoing edge");
    if (!has_in[x]) throw InvalidEdgeSet("state " + std::to_string(x) + " has no incoming edge");
  }
}

EdgeSet EdgeSet::complete(std::size_t state_count) {
  std::vector<Edge> edges;
  edges.reserve(state_count * state_count);
  for (State x = 0; x < state_count; ++x)
    for (State y = 0; y < state_count; ++y) edges.emplace_back(x, y);
  return EdgeSet(state_count, std::move(edges));
}

bool EdgeSet::contains(State from, State to) const {
  if (from >= state_count_ || to >= state_count_) return false;
  return adjacency_[from * state_count_ + to] != 0;
}

// ---------------------------------------------------------------------------
// TransitionMatrix

TransitionMatrix TransitionMatrix::validate(EdgeSet edges, Eigen::MatrixXd entries) {
  const auto n = edges.state_count();
  if (static_cast<std::size_t>(entries.rows()) != n || static_cast<std::size_t>(entries.cols()) != n) {
    throw ValidationError("matrix is " + std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()) +
                          ", expected " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (State x = 0; x < n; ++x) {
    for (State y = 0; y < n; ++y) {
      const double v = entries(x, y);
      if (!std::isfinite(v)) throw ValidationError("non-finite entry at " + edge_str(x, y));
      if (edges.contains(x, y)) {
        if (!(v > 0.0)) throw ZeroOnEdge("declared edge " + edge_str(x, y) + " has entry " + std::to_string(v));
      } else if (v != 0.0) {
        throw OffEdgeMass("entry at " + edge_str(x, y) + " is nonzero but not a declared edge");
      }
    }
    const double sum = entries.row(x).sum();
    if (std::abs(sum - 1.0) > kStochasticTol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << x << " sums to " << sum;
      throw RowSumError(os.str());
    }
  }
  return TransitionMatrix(std::move(edges), std::move(entries));
}

TransitionMatrix TransitionMatrix::validate(std::size_t state_count, std::vector<Edge> edges,
                                            const std::vector<std::vector<double>>& rows) {
  if (rows.size() != state_count) throw ValidationError("expected " + std::to_string(state_count) + " rows");
  Eigen::MatrixXd m(state_count, state_count);
  for (State x = 0; x < state_count; ++x) {
    if (rows[x].size() != state_count) {
      throw ValidationError("row " + std::to_string(x) + " has " + std::to_string(rows[x].size()) + " entries");
    }
    for (State y = 0; y < state_count; ++y) m(x, y) = rows[x][y];
  }
  return validate(EdgeSet(state_count, std::move(edges)), std::move(m));
}

TransitionMatrix TransitionMatrix::from_dense(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) throw ValidationError("matrix must be square");
  const auto n = static_cast<std::size_t>(entries.rows());
  std::vector<Edge> edges;
  for (State x = 0; x < n; ++x)
    for (State y = 0; y < n; ++y)
      if (entries(x, y) != 0.0) edges.emplace_back(x, y);
  return validate(EdgeSet(n, std::move(edges)), std::move(entries));
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (State x = 0; x < n; ++x) {
    if (rows[x].size() != n) throw ValidationError("matrix must be square");
    for (State y = 0; y < n; ++y) m(x, y) = rows[x][y];
  }
  return from_dense(std::move(m));
}

bool TransitionMatrix::is_symmetric(double tol) const {
  const auto n = state_count();
  for (State x = 0; x < n; ++x)
    for (State y = x + 1; y < n; ++y)
      if (std::abs(entries_(x, y) - entries_(y, x)) > tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// StationaryDistribution / RationalStationary

StationaryDistribution::StationaryDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("empty distribution");
  double sum = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("distribution has a negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("distribution sums to " + std::to_string(sum));
  min_prob_ = *std::min_element(probs_.begin(), probs_.end());
}

RationalStationary::RationalStationary(std::vector<std::int64_t> numerators)
    : numerators_(std::move(numerators)), delta_(0) {
  if (numerators_.size() < 2) throw ValidationError("rational stationary law needs at least two states");
  for (auto v : numerators_) {
    if (v <= 0) throw ValidationError("numerators must be positive");
    delta_ += v;
  }
  order_.resize(numerators_.size());
  std::iota(order_.begin(), order_.end(), State{0});
  std::stable_sort(order_.begin(), order_.end(), [&](State a, State b) { return numerators_[a] < numerators_[b]; });
}

std::vector<std::int64_t> RationalStationary::sorted_numerators() const {
  std::vector<std::int64_t> out;
  out.reserve(order_.size());
  for (State s : order_) out.push_back(numerators_[s]);
  return out;
}

StationaryDistribution RationalStationary::distribution() const {
  std::vector<double> probs(numerators_.size());
  for (State x = 0; x < probs.size(); ++x) probs[x] = prob(x);
  return StationaryDistribution(std::move(probs));
}

// ---------------------------------------------------------------------------
// Graph structure

namespace detail {

std::vector<std::size_t> strongly_connected_components(std::size_t n, std::span<const char> adjacency,
                                                       std::size_t* component_count) {
  // Tarjan, recursive; state spaces here are small.
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_comp = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (!adjacency[v * n + w]) continue;
      if (index[w] == kUnset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = next_comp;
      } while (w != v);
      ++next_comp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] == kUnset) visit(v);
  if (component_count) *component_count = next_comp;
  return comp;
}

}  // namespace detail

bool is_strongly_connected(const EdgeSet& edges) {
  const auto n = edges.state_count();
  std::vector<char> adj(n * n, 0);
  for (const auto& [x, y] : edges.edges()) adj[x * n + y] = 1;
  std::size_t count = 0;
  detail::strongly_connected_components(n, adj, &count);
  return count == 1;
}

bool is_irreducible(const TransitionMatrix& p) { return is_strongly_connected(p.edges()); }

// ---------------------------------------------------------------------------
// Stationary distribution

namespace {

double stationary_residual(const Eigen::MatrixXd& p, const Eigen::RowVectorXd& pi) {
  return (pi * p - pi).cwiseAbs().maxCoeff();
}

Eigen::RowVectorXd lazy_power_iteration(const Eigen::MatrixXd& p) {
  const auto n = p.rows();
  const Eigen::MatrixXd lazy = 0.5 * (p + Eigen::MatrixXd::Identity(n, n));
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < 10'000'000; ++it) {
    Eigen::RowVectorXd next = pi * lazy;
    next /= next.sum();
    const double change = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (change < 1e-16 && stationary_residual(p, pi) <= kStationaryResidualTol * 1e-2) break;
  }
  return pi;
}

}  // namespace

StationaryDistribution stationary_distribution(const TransitionMatrix& p) {
  if (!is_irreducible(p)) throw NotIrreducible("transition matrix is not irreducible; stationary law is not unique");
  const auto n = static_cast<Eigen::Index>(p.state_count());
  const Eigen::MatrixXd& m = p.matrix();

  // (P^T - I) pi^T = 0 stacked with sum(pi) = 1.
  Eigen::MatrixXd system(n + 1, n);
  system.topRows(n) = m.transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::RowVectorXd pi = system.colPivHouseholderQr().solve(rhs).transpose();

  const bool ok =
      pi.allFinite() && pi.minCoeff() > 0.0 && stationary_residual(m, pi / pi.sum()) <= kStationaryResidualTol;
  if (!ok) pi = lazy_power_iteration(m);
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();
  return StationaryDistribution(std::vector<double>(pi.data(), pi.data() + pi.size()));
}

bool is_reversible(const TransitionMatrix& p, const StationaryDistribution& pi, double tol) {
  if (pi.size() != p.state_count()) throw ValidationError("distribution size does not match matrix");
  for (const auto& [x, y] : p.edges().edges()) {
    if (std::abs(pi[x] * p(x, y) - pi[y] * p(y, x)) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spectral radius

namespace {

double block_spectral_radius(const Eigen::MatrixXd& b, const SpectralRadiusOptions& options) {
  const auto n = b.rows();
  if (n == 1) return b(0, 0);
  // The shift makes the iteration aperiodic and keeps the iterate strictly
  // positive, so the Collatz-Wielandt ratios are always defined.
  const double shift = 0.5 * b.rowwise().sum().maxCoeff();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double prev_estimate = std::numeric_limits<double>::quiet_NaN();
  double estimate = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const Eigen::VectorXd y = b * x;
    const Eigen::VectorXd ratios = y.cwiseQuotient(x);
    const double lo = ratios.minCoeff();
    const double hi = ratios.maxCoeff();
    prev_estimate = estimate;
    estimate = 0.5 * (lo + hi);
    if (hi - lo <= options.rel_tol * hi) return estimate;
    x = y + shift * x;
    x /= x.maxCoeff();
  }
  throw NoConvergence("spectral radius power iteration hit its iteration cap", prev_estimate, estimate);
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& a, const SpectralRadiusOptions& options) {
  if (a.rows() != a.cols()) throw ValidationError("spectral_radius needs a square matrix");
  if (a.size() == 0) return 0.0;
  if (a.minCoeff() < 0.0) throw ValidationError("spectral_radius needs a nonnegative matrix");
  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<char> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i * n + j] = a(i, j) > 0.0;
  std::size_t count = 0;
  const auto comp = detail::strongly_connected_components(n, adj, &count);
  if (count == 1) return block_spectral_radius(a, options);

  // Frobenius normal form: rho is the largest radius among diagonal blocks.
  double rho = 0.0;
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<Eigen::Index> members;
    for (std::size_t i = 0; i < n; ++i)
      if (comp[i] == c) members.push_back(static_cast<Eigen::Index>(i));
    const Eigen::MatrixXd block = a(members, members);
    if (block.maxCoeff() == 0.0) continue;
    rho = std::max(rho, block_spectral_radius(block, options));
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Rationalization

namespace {

struct Fraction {
  std::int64_t num;
  std::int64_t den;
};

// Last continued-fraction convergent of v with denominator <= max_den,
// stopping early once the convergent is exact to 1e-12.
Fraction best_approximant(double v, std::int64_t max_den) {
  std::int64_t h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  Fraction best{0, 1};
  double x = v;
  for (int depth = 0; depth < 64; ++depth) {
    const double a_real = std::floor(x);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t h = a * h_prev + h_prev2;
    const std::int64_t k = a * k_prev + k_prev2;
    if (k > max_den) break;
    best = {h, k};
    if (std::abs(v - static_cast<double>(h) / static_cast<double>(k)) <= 1e-12) break;
    const double frac = x - a_real;
    if (frac <= 0.0) break;
    x = 1.0 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return best;
}

}  // namespace

RationalStationary rationalize(const StationaryDistribution& pi, std::int64_t max_denominator) {
  if (max_denominator < 1) throw RationalizationFailed("max_denominator must be positive");
  if (pi.size() < 2) throw RationalizationFailed("need at least two states");
  std::int64_t delta = 1;
  std::vector<Fraction> fracs;
  fracs.reserve(pi.size());
  for (State x = 0; x < pi.size(); ++x) {
    if (!(pi[x] > 0.0))
      throw RationalizationFailed("stationary probability of state " + std::to_string(x) + " is not positive");
    const Fraction f = best_approximant(pi[x], max_denominator);
    if (f.num <= 0) {
      throw RationalizationFailed("state " + std::to_string(x) + " has no positive approximant with denominator <= " +
                                  std::to_string(max_denominator));
    }
    fracs.push_back(f);
    delta = std::lcm(delta, f.den);
    if (delta > max_denominator) {
      throw RationalizationFailed("common denominator exceeds " + std::to_string(max_denominator));
    }
  }
  std::vector<std::int64_t> p(pi.size());
  std::int64_t sum = 0;
  for (State x = 0; x < p.size(); ++x) {
    p[x] = fracs[x].num * (delta / fracs[x].den);
    sum += p[x];
  }
  const auto largest = static_cast<State>(std::max_element(p.begin(), p.end()) - p.begin());
  p[largest] += delta - sum;

  double worst = 0.0;
  for (State x = 0; x < p.size(); ++x) {
    if (p[x] <= 0) throw RationalizationFailed("sum adjustment produced a nonpositive numerator");
    worst = std::max(worst, std::abs(static_cast<double>(p[x]) / static_cast<double>(delta) - pi[x]));
  }
  if (worst > kRationalTol) {
    std::ostringstream os;
    os << "best denominator " << delta << " reproduces the law only to " << worst;
    throw RationalizationFailed(os.str());
  }
  return RationalStationary(std::move(p));
}

// ---------------------------------------------------------------------------
// Membership

std::string to_string(Assumption a) {
  switch (a) {
    case Assumption::Irreducible:
      return "irreducible";
    case Assumption::Reversible:
      return "reversible";
    case Assumption::StationaryLaw:
      return "stationary-law";
    case Assumption::EdgeSet:
      return "edge-set";
  }
  return "unknown";
}

MembershipReport check_vtest_membership(const TransitionMatrix& p, const RationalStationary& ref_pi,
                                        const EdgeSet& ref_edges) {
  MembershipReport report;
  if (p.state_count() != ref_pi.state_count() || p.state_count() != ref_edges.state_count()) {
    report.failed = {Assumption::EdgeSet, Assumption::StationaryLaw};
    return report;
  }
  const bool irreducible = is_irreducible(p);
  if (!irreducible) report.failed.push_back(Assumption::Irreducible);
  if (!(p.edges() == ref_edges)) report.failed.push_back(Assumption::EdgeSet);
  if (irreducible) {
    const auto pi = stationary_distribution(p);
    if (!is_reversible(p, pi)) report.failed.push_back(Assumption::Reversible);
    for (State x = 0; x < pi.size(); ++x) {
      if (std::abs(pi[x] - ref_pi.prob(x)) > kRationalTol) {
        report.failed.push_back(Assumption::StationaryLaw);
        break;
      }
    }
  } else {
    // Without irreducibility neither the stationary law nor reversibility is defined.
    report.failed.push_back(Assumption::Reversible);
    report.failed.push_back(Assumption::StationaryLaw);
  }
  report.member = report.failed.empty();
  return report;
}

}  // namespace markov_id
