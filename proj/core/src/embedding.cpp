#include "markov_id/embedding.hpp"

#include "markov_id/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace markov_id {

using nlohmann::json;

// ---------------------------------------------------------------------------
// LumpingMap

LumpingMap::LumpingMap(std::size_t target_count, std::vector<State> kappa) : kappa_(std::move(kappa)) {
  if (target_count == 0) throw InvalidLumping("lumping target must have at least one state");
  blocks_.resize(target_count);
  for (State y = 0; y < kappa_.size(); ++y) {
    if (kappa_[y] >= target_count) {
      throw InvalidLumping("kappa(" + std::to_string(y) + ") = " + std::to_string(kappa_[y]) + " is out of range");
    }
    blocks_[kappa_[y]].push_back(y);
  }
  for (State x = 0; x < target_count; ++x) {
    if (blocks_[x].empty())
      throw InvalidLumping("kappa is not surjective: state " + std::to_string(x) + " has an empty block");
  }
}

LumpingMap LumpingMap::identity(std::size_t n) {
  std::vector<State> kappa(n);
  std::iota(kappa.begin(), kappa.end(), State{0});
  return LumpingMap(n, std::move(kappa));
}

// ---------------------------------------------------------------------------
// Embeddings

MemorylessEmbedding::MemorylessEmbedding(LumpingMap lumping, std::vector<double> weights)
    : lumping_(std::move(lumping)), weights_(std::move(weights)) {
  if (weights_.size() != lumping_.source_count()) throw InvalidEmbedding("one weight per embedded state is required");
  for (State y = 0; y < weights_.size(); ++y) {
    if (!(weights_[y] > 0.0) || !std::isfinite(weights_[y])) {
      throw InvalidEmbedding("weight of state " + std::to_string(y) + " must be positive");
    }
  }
  for (State x = 0; x < lumping_.target_count(); ++x) {
    double sum = 0.0;
    for (State y : lumping_.block(x)) sum += weights_[y];
    if (std::abs(sum - 1.0) > kStochasticTol) {
      throw InvalidEmbedding("weights on block " + std::to_string(x) + " sum to " + std::to_string(sum));
    }
  }
}

MemorylessEmbedding MemorylessEmbedding::identity(std::size_t n) {
  return MemorylessEmbedding(LumpingMap::identity(n), std::vector<double>(n, 1.0));
}

MarkovEmbedding::MarkovEmbedding(LumpingMap lumping, EdgeSet domain_edges, EdgeSet target_edges,
                                 Eigen::MatrixXd weights)
    : lumping_(std::move(lumping)),
      domain_edges_(std::move(domain_edges)),
      target_edges_(std::move(target_edges)),
      weights_(std::move(weights)) {
  const auto ny = lumping_.source_count();
  const auto nx = lumping_.target_count();
  if (domain_edges_.state_count() != nx || target_edges_.state_count() != ny) {
    throw InvalidEmbedding("edge sets do not match the lumping's state counts");
  }
  if (static_cast<std::size_t>(weights_.rows()) != ny || static_cast<std::size_t>(weights_.cols()) != ny) {
    throw InvalidEmbedding("weight matrix must be |Y| x |Y|");
  }
  if (!(induced_edge_image(lumping_, target_edges_) == domain_edges_)) {
    throw InvalidEmbedding("kappa does not map the target edge set onto the domain edge set");
  }
  for (State y = 0; y < ny; ++y) {
    for (State y2 = 0; y2 < ny; ++y2) {
      const double w = weights_(y, y2);
      if (target_edges_.contains(y, y2) ? !(w > 0.0) : w != 0.0) {
        throw InvalidEmbedding("weights must be positive exactly on the target edge set");
      }
    }
    for (State x2 = 0; x2 < nx; ++x2) {
      if (!domain_edges_.contains(lumping_(y), x2)) continue;
      double sum = 0.0;
      for (State y2 : lumping_.block(x2)) sum += weights_(y, y2);
      if (std::abs(sum - 1.0) > kStochasticTol) {
        throw InvalidEmbedding("weights from state " + std::to_string(y) + " into block " + std::to_string(x2) +
                               " sum to " + std::to_string(sum));
      }
    }
  }
}

MarkovEmbedding MarkovEmbedding::from_memoryless(const MemorylessEmbedding& l, const EdgeSet& domain_edges) {
  const auto& kappa = l.lumping();
  EdgeSet target = induced_edge_preimage(kappa, domain_edges);
  const auto ny = kappa.source_count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(ny, ny);
  for (const auto& [y, y2] : target.edges()) w(y, y2) = l.weight(y2);
  return MarkovEmbedding(kappa, domain_edges, std::move(target), std::move(w));
}

// ---------------------------------------------------------------------------
// Edge images

EdgeSet induced_edge_image(const LumpingMap& kappa, const EdgeSet& e) {
  if (e.state_count() != kappa.source_count()) throw EdgeMismatch("edge set is not over the lumping's source space");
  std::vector<Edge> out;
  out.reserve(e.size());
  for (const auto& [y, y2] : e.edges()) out.emplace_back(kappa(y), kappa(y2));
  return EdgeSet(kappa.target_count(), std::move(out));
}

EdgeSet induced_edge_preimage(const LumpingMap& kappa, const EdgeSet& d) {
  if (d.state_count() != kappa.target_count()) throw EdgeMismatch("edge set is not over the lumping's target space");
  std::vector<Edge> out;
  for (const auto& [x, x2] : d.edges())
    for (State y : kappa.block(x))
      for (State y2 : kappa.block(x2)) out.emplace_back(y, y2);
  return EdgeSet(kappa.source_count(), std::move(out));
}

// ---------------------------------------------------------------------------
// Lumping

namespace {

// Mass row y puts on each block.
Eigen::MatrixXd block_row_sums(const TransitionMatrix& p, const LumpingMap& kappa) {
  const auto ny = kappa.source_count();
  const auto nx = kappa.target_count();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(ny, nx);
  for (State y = 0; y < ny; ++y)
    for (State x2 = 0; x2 < nx; ++x2)
      for (State y2 : kappa.block(x2)) sums(y, x2) += p(y, y2);
  return sums;
}

}  // namespace

bool is_lumpable(const TransitionMatrix& p, const LumpingMap& kappa, double tol) {
  if (p.state_count() != kappa.source_count()) throw EdgeMismatch("matrix is not over the lumping's source space");
  const Eigen::MatrixXd sums = block_row_sums(p, kappa);
  for (State x = 0; x < kappa.target_count(); ++x) {
    const auto& block = kappa.block(x);
    for (std::size_t i = 1; i < block.size(); ++i) {
      if ((sums.row(block[i]) - sums.row(block[0])).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

TransitionMatrix lump(const TransitionMatrix& p, const LumpingMap& kappa, double tol) {
  if (!is_lumpable(p, kappa, tol)) throw NotLumpable("matrix is not lumpable under the given map");
  const Eigen::MatrixXd sums = block_row_sums(p, kappa);
  const auto nx = kappa.target_count();
  Eigen::MatrixXd out(nx, nx);
  for (State x = 0; x < nx; ++x) out.row(x) = sums.row(kappa.block(x).front());
  return TransitionMatrix::validate(induced_edge_image(kappa, p.edges()), std::move(out));
}

// ---------------------------------------------------------------------------
// Embedding matrices and laws

TransitionMatrix embed_matrix(const MemorylessEmbedding& l, const TransitionMatrix& p) {
  const auto& kappa = l.lumping();
  if (p.state_count() != kappa.target_count()) {
    throw EdgeMismatch("matrix has " + std::to_string(p.state_count()) + " states, embedding expects " +
                       std::to_string(kappa.target_count()));
  }
  EdgeSet target = induced_edge_preimage(kappa, p.edges());
  const auto ny = kappa.source_count();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ny, ny);
  for (const auto& [y, y2] : target.edges()) out(y, y2) = p(kappa(y), kappa(y2)) * l.weight(y2);
  return TransitionMatrix::validate(std::move(target), std::move(out));
}

TransitionMatrix embed_matrix(const MarkovEmbedding& l, const TransitionMatrix& p) {
  if (!(p.edges() == l.domain_edges())) throw EdgeMismatch("matrix edge set differs from the embedding's domain");
  const auto& kappa = l.lumping();
  const auto ny = kappa.source_count();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(ny, ny);
  for (const auto& [y, y2] : l.target_edges().edges()) out(y, y2) = p(kappa(y), kappa(y2)) * l.weights()(y, y2);
  return TransitionMatrix::validate(l.target_edges(), std::move(out));
}

TransitionMatrix embed_matrix(const Symmetrizer& s, const TransitionMatrix& p) {
  if (!(p.edges() == s.domain_edges())) throw EdgeMismatch("matrix edge set differs from the symmetrizer's domain");
  return embed_matrix(s.embedding(), p);
}

StationaryDistribution embed_distribution(const MemorylessEmbedding& l, const StationaryDistribution& pi) {
  const auto& kappa = l.lumping();
  if (pi.size() != kappa.target_count()) throw EdgeMismatch("distribution is not over the embedding's source space");
  std::vector<double> out(kappa.source_count());
  for (State y = 0; y < out.size(); ++y) out[y] = pi[kappa(y)] * l.weight(y);
  return StationaryDistribution(std::move(out));
}

// ---------------------------------------------------------------------------
// Symmetrizer

Symmetrizer build_symmetrizer(const RationalStationary& r, const EdgeSet& d) {
  if (r.state_count() != d.state_count()) {
    throw ValidationError("rational law has " + std::to_string(r.state_count()) + " states, edge set has " +
                          std::to_string(d.state_count()));
  }
  const auto delta = static_cast<std::size_t>(r.delta());
  std::vector<State> kappa;
  std::vector<double> weights;
  kappa.reserve(delta);
  weights.reserve(delta);
  for (State x : r.order()) {
    const auto p = r.numerators()[x];
    const double w = p == 1 ? 1.0 : 1.0 / static_cast<double>(p);
    for (std::int64_t i = 0; i < p; ++i) {
      kappa.push_back(x);
      weights.push_back(w);
    }
  }
  LumpingMap lumping(r.state_count(), std::move(kappa));
  EdgeSet target = induced_edge_preimage(lumping, d);
  return Symmetrizer(MemorylessEmbedding(std::move(lumping), std::move(weights)), r, d, std::move(target));
}

double verify_symmetrization(const Symmetrizer& s, const TransitionMatrix& p) {
  if (!(p.edges() == s.domain_edges()))
    throw PreconditionFailed("matrix edge set differs from the symmetrizer's domain");
  if (!is_irreducible(p)) throw PreconditionFailed("matrix is not irreducible");
  const auto pi = stationary_distribution(p);
  for (State x = 0; x < pi.size(); ++x) {
    if (std::abs(pi[x] - s.rational().prob(x)) > kRationalTol) {
      throw PreconditionFailed("stationary law of the matrix differs from the symmetrizer's rational law at state " +
                               std::to_string(x));
    }
  }
  if (!is_reversible(p, pi)) throw PreconditionFailed("matrix is not reversible");
  const Eigen::MatrixXd m = embed_matrix(s, p).matrix();
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

std::string symmetrizer_to_json(const Symmetrizer& s) {
  json edges = json::array();
  for (const auto& [x, y] : s.domain_edges().edges()) edges.push_back({x, y});
  json doc = {
      {"kappa", s.lumping().kappa()},   {"weights", s.embedding().weights()},       {"delta", s.delta()},
      {"p", s.rational().numerators()}, {"states", s.domain_edges().state_count()}, {"edges", std::move(edges)},
  };
  return doc.dump() + "\n";
}

Symmetrizer symmetrizer_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    const auto p = doc.at("p").get<std::vector<std::int64_t>>();
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0).get<State>(), e.at(1).get<State>());
    const auto states = doc.at("states").get<std::size_t>();
    Symmetrizer s = build_symmetrizer(RationalStationary(p), EdgeSet(states, std::move(edges)));
    if (doc.at("delta").get<std::int64_t>() != s.delta()) throw FormatError("symmetrizer JSON: delta disagrees with p");
    if (doc.at("kappa").get<std::vector<State>>() != s.lumping().kappa()) {
      throw FormatError("symmetrizer JSON: kappa disagrees with p");
    }
    if (doc.at("weights").get<std::vector<double>>() != s.embedding().weights()) {
      throw FormatError("symmetrizer JSON: weights disagree with p");
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("symmetrizer JSON: ") + e.what());
  }
}

}  // namespace markov_id
