#include "markov_id/paths.hpp"

#include "markov_id/contrast.hpp"
#include "markov_id/errors.hpp"

#include <algorithm>
#include <cmath>

namespace markov_id {

std::size_t guarded_power(std::size_t base, std::size_t n) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (base != 0 && out > kMaxPathEntries / base) {
      throw TooLarge(std::to_string(base) + "^" + std::to_string(n) + " paths exceed the enumeration guard of " +
                     std::to_string(kMaxPathEntries));
    }
    out *= base;
  }
  if (out > kMaxPathEntries) throw TooLarge("path enumeration exceeds the guard");
  return out;
}

PathDistribution::PathDistribution(std::size_t length, std::size_t state_count, std::vector<double> probs)
    : length_(length), state_count_(state_count), probs_(std::move(probs)) {
  if (length_ == 0) throw ValidationError("paths must have positive length");
  if (probs_.size() != guarded_power(state_count_, length_)) throw ValidationError("path law has the wrong size");
}

double PathDistribution::at(const std::vector<State>& path) const {
  if (path.size() != length_) throw ValidationError("path has the wrong length");
  return probs_[encode_path(path, state_count_)];
}

std::size_t encode_path(const std::vector<State>& path, std::size_t state_count) {
  std::size_t index = 0;
  for (State s : path) index = index * state_count + s;
  return index;
}

std::vector<State> decode_path(std::size_t index, std::size_t length, std::size_t state_count) {
  std::vector<State> path(length);
  for (std::size_t t = length; t-- > 0;) {
    path[t] = index % state_count;
    index /= state_count;
  }
  return path;
}

PathDistribution path_distribution(const TransitionMatrix& p, const StationaryDistribution& pi, std::size_t n) {
  if (n == 0) throw ValidationError("paths must have positive length");
  const auto k = p.state_count();
  if (pi.size() != k) throw ValidationError("initial law does not match the matrix");
  guarded_power(k, n);
  std::vector<double> probs = pi.probs();
  for (std::size_t t = 1; t < n; ++t) {
    std::vector<double> next(probs.size() * k);
    for (std::size_t idx = 0; idx < probs.size(); ++idx) {
      const State last = idx % k;
      for (State y = 0; y < k; ++y) next[idx * k + y] = probs[idx] * p(last, y);
    }
    probs = std::move(next);
  }
  return PathDistribution(n, k, std::move(probs));
}

LumpingMap block_lumping(const LumpingMap& kappa, std::size_t n) {
  const auto ny = kappa.source_count();
  const auto nx = kappa.target_count();
  const auto total = guarded_power(ny, n);
  const auto target = guarded_power(nx, n);
  std::vector<State> map(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx, image = 0, scale = 1;
    for (std::size_t t = 0; t < n; ++t) {
      image += kappa(rest % ny) * scale;
      rest /= ny;
      scale *= nx;
    }
    map[idx] = image;
  }
  return LumpingMap(target, std::move(map));
}

PathMorphism::PathMorphism(MemorylessEmbedding embedding, std::size_t length)
    : embedding_(std::move(embedding)), length_(length) {
  if (length_ == 0) throw ValidationError("paths must have positive length");
  guarded_power(embedding_.target_count(), length_);
}

double PathMorphism::kernel_weight(std::size_t y_index) const {
  const auto ny = embedding_.target_count();
  double w = 1.0;
  for (std::size_t t = 0; t < length_; ++t) {
    w *= embedding_.weight(y_index % ny);
    y_index /= ny;
  }
  return w;
}

double PathMorphism::kernel_mass(std::size_t x_index) const {
  // The kernel factorizes over time, so its mass is a product of block sums.
  const auto nx = embedding_.source_count();
  const auto& kappa = embedding_.lumping();
  double mass = 1.0;
  for (std::size_t t = 0; t < length_; ++t) {
    double block = 0.0;
    for (State y : kappa.block(x_index % nx)) block += embedding_.weight(y);
    mass *= block;
    x_index /= nx;
  }
  return mass;
}

PathDistribution pushforward(const PathMorphism& m, const PathDistribution& q) {
  const auto& l = m.embedding();
  if (q.state_count() != l.source_count() || q.length() != m.length()) {
    throw ValidationError("path law does not match the morphism's domain");
  }
  const LumpingMap kappa_n = block_lumping(l.lumping(), m.length());
  std::vector<double> out(kappa_n.source_count(), 0.0);
  for (std::size_t y = 0; y < out.size(); ++y) {
    const double mass = q[kappa_n(y)];
    if (mass > 0.0) out[y] = mass * m.kernel_weight(y);
  }
  return PathDistribution(m.length(), l.target_count(), std::move(out));
}

double verify_lemma1(const TransitionMatrix& p, const MemorylessEmbedding& l, std::size_t n) {
  guarded_power(l.target_count(), n);
  const auto pi = stationary_distribution(p);
  const auto lhs = pushforward(PathMorphism(l, n), path_distribution(p, pi, n));
  const auto rhs = path_distribution(embed_matrix(l, p), embed_distribution(l, pi), n);
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.probs().size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return worst;
}

std::pair<double, double> verify_monotonicity_equality(const TransitionMatrix& p, const TransitionMatrix& p_ref,
                                                       const MemorylessEmbedding& l, std::size_t n) {
  guarded_power(l.target_count(), n);
  const auto pi = stationary_distribution(p);
  const auto pi_ref = stationary_distribution(p_ref);
  const auto q = path_distribution(p, pi, n);
  const auto q_ref = path_distribution(p_ref, pi_ref, n);
  const auto eq = path_distribution(embed_matrix(l, p), embed_distribution(l, pi), n);
  const auto eq_ref = path_distribution(embed_matrix(l, p_ref), embed_distribution(l, pi_ref), n);
  return {renyi_half(q.probs(), q_ref.probs()), renyi_half(eq.probs(), eq_ref.probs())};
}

}  // namespace markov_id
