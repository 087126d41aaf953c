#include "markov_id/contrast.hpp"

#include "markov_id/errors.hpp"
#include "markov_id/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace markov_id {

double renyi_rate_from_contrast(double k) {
  if (k >= 1.0) return std::numeric_limits<double>::infinity();
  return -2.0 * std::log1p(-k);
}

Eigen::MatrixXd hadamard_sqrt_product(const TransitionMatrix& p, const TransitionMatrix& q) {
  if (p.state_count() != q.state_count()) {
    throw ValidationError("contrast needs matrices over the same state space (" + std::to_string(p.state_count()) +
                          " vs " + std::to_string(q.state_count()) + " states)");
  }
  return (p.matrix().array() * q.matrix().array()).sqrt().matrix();
}

ContrastValue contrast(const TransitionMatrix& p, const TransitionMatrix& q) {
  const Eigen::MatrixXd h = hadamard_sqrt_product(p, q);
  const auto n = static_cast<std::size_t>(h.rows());
  std::vector<char> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) adj[i * n + j] = h(i, j) > 0.0;
  std::size_t components = 0;
  detail::strongly_connected_components(n, adj, &components);

  ContrastValue out;
  out.k = std::clamp(1.0 - spectral_radius(h), 0.0, 1.0);
  out.renyi_rate = renyi_rate_from_contrast(out.k);
  out.product_irreducible = components == 1;
  return out;
}

double renyi_half(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw ValidationError("renyi_half needs distributions over the same set");
  double coefficient = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) coefficient += std::sqrt(mu[i] * nu[i]);
  if (coefficient <= 0.0) return std::numeric_limits<double>::infinity();
  return -2.0 * std::log(std::min(coefficient, 1.0));
}

double renyi_rate_via_paths(const TransitionMatrix& p, const TransitionMatrix& q, const StationaryDistribution& pi_p,
                            const StationaryDistribution& pi_q, std::size_t n) {
  const auto qp = path_distribution(p, pi_p, n);
  const auto qq = path_distribution(q, pi_q, n);
  return renyi_half(qp.probs(), qq.probs()) / static_cast<double>(n);
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that reads back identically.
  for (int prec = 1; prec <= 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

}  // namespace markov_id
