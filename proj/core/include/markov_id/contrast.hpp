#pragma once

#include "markov_id/markov_core.hpp"

#include <span>
#include <string>

namespace markov_id {

// K(P, P') = 1 - rho(P^{o1/2} o P'^{o1/2}) together with the Renyi-1/2
// divergence rate -2 log(1 - K), which is +inf when K == 1.
struct ContrastValue {
  double k = 0.0;
  double renyi_rate = 0.0;
  // False when the Hadamard product is reducible; rho is still exact but the
  // Perron vector is not unique.
  bool product_irreducible = true;
};

double renyi_rate_from_contrast(double k);

// Entrywise sqrt(P(x,y) * Q(x,y)); zero off the common support.
Eigen::MatrixXd hadamard_sqrt_product(const TransitionMatrix& p, const TransitionMatrix& q);

// Symmetric in its arguments bit-for-bit. Throws ValidationError on a state
// count mismatch and propagates NoConvergence.
ContrastValue contrast(const TransitionMatrix& p, const TransitionMatrix& q);

// R_{1/2}(mu || nu) = -2 log sum_x sqrt(mu(x) nu(x)); +inf on disjoint supports.
double renyi_half(std::span<const double> mu, std::span<const double> nu);

// (1/n) R_{1/2}(Q^n || Q'^n) over the exact stationary path laws of length n.
// Throws TooLarge when |X|^n exceeds the enumeration guard.
double renyi_rate_via_paths(const TransitionMatrix& p, const TransitionMatrix& q, const StationaryDistribution& pi_p,
                            const StationaryDistribution& pi_q, std::size_t n);

// "inf" for infinite values, shortest round-trip decimal otherwise.
std::string format_real(double v);

}  // namespace markov_id
