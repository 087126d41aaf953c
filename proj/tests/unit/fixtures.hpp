#pragma once

#include "markov_id/markov_core.hpp"

namespace markov_id::testing {

// Two-state chain with stationary law (1/3, 2/3).
inline TransitionMatrix two_state() { return TransitionMatrix::from_rows({{0.5, 0.5}, {0.25, 0.75}}); }

inline TransitionMatrix two_state_alt() { return TransitionMatrix::from_rows({{0.7, 0.3}, {0.15, 0.85}}); }

inline TransitionMatrix flip() { return TransitionMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }

inline TransitionMatrix identity2() { return TransitionMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}}); }

inline TransitionMatrix three_cycle() {
  return TransitionMatrix::from_rows({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}});
}

// Reference with stationary law (1/4, 1/4, 1/2) and a far alternative with
// the same law and support.
inline TransitionMatrix lazy_reference() {
  return TransitionMatrix::from_rows({{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.05, 0.05, 0.9}});
}
inline TransitionMatrix far_alternative() {
  return TransitionMatrix::from_rows({{0.04, 0.48, 0.48}, {0.48, 0.04, 0.48}, {0.24, 0.24, 0.52}});
}

}  // namespace markov_id::testing
