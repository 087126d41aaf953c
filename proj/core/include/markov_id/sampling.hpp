#pragma once

#include "markov_id/embedding.hpp"
#include "markov_id/markov_core.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace markov_id {

// xoshiro256** 1.0. The 256-bit state is filled by SplitMix64 started at
// seed ^ splitmix64(stream), so every (seed, stream) pair names an
// independent, platform-independent sequence. Satisfies
// UniformRandomBitGenerator, but library code only uses uniform01(), whose
// output is fully specified (top 53 bits scaled by 2^-53).
class RandomSource {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kAlgorithm = "xoshiro256**/splitmix64";

  RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on [0, 1).
  double uniform01();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x);

struct Trajectory {
  std::vector<State> states;
  std::size_t state_count = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> stream;

  std::size_t size() const noexcept { return states.size(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Inverse-CDF draw over weights in index order; the last positive bucket
// absorbs round-off in the cumulative sum.
State sample_index(std::span<const double> weights, RandomSource& rng);

// x_1 ~ initial, x_{t+1} ~ P(x_t, .). Requires n >= 1.
Trajectory simulate(const TransitionMatrix& p, std::span<const double> initial, std::size_t n, RandomSource& rng);

// Draws each y_t independently from (L(y))_{y in S_{x_t}}; singleton blocks
// consume no randomness. Throws IncompatibleStateCount.
Trajectory embed_trajectory(const MemorylessEmbedding& l, const Trajectory& x, RandomSource& rng);

// counts(x, y) = #{t : x_t = x, x_{t+1} = y}.
Eigen::MatrixXd transition_counts(const Trajectory& x);
// Row-normalized counts; unvisited rows stay zero.
Eigen::MatrixXd empirical_transition_matrix(const Trajectory& x);

// Text: optional '#' header "states=N seed=S stream=T", then one state per
// line. JSON: {"states": [...], "state_count": N, "seed": S, "stream": T}.
std::string trajectory_to_text(const Trajectory& x);
Trajectory trajectory_from_text(std::string_view text);
std::string trajectory_to_json(const Trajectory& x);
Trajectory trajectory_from_json(std::string_view text);

Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const std::filesystem::path& path, const Trajectory& x);

}  // namespace markov_id
