#include "markov_id/sampling.hpp"

#include "markov_id/errors.hpp"
#include "markov_id/matrix_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace markov_id {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t state = seed ^ splitmix64(stream);
  for (auto& word : s_) {
    word = splitmix64(state);
    state += 0x9E3779B97F4A7C15ULL;
  }
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

RandomSource::result_type RandomSource::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomSource::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

State sample_index(std::span<const double> weights, RandomSource& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  State last_positive = 0;
  bool any = false;
  for (State i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    any = true;
    last_positive = i;
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  if (!any) throw ValidationError("cannot sample from an all-zero weight vector");
  return last_positive;
}

Trajectory simulate(const TransitionMatrix& p, std::span<const double> initial, std::size_t n, RandomSource& rng) {
  if (n == 0) throw ValidationError("trajectory length must be at least 1");
  const auto k = p.state_count();
  if (initial.size() != k) throw ValidationError("initial law does not match the matrix");
  Trajectory out;
  out.state_count = k;
  out.seed = rng.seed();
  out.stream = rng.stream();
  out.states.reserve(n);

  // Row-major copy so each row is a contiguous span.
  std::vector<double> rows(k * k);
  for (State x = 0; x < k; ++x)
    for (State y = 0; y < k; ++y) rows[x * k + y] = p(x, y);

  State current = sample_index(initial, rng);
  out.states.push_back(current);
  for (std::size_t t = 1; t < n; ++t) {
    current = sample_index(std::span<const double>(rows.data() + current * k, k), rng);
    out.states.push_back(current);
  }
  return out;
}

Trajectory embed_trajectory(const MemorylessEmbedding& l, const Trajectory& x, RandomSource& rng) {
  const auto& kappa = l.lumping();
  if (x.state_count > kappa.target_count()) {
    throw IncompatibleStateCount("trajectory alphabet has " + std::to_string(x.state_count) +
                                 " states, embedding expects " + std::to_string(kappa.target_count()));
  }
  // Per-block weight vectors, in block order.
  std::vector<std::vector<double>> block_weights(kappa.target_count());
  for (State b = 0; b < kappa.target_count(); ++b)
    for (State y : kappa.block(b)) block_weights[b].push_back(l.weight(y));

  Trajectory out;
  out.state_count = kappa.source_count();
  out.seed = rng.seed();
  out.stream = rng.stream();
  out.states.reserve(x.size());
  for (State s : x.states) {
    if (s >= kappa.target_count()) {
      throw IncompatibleStateCount("trajectory visits state " + std::to_string(s) + " outside the embedding's domain");
    }
    const auto& block = kappa.block(s);
    out.states.push_back(block.size() == 1 ? block.front() : block[sample_index(block_weights[s], rng)]);
  }
  return out;
}

Eigen::MatrixXd transition_counts(const Trajectory& x) {
  const auto k = static_cast<Eigen::Index>(x.state_count);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t t = 0; t + 1 < x.size(); ++t) counts(x.states[t], x.states[t + 1]) += 1.0;
  return counts;
}

Eigen::MatrixXd empirical_transition_matrix(const Trajectory& x) {
  Eigen::MatrixXd m = transition_counts(x);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double visits = m.row(r).sum();
    if (visits > 0) m.row(r) /= visits;
  }
  return m;
}

// ---------------------------------------------------------------------------
// I/O

namespace {

std::uint64_t parse_u64(std::string_view token, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw FormatError("trajectory: cannot parse " + std::string(what) + " '" + std::string(token) + "'");
  }
  return v;
}

void finish(Trajectory& x, std::optional<std::size_t> declared_states) {
  const std::size_t inferred = x.states.empty() ? 0 : *std::max_element(x.states.begin(), x.states.end()) + 1;
  if (declared_states) {
    if (inferred > *declared_states) throw FormatError("trajectory visits a state beyond its declared state count");
    x.state_count = *declared_states;
  } else {
    x.state_count = inferred;
  }
}

}  // namespace

std::string trajectory_to_text(const Trajectory& x) {
  std::ostringstream os;
  os << "# states=" << x.state_count;
  if (x.seed) os << " seed=" << *x.seed;
  if (x.stream) os << " stream=" << *x.stream;
  os << '\n';
  for (State s : x.states) os << s << '\n';
  return os.str();
}

Trajectory trajectory_from_text(std::string_view text) {
  Trajectory x;
  std::optional<std::size_t> declared;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      std::istringstream hs(line.substr(1));
      std::string kv;
      while (hs >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string_view value = std::string_view(kv).substr(eq + 1);
        if (key == "states")
          declared = parse_u64(value, key);
        else if (key == "seed")
          x.seed = parse_u64(value, key);
        else if (key == "stream")
          x.stream = parse_u64(value, key);
      }
      continue;
    }
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) x.states.push_back(parse_u64(token, "state"));
  }
  finish(x, declared);
  return x;
}

std::string trajectory_to_json(const Trajectory& x) {
  json doc = {{"states", x.states}, {"state_count", x.state_count}};
  if (x.seed) doc["seed"] = *x.seed;
  if (x.stream) doc["stream"] = *x.stream;
  return doc.dump() + "\n";
}

Trajectory trajectory_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    Trajectory x;
    x.states = doc.at("states").get<std::vector<State>>();
    std::optional<std::size_t> declared;
    if (doc.contains("state_count")) declared = doc["state_count"].get<std::size_t>();
    if (doc.contains("seed")) x.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("stream")) x.stream = doc["stream"].get<std::uint64_t>();
    finish(x, declared);
    return x;
  } catch (const json::exception& e) {
    throw FormatError(std::string("trajectory JSON: ") + e.what());
  }
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  const auto text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return trajectory_from_json(text);
  return trajectory_from_text(text);
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& x) {
  write_file(path, path.extension() == ".json" ? trajectory_to_json(x) : trajectory_to_text(x));
}

}  // namespace markov_id
