#include "markov_id/paths.hpp"
#include "fixtures.hpp"
#include "markov_id/contrast.hpp"
#include "markov_id/errors.hpp"
#include "markov_id/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace markov_id;
using namespace markov_id::testing;

namespace {

Symmetrizer small_symmetrizer() { return build_symmetrizer(RationalStationary({1, 2}), two_state().edges()); }

double total(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Path probability by explicit product along the decoded sequence.
double brute_path_prob(const TransitionMatrix& p, const StationaryDistribution& pi, const std::vector<State>& path) {
  double prob = pi[path[0]];
  for (std::size_t t = 0; t + 1 < path.size(); ++t) prob *= p(path[t], path[t + 1]);
  return prob;
}

}  // namespace

TEST(PathDistribution, LengthOneIsStationaryLaw) {
  const auto pi = stationary_distribution(far_alternative());
  EXPECT_EQ(path_distribution(far_alternative(), pi, 1).probs(), pi.probs());
}

TEST(PathDistribution, TwoStepTwoState) {
  const StationaryDistribution pi({1.0 / 3, 2.0 / 3});
  const auto q = path_distribution(two_state(), pi, 2);
  EXPECT_NEAR(q.at({0, 0}), 1.0 / 6, 1e-15);
  EXPECT_NEAR(q.at({0, 1}), 1.0 / 6, 1e-15);
  EXPECT_NEAR(q.at({1, 0}), 1.0 / 6, 1e-15);
  EXPECT_NEAR(q.at({1, 1}), 1.0 / 2, 1e-15);
}

TEST(PathDistribution, MatchesExplicitProductsAndHasUnitMass) {
  RandomSource rng(201, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_stochastic(2 + trial % 3, rng, 0.3);
    const StationaryDistribution pi(std::vector<double>(p.state_count(), 1.0 / static_cast<double>(p.state_count())));
    const std::size_t n = 1 + trial % 5;
    const auto q = path_distribution(p, pi, n);
    EXPECT_NEAR(total(q.probs()), 1.0, 1e-12);
    for (std::size_t i = 0; i < q.probs().size(); ++i) {
      EXPECT_EQ(encode_path(decode_path(i, n, p.state_count()), p.state_count()), i);
      EXPECT_NEAR(q[i], brute_path_prob(p, pi, decode_path(i, n, p.state_count())), 1e-15);
    }
  }
}

TEST(PathDistribution, Guard) {
  const auto p = TransitionMatrix::from_rows(std::vector<std::vector<double>>(10, std::vector<double>(10, 0.1)));
  const StationaryDistribution pi(std::vector<double>(10, 0.1));
  EXPECT_NO_THROW(path_distribution(p, pi, 6));
  EXPECT_THROW(path_distribution(p, pi, 7), TooLarge);
}

TEST(BlockLumping, Identity) {
  const auto k = block_lumping(LumpingMap::identity(3), 3);
  for (std::size_t i = 0; i < k.source_count(); ++i) EXPECT_EQ(k(i), i);
}

TEST(BlockLumping, BlockSizesAndPartition) {
  const auto k = block_lumping(LumpingMap(2, {0, 1, 1}), 2);
  EXPECT_EQ(k.source_count(), 9u);
  EXPECT_EQ(k.target_count(), 4u);
  EXPECT_EQ(k.block(encode_path({1, 1}, 2)).size(), 4u);
  EXPECT_EQ(k.block(encode_path({0, 0}, 2)).size(), 1u);
  std::size_t covered = 0;
  for (const auto& b : k.blocks()) covered += b.size();
  EXPECT_EQ(covered, 9u);
  // kappa_n acts symbol-wise.
  EXPECT_EQ(k(encode_path({2, 0}, 3)), encode_path({1, 0}, 2));
}

TEST(Pushforward, IdentityEmbeddingKeepsLaw) {
  const auto pi = stationary_distribution(far_alternative());
  const auto q = path_distribution(far_alternative(), pi, 3);
  EXPECT_EQ(pushforward(PathMorphism(MemorylessEmbedding::identity(3), 3), q).probs(), q.probs());
}

TEST(Pushforward, TwoStateEntry) {
  const StationaryDistribution pi({1.0 / 3, 2.0 / 3});
  const auto q = path_distribution(two_state(), pi, 2);
  const auto lifted = pushforward(PathMorphism(small_symmetrizer().embedding(), 2), q);
  // Sequence (2,3) in 1-indexed labels is (1,2) here, above x = (1,1).
  EXPECT_NEAR(lifted.at({1, 2}), 1.0 / 8, 1e-15);
  EXPECT_NEAR(total(lifted.probs()), 1.0, 1e-15);
  const auto direct = path_distribution(embed_matrix(small_symmetrizer(), two_state()),
                                        StationaryDistribution({1.0 / 3, 1.0 / 3, 1.0 / 3}), 2);
  EXPECT_NEAR(direct.at({1, 2}), 1.0 / 8, 1e-15);
}

TEST(PathMorphism, KernelMassIsOne) {
  RandomSource rng(202, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto l = random_memoryless_embedding(2 + trial % 2, 3 + trial % 3, rng);
    const std::size_t n = 1 + trial % 4;
    const PathMorphism m(l, n);
    const auto kn = block_lumping(l.lumping(), n);
    for (std::size_t x = 0; x < kn.target_count(); ++x) {
      EXPECT_NEAR(m.kernel_mass(x), 1.0, 1e-12);
      double summed = 0.0;
      for (std::size_t y : kn.block(x)) summed += m.kernel_weight(y);
      EXPECT_NEAR(summed, 1.0, 1e-12);
    }
  }
}

TEST(Pushforward, PreservesMassAndSign) {
  RandomSource rng(203, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nx = 2 + trial % 3;
    const auto l = random_memoryless_embedding(nx, nx + trial % 3, rng);
    const auto p = random_stochastic(nx, rng, 0.4);
    const StationaryDistribution init(std::vector<double>(nx, 1.0 / static_cast<double>(nx)));
    const auto lifted = pushforward(PathMorphism(l, 3), path_distribution(p, init, 3));
    EXPECT_NEAR(total(lifted.probs()), 1.0, 1e-12);
    for (double v : lifted.probs()) EXPECT_GE(v, 0.0);
  }
}

TEST(PathLawCommutation, IdentityEmbedding) {
  EXPECT_EQ(verify_lemma1(far_alternative(), MemorylessEmbedding::identity(3), 3), 0.0);
}

TEST(PathLawCommutation, TwoStateSymmetrizer) {
  EXPECT_LE(verify_lemma1(two_state(), small_symmetrizer().embedding(), 2), 1e-15);
}

TEST(PathLawCommutation, RandomReversibleSweep) {
  RandomSource rng(204, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pair = random_vtest_pair(2 + trial % 2, 6, rng);
    const auto s = build_symmetrizer(pair.law, pair.p.edges());
    EXPECT_LE(verify_lemma1(pair.p, s.embedding(), 4), 1e-12);
  }
}

TEST(PathLawCommutation, RandomEmbeddingsOfGenericChains) {
  RandomSource rng(205, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto nx = 2 + trial % 3;
    const auto l = random_memoryless_embedding(nx, nx + 1 + trial % 3, rng);
    EXPECT_LE(verify_lemma1(random_irreducible(nx, rng), l, 2 + trial % 3), 1e-12);
  }
}

TEST(RenyiEquality, IdenticalChains) {
  const auto [a, b] = verify_monotonicity_equality(two_state(), two_state(), small_symmetrizer().embedding(), 3);
  EXPECT_NEAR(a, 0.0, 1e-14);
  EXPECT_NEAR(b, 0.0, 1e-14);
}

TEST(RenyiEquality, TwoStatePair) {
  // The alternative shares the support but not the law; the identity holds
  // for any memoryless embedding.
  const auto s = small_symmetrizer();
  for (std::size_t n : {1u, 2u, 3u}) {
    const auto [a, b] = verify_monotonicity_equality(two_state(), two_state_alt(), s.embedding(), n);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(a, b, 1e-10);
  }
  const auto [a1, b1] = verify_monotonicity_equality(two_state(), two_state_alt(), s.embedding(), 1);
  const auto pi = stationary_distribution(two_state());
  const auto pi_alt = stationary_distribution(two_state_alt());
  EXPECT_NEAR(a1, renyi_half(pi.probs(), pi_alt.probs()), 1e-15);
  EXPECT_NEAR(
      b1, renyi_half(embed_distribution(s.embedding(), pi).probs(), embed_distribution(s.embedding(), pi_alt).probs()),
      1e-15);
}

TEST(RenyiEquality, RandomPairs) {
  RandomSource rng(206, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pair = random_vtest_pair(2 + trial % 2, 6, rng);
    const auto s = build_symmetrizer(pair.law, pair.p.edges());
    const std::size_t n = 2 + trial % 3;
    const auto [a, b] = verify_monotonicity_equality(pair.p, pair.p_ref, s.embedding(), n);
    EXPECT_NEAR(a, b, 1e-10);
  }
}

TEST(RenyiEquality, SameCodePathAsContrastModule) {
  const auto pi = stationary_distribution(two_state());
  const auto pi_alt = stationary_distribution(two_state_alt());
  const auto [a, b] = verify_monotonicity_equality(two_state(), two_state_alt(), MemorylessEmbedding::identity(2), 5);
  EXPECT_EQ(a / 5.0, renyi_rate_via_paths(two_state(), two_state_alt(), pi, pi_alt, 5));
}
