#include "markov_id/matrix_io.hpp"
#include "fixtures.hpp"
#include "markov_id/errors.hpp"
#include "markov_id/generators.hpp"

#include <gtest/gtest.h>

using namespace markov_id;
using namespace markov_id::testing;

TEST(MatrixJson, ParsesDeclaredEdges) {
  const auto p = matrix_from_json(R"({"states": 2, "edges": [[0,1],[1,0],[1,1]], "rows": [[0,1],[0.4,0.6]]})");
  EXPECT_EQ(p.edges().size(), 3u);
  EXPECT_DOUBLE_EQ(p(1, 0), 0.4);
}

TEST(MatrixJson, ValidationErrorsSurface) {
  EXPECT_THROW(matrix_from_json(R"({"states": 2, "edges": [[0,0],[0,1],[1,0],[1,1]], "rows": [[0.5,0.6],[0.5,0.5]]})"),
               RowSumError);
  EXPECT_THROW(matrix_from_json(R"({"states": 2, "edges": [[0,1],[1,0]], "rows": [[0.5,0.5],[1,0]]})"), OffEdgeMass);
  EXPECT_THROW(matrix_from_json(R"({"states": 2})"), FormatError);
  EXPECT_THROW(matrix_from_json("not json"), FormatError);
}

TEST(MatrixJson, RoundTripIsBitExact) {
  RandomSource rng(41, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_stochastic(2 + trial % 7, rng, 0.3);
    const auto text = matrix_to_json(p);
    const auto back = matrix_from_json(text);
    EXPECT_EQ(back, p);
    EXPECT_EQ(matrix_to_json(back), text);
  }
}

TEST(MatrixText, InfersEdgesAndRoundTrips) {
  const auto p = matrix_from_text("# two-state\n0.5 0.5\n0.25   0.75\n\n");
  EXPECT_EQ(p, two_state());
  EXPECT_EQ(matrix_from_text(matrix_to_text(far_alternative())), far_alternative());
  EXPECT_THROW(matrix_from_text("0.5 x\n"), FormatError);
  EXPECT_THROW(matrix_from_text("0.5 0.5\n1\n"), ValidationError);
}
