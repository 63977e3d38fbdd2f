// Copyright 2026 The realkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "realkit/qubo.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

namespace realkit {
namespace {

using testing::Rng;

MatrixQ random_upper(Rng& rng, int n, int lo, int hi) {
  MatrixQ a = MatrixQ::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = Rational(testing::uniform_int(rng, lo, hi));
  return a;
}

struct Entry {
  Rational value;
  std::vector<int> members;
};

// All subsets ranked by (value, sorted index list).
std::vector<Entry> ranked_subsets(const Rational& c, const MatrixQ& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Entry> all;
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
    Entry e{c, {}};
    for (int i = 0; i < n; ++i)
      if ((bits >> i) & 1U) e.members.push_back(i);
    for (std::size_t p = 0; p < e.members.size(); ++p)
      for (std::size_t r = p; r < e.members.size(); ++r) e.value += a(e.members[p], e.members[r]);
    all.push_back(std::move(e));
  }
  std::sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.members < y.members;
  });
  return all;
}

TEST(EvaluateG, Examples) {
  MatrixQ a(3, 3);
  a << -2, 4, 4, 4, -2, 4, 4, 4, -2;
  EXPECT_EQ(evaluate_g(Rational(2), a, Subset::of({1, 2})), Rational(2));
  EXPECT_EQ(evaluate_g(Rational(7), a, Subset()), Rational(7));
  MatrixQ ones = MatrixQ::Constant(2, 2, Rational(1));
  EXPECT_EQ(evaluate_g(Rational(0), ones, Subset::full(2)), Rational(3));
}

TEST(QuboMin, Examples) {
  const auto constant = qubo_min(Rational(5), MatrixQ(MatrixQ::Zero(3, 3)));
  EXPECT_EQ(constant.value, Rational(5));
  EXPECT_TRUE(constant.minimizer.empty());

  MatrixQ tie(2, 2);
  tie << 1, -2, -2, 1;
  const auto result = qubo_min(Rational(0), tie);
  EXPECT_EQ(result.value, Rational(0));
  EXPECT_TRUE(result.minimizer.empty());  // {} beats {0,1} lexicographically
}

TEST(SubsetOrder, LexicographicOnSortedIndexLists) {
  EXPECT_TRUE(lex_less(Subset(), Subset::of({0})));
  EXPECT_TRUE(lex_less(Subset::of({0}), Subset::of({0, 1})));
  EXPECT_TRUE(lex_less(Subset::of({0, 1}), Subset::of({1})));
  EXPECT_TRUE(lex_less(Subset::of({0, 2}), Subset::of({1})));
  EXPECT_FALSE(lex_less(Subset::of({1}), Subset::of({0, 5})));
  Rng rng(201);
  for (int trial = 0; trial < 2000; ++trial) {
    const Subset x(static_cast<std::uint32_t>(rng() & 0x3ff));
    const Subset y(static_cast<std::uint32_t>(rng() & 0x3ff));
    EXPECT_EQ(lex_less(x, y), x.indices() < y.indices());
  }
}

TEST(QuboMin, MatchesBruteForceWithTieBreaking) {
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::uniform_int(rng, 1, 10);
    const MatrixQ a = random_upper(rng, n, -2, 2);  // small range: many ties
    const Rational c(testing::uniform_int(rng, -2, 2));
    const auto expected = ranked_subsets(c, a).front();
    const auto found = qubo_min(c, a);
    EXPECT_EQ(found.value, expected.value);
    EXPECT_EQ(found.minimizer.indices(), expected.members);
    const auto bb = qubo_min_branch_and_bound(c, a);
    EXPECT_EQ(bb.value, expected.value);
    EXPECT_EQ(bb.minimizer.indices(), expected.members);
  }
}

TEST(QuboMin, BranchAndBoundAgreesWithEnumerationOnLargerInstances) {
  Rng rng(203);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = testing::uniform_int(rng, 14, 20);
    const MatrixQ aq = random_upper(rng, n, -5, 5);
    const auto enumerated = qubo_min_enumerate(Rational(0), aq);
    const auto bb = qubo_min_branch_and_bound(Rational(0), aq);
    EXPECT_EQ(enumerated.value, bb.value);
    EXPECT_EQ(enumerated.minimizer, bb.minimizer);
    const Matrix<double> ad = cast_matrix<double>(aq);
    EXPECT_EQ(qubo_min_branch_and_bound(0.0, ad).value, to_double(enumerated.value));
  }
}

TEST(QuboLowest, ReturnsTheKBestInOrder) {
  Rng rng(204);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testing::uniform_int(rng, 1, 9);
    const MatrixQ a = random_upper(rng, n, -3, 3);
    const auto ranked = ranked_subsets(Rational(1), a);
    const std::size_t k = static_cast<std::size_t>(testing::uniform_int(rng, 1, 12));
    const auto lowest = qubo_lowest_enumerate(Rational(1), a, k);
    ASSERT_EQ(lowest.size(), std::min(k, ranked.size()));
    for (std::size_t r = 0; r < lowest.size(); ++r) {
      EXPECT_EQ(lowest[r].value, ranked[r].value);
      EXPECT_EQ(lowest[r].minimizer.indices(), ranked[r].members);
    }
  }
}

TEST(QuboMin, CapExceeded) {
  EXPECT_THROW(qubo_min(0.0, Matrix<double>(Matrix<double>::Zero(31, 31))), CapExceeded);
}

}  // namespace
}  // namespace realkit
