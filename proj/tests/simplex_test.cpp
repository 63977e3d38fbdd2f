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

#include "realkit/simplex.hpp"

#include <gtest/gtest.h>

#include <optional>

#include <Eigen/LU>

#include "realkit/column_generation.hpp"
#include "test_support.hpp"

namespace realkit {
namespace {

using testing::Rng;

struct DenseLp {
  MatrixQ a;  // rows x columns, non-negative right-hand side
  VectorQ b;
  VectorQ c;
};

SparseVector<Rational> sparse_column(const MatrixQ& a, int j) {
  SparseVector<Rational> column(a.rows());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    if (a(r, j) != 0) column.insert(r) = a(r, j);
  return column;
}

// Optimum over basic feasible solutions, by trying every column subset of
// size `rows` with a non-singular basis matrix (exact Gaussian elimination).
std::optional<Rational> vertex_enumeration_optimum(const DenseLp& lp) {
  const int m = static_cast<int>(lp.a.rows());
  const int k = static_cast<int>(lp.a.cols());
  std::optional<Rational> best;
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << k); ++bits) {
    if (std::popcount(bits) != m) continue;
    std::vector<int> cols;
    for (int j = 0; j < k; ++j)
      if ((bits >> j) & 1U) cols.push_back(j);
    MatrixQ aug(m, m + 1);
    for (int r = 0; r < m; ++r) {
      for (int p = 0; p < m; ++p) aug(r, p) = lp.a(r, cols[static_cast<std::size_t>(p)]);
      aug(r, m) = lp.b(r);
    }
    bool singular = false;
    for (int col = 0; col < m && !singular; ++col) {
      int pivot = -1;
      for (int r = col; r < m; ++r)
        if (aug(r, col) != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) {
        singular = true;
        break;
      }
      aug.row(col).swap(aug.row(pivot));
      for (int r = 0; r < m; ++r) {
        if (r == col || aug(r, col) == 0) continue;
        const Rational factor = aug(r, col) / aug(col, col);
        for (int p = col; p <= m; ++p) aug(r, p) -= factor * aug(col, p);
      }
    }
    if (singular) continue;
    Rational value(0);
    bool feasible = true;
    for (int r = 0; r < m; ++r) {
      const Rational x = aug(r, m) / aug(r, r);
      if (x < 0) feasible = false;
      value += x * lp.c(cols[static_cast<std::size_t>(r)]);
    }
    if (feasible && (!best || value < *best)) best = value;
  }
  return best;
}

// Full row rank, so that every feasible LP has a basic feasible solution
// made of real columns.
DenseLp random_lp(Rng& rng, int m, int k) {
  DenseLp lp{MatrixQ(m, k), VectorQ(m), VectorQ(k)};
  do {
    for (int r = 0; r < m; ++r)
      for (int j = 0; j < k; ++j) lp.a(r, j) = Rational(testing::uniform_int(rng, -2, 3));
  } while (Eigen::FullPivLU<Matrix<double>>(cast_matrix<double>(lp.a)).rank() < m);
  for (int r = 0; r < m; ++r) lp.b(r) = Rational(testing::uniform_int(rng, 0, 4));
  // Bounded: every column costs at least 1.
  for (int j = 0; j < k; ++j) lp.c(j) = Rational(testing::uniform_int(rng, 1, 5));
  return lp;
}

TEST(Simplex, SmallOptimumAndDuals) {
  VectorQ b(1);
  b << 1;
  Simplex<Rational> lp(b);
  SparseVector<Rational> one(1);
  one.insert(0) = 1;
  lp.add_column(one, Rational(1));
  lp.add_column(one, Rational(2));
  ASSERT_EQ(lp.phase1(), LpStatus::kOptimal);
  ASSERT_TRUE(lp.feasible());
  ASSERT_EQ(lp.phase2(), LpStatus::kOptimal);
  EXPECT_EQ(lp.objective(), Rational(1));
  EXPECT_EQ(lp.primal()[0], Rational(1));
  EXPECT_EQ(lp.duals()(0), Rational(1));
}

TEST(Simplex, InfeasibleSystemYieldsFarkasRay) {
  VectorQ b(2);
  b << 1, 2;
  Simplex<Rational> lp(b);
  SparseVector<Rational> col(2);
  col.insert(0) = 1;
  col.insert(1) = 1;
  lp.add_column(col, Rational(0));
  lp.add_column(col, Rational(0));
  lp.phase1();
  ASSERT_FALSE(lp.feasible());
  const VectorQ y = lp.duals();
  EXPECT_LE(y(0) + y(1), Rational(0));  // y . A_j <= 0 for every column
  EXPECT_GT(y.dot(b), Rational(0));     // y . b > 0
}

TEST(Simplex, MatchesVertexEnumerationOnRandomLps) {
  Rng rng(301);
  int checked_feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int m = testing::uniform_int(rng, 1, 3);
    const int k = testing::uniform_int(rng, m, 7);
    const DenseLp dense = random_lp(rng, m, k);
    const auto expected = vertex_enumeration_optimum(dense);
    Simplex<Rational> exact(dense.b);
    Simplex<double> approx(dense.b.unaryExpr([](const Rational& v) { return to_double(v); }));
    for (int j = 0; j < k; ++j) {
      exact.add_column(sparse_column(dense.a, j), dense.c(j));
      SparseVector<double> column(m);
      for (int r = 0; r < m; ++r)
        if (dense.a(r, j) != 0) column.insert(r) = to_double(dense.a(r, j));
      approx.add_column(column, to_double(dense.c(j)));
    }
    ASSERT_EQ(exact.phase1(), LpStatus::kOptimal);
    ASSERT_EQ(approx.phase1(), LpStatus::kOptimal);
    EXPECT_EQ(exact.feasible(), expected.has_value());
    EXPECT_EQ(approx.feasible(), expected.has_value());
    if (!expected) continue;
    ++checked_feasible;
    ASSERT_EQ(exact.phase2(), LpStatus::kOptimal);
    ASSERT_EQ(approx.phase2(), LpStatus::kOptimal);
    EXPECT_EQ(exact.objective(), *expected);
    EXPECT_NEAR(approx.objective(), to_double(*expected), 1e-9);
    // Strong duality and dual feasibility.
    const VectorQ y = exact.duals();
    EXPECT_EQ(y.dot(dense.b), *expected);
    for (int j = 0; j < k; ++j) EXPECT_GE(exact.reduced_cost(j, y), Rational(0));
  }
  EXPECT_GT(checked_feasible, 50);
}

// Column family given explicitly, priced by scanning.
struct ExplicitPricer {
  using Key = int;
  DenseLp lp;
  SparseVector<Rational> column(int j) const { return sparse_column(lp.a, j); }
  Rational cost(int j) const { return lp.c(j); }
  std::vector<Priced<int, Rational>> price(const VectorQ& y, bool phase_one, std::size_t max) const {
    std::vector<Priced<int, Rational>> out;
    for (int j = 0; j < lp.a.cols(); ++j) {
      Rational rc = (phase_one ? Rational(0) : lp.c(j));
      for (Eigen::Index r = 0; r < lp.a.rows(); ++r) rc -= y(r) * lp.a(r, j);
      if (rc < 0) out.push_back({j, rc});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& x, const auto& z) { return x.reduced_cost < z.reduced_cost; });
    if (out.size() > max) out.resize(max);
    return out;
  }
};

TEST(ColumnGeneration, AgreesWithFullLp) {
  Rng rng(302);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = testing::uniform_int(rng, 1, 3);
    const int k = testing::uniform_int(rng, m, 9);
    ExplicitPricer pricer{random_lp(rng, m, k)};
    const auto expected = vertex_enumeration_optimum(pricer.lp);
    ColumnGenerationOptions options;
    options.columns_per_round = 1;
    const auto result = column_generation<Rational>(pricer.lp.b, pricer, {0}, true, options);
    if (!expected) {
      EXPECT_EQ(result.status, GenerationStatus::kInfeasible);
      // Farkas: y . A_j <= 0 for all j, y . b > 0.
      for (int j = 0; j < k; ++j) {
        Rational dot(0);
        for (int r = 0; r < m; ++r) dot += result.farkas(r) * pricer.lp.a(r, j);
        EXPECT_LE(dot, Rational(0));
      }
      EXPECT_GT(result.farkas.dot(pricer.lp.b), Rational(0));
      continue;
    }
    ASSERT_EQ(result.status, GenerationStatus::kFeasible);
    EXPECT_EQ(result.objective, *expected);
    EXPECT_EQ(result.dual_objective, *expected);
  }
}

}  // namespace
}  // namespace realkit
