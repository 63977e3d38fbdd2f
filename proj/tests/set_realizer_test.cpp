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

#include "realkit/set_realizer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "realkit/errors.hpp"
#include "test_support.hpp"

namespace realkit {
namespace {

using testing::q;
using testing::Rng;

TwoPointTarget uniform_target(int n, const Rational& p1, const Rational& p2) {
  MatrixQ p = MatrixQ::Constant(n, n, p2);
  for (int i = 0; i < n; ++i) p(i, i) = p1;
  return TwoPointTarget(p);
}

Subset permute_subset(Subset s, const std::vector<int>& perm) {
  std::vector<int> mapped;
  for (int i : s.indices()) mapped.push_back(perm[static_cast<std::size_t>(i)]);
  return Subset::of(mapped);
}

SubsetMixture permute_mixture(const SubsetMixture& mix, const std::vector<int>& perm) {
  SubsetMixture out{mix.points, {}};
  for (const auto& atom : mix.atoms) out.atoms.push_back({permute_subset(atom.subset, perm), atom.weight});
  out.canonicalize();
  return out;
}

std::vector<Permutation> cyclic_group(int n) {
  std::vector<Permutation> group;
  for (int shift = 0; shift < n; ++shift) {
    Permutation g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = (i + shift) % n;
    group.push_back(g);
  }
  return group;
}

// Exact mixture check independent of moments_of_mixture.
void expect_realizes(const SubsetMixture& mix, const TwoPointTarget& target) {
  EXPECT_EQ(mix.total_weight(), Rational(1));
  for (const auto& atom : mix.atoms) EXPECT_GT(atom.weight, Rational(0));
  for (int i = 0; i < target.size(); ++i)
    for (int j = 0; j < target.size(); ++j) {
      Rational total(0);
      for (const auto& atom : mix.atoms)
        if (atom.subset.contains(i) && atom.subset.contains(j)) total += atom.weight;
      EXPECT_EQ(total, target(i, j)) << "entry " << i << "," << j;
    }
}

// Certificate check independent of verify_set_certificate.
void expect_certifies(const InfeasibilityCertificate& cert, const TwoPointTarget& target) {
  EXPECT_GE(testing::brute_force_set_minimum(cert.c, cert.a), Rational(0));
  Rational pairing = cert.c;
  for (int i = 0; i < target.size(); ++i)
    for (int j = i; j < target.size(); ++j) pairing += cert.a(i, j) * target(i, j);
  EXPECT_LT(pairing, Rational(0));
  EXPECT_EQ(cert.gap, -pairing);
}

// A random target: moments of a random mixture, optionally with one entry
// moved by a multiple of 1/10 (which may or may not break realisability).
TwoPointTarget random_target(Rng& rng, int n, bool perturb) {
  MatrixQ p = moments_of_mixture(testing::random_subset_mixture(rng, n, testing::uniform_int(rng, 1, 2 * n))).p();
  if (perturb) {
    const int i = testing::uniform_int(rng, 0, n - 1);
    const int j = testing::uniform_int(rng, 0, n - 1);
    Rational v = p(i, j) + Rational(testing::uniform_int(rng, -3, 3), 10);
    v = std::clamp(v, Rational(0), Rational(1));
    p(i, j) = p(j, i) = v;
  }
  return TwoPointTarget(p);
}

TEST(TwoPointTarget, ValidatesEntries) {
  EXPECT_THROW(TwoPointTarget(testing::matrix({{q("0.5"), q("1.5")}, {q("1.5"), q("0.5")}})),
               InvalidInstance);
  EXPECT_THROW(TwoPointTarget(testing::matrix({{q("0.5"), q("0.1")}, {q("0.2"), q("0.5")}})),
               InvalidInstance);
  EXPECT_THROW(TwoPointTarget(MatrixQ(2, 3)), InvalidInstance);
  EXPECT_THROW(TwoPointTarget(testing::matrix({{q("-0.5")}})), InvalidInstance);
}

TEST(RealizeSubsets, ProductExampleOnTwoPoints) {
  const auto target = uniform_target(2, q("0.5"), q("0.25"));
  const auto result = realize_subsets(target);
  ASSERT_EQ(result.verdict, Verdict::kFeasible);
  expect_realizes(*result.mixture, target);
  EXPECT_EQ(result.residual, Rational(0));
  EXPECT_FALSE(result.note.empty());  // the continuum closedness caveat
}

TEST(RealizeSubsets, ProductExampleOnFivePoints) {
  const auto target = uniform_target(5, q("0.5"), q("0.25"));
  const auto result = realize_subsets(target);
  ASSERT_EQ(result.verdict, Verdict::kFeasible);
  expect_realizes(*result.mixture, target);
}

TEST(RealizeSubsets, DisjointnessIsInfeasible) {
  const auto target = uniform_target(3, q("0.5"), Rational(0));
  const auto result = realize_subsets(target);
  ASSERT_EQ(result.verdict, Verdict::kInfeasible);
  ASSERT_TRUE(result.certificate.has_value());
  expect_certifies(*result.certificate, target);
  const auto check = verify_set_certificate(target, *result.certificate);
  EXPECT_TRUE(check.valid()) << (check.problems.empty() ? "" : check.problems.front());
  EXPECT_EQ(check.argmin, std::vector<int>{0});  // lex-least zero of the functional
  EXPECT_GT(*result.gap, Rational(0));
}

TEST(RealizeSubsets, ScaledCertificateForDisjointness) {
  // c = 2, a_ii = -2, a_ij = 4 is a sound Farkas certificate with pairing -1;
  // normalization divides by max |a_ij| = 4.
  const auto target = uniform_target(3, q("0.5"), Rational(0));
  MatrixQ a = MatrixQ::Constant(3, 3, Rational(4));
  for (int i = 0; i < 3; ++i) a(i, i) = -2;
  EXPECT_EQ(evaluate_g(Rational(2), a, Subset::of({1, 2})), Rational(2));
  InfeasibilityCertificate raw{Rational(2), a, VectorQ(), Rational(1), {1, 0, 0}};
  const auto check = verify_set_certificate(target, raw);
  EXPECT_TRUE(check.sound);
  EXPECT_EQ(check.minimum, Rational(0));
  EXPECT_EQ(check.pairing, Rational(-1));
  EXPECT_FALSE(check.normalized);  // max |a_ij| is 4
  const auto normalized = normalize_set_certificate(target, a);
  EXPECT_EQ(normalized.c, Rational(1, 2));
  EXPECT_EQ(normalized.gap, Rational(1, 4));
  EXPECT_TRUE(verify_set_certificate(target, normalized).valid());
}

TEST(RealizeSubsets, ZeroTargetIsTheEmptySet) {
  const auto result = realize_subsets(uniform_target(4, Rational(0), Rational(0)));
  ASSERT_EQ(result.verdict, Verdict::kFeasible);
  ASSERT_EQ(result.mixture->atoms.size(), 1u);
  EXPECT_TRUE(result.mixture->atoms[0].subset.empty());
  EXPECT_EQ(result.mixture->atoms[0].weight, Rational(1));
}

TEST(RealizeSubsets, SinglePointIsAlwaysFeasible) {
  for (const char* p : {"0", "0.3", "1"}) {
    const TwoPointTarget target(testing::matrix({{q(p)}}));
    const auto result = realize_subsets(target);
    ASSERT_EQ(result.verdict, Verdict::kFeasible);
    expect_realizes(*result.mixture, target);
  }
}

TEST(MomentsOfMixture, Examples) {
  const SubsetMixture deterministic{3, {{Subset::of({0, 2}), Rational(1)}}};
  const MatrixQ p = moments_of_mixture(deterministic).p();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(p(i, j), Rational((i != 1 && j != 1) ? 1 : 0));
  const auto product = product_form_mixture({q("0.5"), q("0.5")});
  EXPECT_EQ(product.atoms.size(), 4u);
  for (const auto& atom : product.atoms) EXPECT_EQ(atom.weight, Rational(1, 4));
  EXPECT_EQ(moments_of_mixture(product).p(), uniform_target(2, q("0.5"), q("0.25")).p());
  const SubsetMixture empty{2, {{Subset(), Rational(1)}}};
  EXPECT_TRUE(moments_of_mixture(empty).p().isZero());
}

TEST(ProductForm, Examples) {
  const auto deterministic = product_form_mixture({Rational(1), Rational(0)});
  ASSERT_EQ(deterministic.atoms.size(), 1u);
  EXPECT_EQ(deterministic.atoms[0].subset, Subset::of({0}));
  const auto five = product_form_mixture(std::vector<Rational>(5, q("0.5")));
  EXPECT_EQ(moments_of_mixture(five).p(), uniform_target(5, q("0.5"), q("0.25")).p());
  EXPECT_THROW(product_form_mixture(std::vector<Rational>(16, q("0.5"))), CapExceeded);
}

TEST(ProductForm, MomentsAreProductsOnRandomInputs) {
  Rng rng(401);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testing::uniform_int(rng, 1, 6);
    std::vector<Rational> p;
    for (int i = 0; i < n; ++i) p.push_back(Rational(testing::uniform_int(rng, 0, 8), 8));
    const MatrixQ m = moments_of_mixture(product_form_mixture(p)).p();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        EXPECT_EQ(m(i, j), i == j ? p[static_cast<std::size_t>(i)]
                                  : p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)]);
  }
}

TEST(Symmetrize, Examples) {
  const SubsetMixture single{3, {{Subset::of({0}), Rational(1)}}};
  const std::vector<Permutation> identity{{0, 1, 2}};
  auto unchanged = symmetrize(single, identity);
  EXPECT_EQ(unchanged.atoms.size(), 1u);
  const auto averaged = symmetrize(single, cyclic_group(3));
  ASSERT_EQ(averaged.atoms.size(), 3u);
  for (const auto& atom : averaged.atoms) {
    EXPECT_EQ(atom.subset.size(), 1);
    EXPECT_EQ(atom.weight, Rational(1, 3));
  }
}

TEST(Symmetrize, RejectsNonGroups) {
  EXPECT_THROW(validate_group({{1, 2, 0}}, 3), InvalidGroup);  // not closed
  EXPECT_THROW(validate_group({{0, 0, 1}}, 3), InvalidGroup);  // not a permutation
  EXPECT_THROW(validate_group({}, 3), InvalidGroup);
  EXPECT_NO_THROW(validate_group(cyclic_group(4), 4));
}

TEST(Symmetrize, InvariantTargetsKeepMomentsAndBecomeFixedPoints) {
  Rng rng(402);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = testing::uniform_int(rng, 3, 6);
    const auto group = cyclic_group(n);
    // Orbit-averaged random mixture gives an invariant feasible target.
    const auto seed_mix = testing::random_subset_mixture(rng, n, 3);
    const TwoPointTarget target = moments_of_mixture(symmetrize(seed_mix, group));
    ASSERT_TRUE(is_invariant(target, group));
    const auto result = realize_subsets(target);
    ASSERT_EQ(result.verdict, Verdict::kFeasible);
    const auto sym = symmetrize(*result.mixture, group);
    expect_realizes(sym, target);
    for (const auto& g : group) EXPECT_EQ(permute_mixture(sym, g).atoms.size(), sym.atoms.size());
    for (const auto& g : group) {
      const auto moved = permute_mixture(sym, g);
      for (std::size_t k = 0; k < sym.atoms.size(); ++k) {
        EXPECT_EQ(moved.atoms[k].subset, sym.atoms[k].subset);
        EXPECT_EQ(moved.atoms[k].weight, sym.atoms[k].weight);
      }
    }
  }
}

TEST(RealizeSubsets, SoundAndTotalOnRandomTargets) {
  Rng rng(403);
  int infeasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = testing::uniform_int(rng, 2, 7);
    const auto target = random_target(rng, n, trial % 2 == 1);
    const auto result = realize_subsets(target);
    ASSERT_NE(result.verdict, Verdict::kIndeterminate);  // exact mode never is
    EXPECT_EQ(result.mixture.has_value(), result.verdict == Verdict::kFeasible);
    EXPECT_EQ(result.certificate.has_value(), result.verdict == Verdict::kInfeasible);
    if (result.verdict == Verdict::kFeasible) {
      expect_realizes(*result.mixture, target);
    } else {
      ++infeasible;
      expect_certifies(*result.certificate, target);
      EXPECT_TRUE(verify_set_certificate(target, *result.certificate).valid());
    }
  }
  EXPECT_GT(infeasible, 5);
}

TEST(RealizeSubsets, AgreesWithFullEnumerationOracle) {
  Rng rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testing::uniform_int(rng, 2, 9);
    const auto target = random_target(rng, n, trial % 2 == 0);
    const bool expected = testing::full_enumeration_feasible(target);
    SetRealizeOptions generation_only;
    generation_only.max_exact = 0;
    EXPECT_EQ(realize_subsets(target).verdict == Verdict::kFeasible, expected);
    EXPECT_EQ(realize_subsets(target, generation_only).verdict == Verdict::kFeasible, expected);
  }
}

TEST(RealizeSubsets, RelabelingEquivariance) {
  Rng rng(405);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    const auto target = random_target(rng, n, trial % 2 == 0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto moved = target.permuted(perm);
    const auto original = realize_subsets(target);
    const auto relabeled = realize_subsets(moved);
    ASSERT_EQ(original.verdict, relabeled.verdict);
    if (original.verdict == Verdict::kFeasible) {
      expect_realizes(permute_mixture(*original.mixture, perm), moved);
    } else {
      InfeasibilityCertificate cert = *original.certificate;
      MatrixQ a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = cert.a(i, j);
      std::vector<int> minimizer(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        minimizer[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
            cert.minimizer[static_cast<std::size_t>(i)];
      cert.a = a;
      cert.minimizer = minimizer;
      EXPECT_TRUE(verify_set_certificate(moved, cert).valid());
    }
  }
}

TEST(RealizeSubsets, FrechetViolationsAreInfeasibleAndTheLpAgrees) {
  Rng rng(406);
  int seen = 0;
  for (int trial = 0; trial < 200 && seen < 25; ++trial) {
    const int n = testing::uniform_int(rng, 2, 6);
    MatrixQ p(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) p(i, j) = p(j, i) = Rational(testing::uniform_int(rng, 0, 10), 10);
    const TwoPointTarget target(p);
    if (target.frechet_violations().empty()) continue;
    ++seen;
    const auto screened = realize_subsets(target);
    ASSERT_EQ(screened.verdict, Verdict::kInfeasible);
    EXPECT_EQ(screened.method, "frechet");
    expect_certifies(*screened.certificate, target);
    SetRealizeOptions no_screen;
    no_screen.frechet_screen = false;
    EXPECT_EQ(realize_subsets(target, no_screen).verdict, Verdict::kInfeasible);
    EXPECT_FALSE(testing::full_enumeration_feasible(target));
  }
  EXPECT_EQ(seen, 25);
}

TEST(VerifySetCertificate, RejectsTampering) {
  const auto target = uniform_target(3, q("0.5"), Rational(0));
  const auto cert = *realize_subsets(target).certificate;
  auto flipped = cert;
  flipped.a(0, 1) = flipped.a(1, 0) = -flipped.a(0, 1);
  EXPECT_FALSE(verify_set_certificate(target, flipped).valid());
  auto shifted = cert;
  shifted.c -= q("0.1");
  EXPECT_FALSE(verify_set_certificate(target, shifted).valid());
  auto wrong_gap = cert;
  wrong_gap.gap += q("0.1");
  EXPECT_FALSE(verify_set_certificate(target, wrong_gap).valid());
}

}  // namespace
}  // namespace realkit
