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

#include "realkit/contact.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "realkit/errors.hpp"
#include "test_support.hpp"

namespace realkit {
namespace {

using testing::q;
using testing::Rng;

StepCdf step_at(const char* r) { return StepCdf({{q(r), Rational(1)}}); }

VectorQ point(std::initializer_list<Rational> coords) {
  VectorQ v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (const auto& c : coords) v(k++) = c;
  return v;
}

// Jumps on the half-integer lattice in [0, 4], values in tenths.
StepCdf random_cdf(Rng& rng, int total_tenths) {
  std::vector<CdfJump> jumps;
  int value = 0;
  for (int k = 0; k <= 8 && value < total_tenths; ++k) {
    if (testing::uniform_int(rng, 0, 2) != 0) continue;
    value = std::min(total_tenths, value + testing::uniform_int(rng, 1, 5));
    jumps.push_back({Rational(k, 2), Rational(value, 10)});
  }
  if (value < total_tenths) jumps.push_back({Rational(9, 2), Rational(total_tenths, 10)});
  return StepCdf(jumps);
}

// The sandwich inequality on every multiple of 1/4 up to well past the
// last jump. Complete when jumps and l lie on the half-integer lattice.
bool lattice_check(const StepCdf& tau1, const StepCdf& tau2, const Rational& l) {
  for (int k = 0; k <= 60; ++k) {
    const Rational r(k, 4);
    const Rational lower = r - l < 0 ? Rational(0) : tau1(r - l);
    if (lower > tau2(r) || tau2(r) > tau1(r + l)) return false;
  }
  return true;
}

TEST(CheckTwoPoint, Examples) {
  Rng rng(701);
  const StepCdf tau = random_cdf(rng, 7);
  EXPECT_FALSE(check_two_point(tau, tau, q("0.3")).has_value());
  const auto violation = check_two_point(step_at("1"), step_at("3"), Rational(1));
  ASSERT_TRUE(violation.has_value());
  EXPECT_EQ(violation->r.rational(), Rational(2));
  EXPECT_EQ(violation->side, ContactViolation::Side::kLower);
  EXPECT_EQ(violation->lhs, Rational(1));
  EXPECT_EQ(violation->rhs, Rational(0));
  EXPECT_FALSE(check_two_point(step_at("1"), step_at("1.5"), Rational(1)).has_value());
}

TEST(CheckTwoPoint, IrrationalDistance) {
  // l = sqrt(2): step at 1 against step at 2.5 fails (gap 1.5 > 1.414...),
  // against step at 2.4 passes.
  const auto fails = check_two_point_squared(step_at("1"), step_at("2.5"), Rational(2));
  ASSERT_TRUE(fails.has_value());
  EXPECT_FALSE(fails->r.rational().has_value());
  EXPECT_FALSE(check_two_point_squared(step_at("1"), step_at("2.4"), Rational(2)).has_value());
}

TEST(CheckTwoPoint, MatchesLatticeOracleAndIsSymmetric) {
  Rng rng(702);
  int passed = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int total = testing::uniform_int(rng, 1, 10);
    const StepCdf tau1 = random_cdf(rng, total);
    const StepCdf tau2 = random_cdf(rng, testing::uniform_int(rng, 0, 3) == 0 ? testing::uniform_int(rng, 1, 10) : total);
    const Rational l(testing::uniform_int(rng, 0, 6), 2);
    const bool ok = !check_two_point(tau1, tau2, l).has_value();
    EXPECT_EQ(ok, lattice_check(tau1, tau2, l));
    EXPECT_EQ(ok, !check_two_point(tau2, tau1, l).has_value());
    if (ok) ++passed;
  }
  EXPECT_GT(passed, 50);
}

TEST(CheckTwoPoint, EqualFunctionsAlwaysPass) {
  Rng rng(703);
  for (int trial = 0; trial < 100; ++trial) {
    const StepCdf tau = random_cdf(rng, testing::uniform_int(rng, 1, 10));
    EXPECT_FALSE(check_two_point(tau, tau, Rational(testing::uniform_int(rng, 0, 20), 7)).has_value());
  }
}

TEST(InvertCdf, Examples) {
  EXPECT_EQ(invert_cdf(step_at("1"), q("0.5")), Rational(1));
  EXPECT_EQ(invert_cdf(step_at("1"), Rational(0)), Rational(0));
  const StepCdf two({{q("1"), q("0.4")}, {q("2"), q("1")}});
  EXPECT_EQ(invert_cdf(two, q("0.7")), Rational(2));
  EXPECT_EQ(invert_cdf(two, q("0.4")), Rational(1));
  const StepCdf sub({{q("1"), q("0.5")}});
  EXPECT_FALSE(invert_cdf(sub, q("0.6")).has_value());
}

TEST(InvertCdf, RadiiStayWithinLWhenTheCheckPasses) {
  Rng rng(704);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 40; ++trial) {
    const int total = testing::uniform_int(rng, 1, 10);
    const StepCdf tau1 = random_cdf(rng, total);
    const StepCdf tau2 = random_cdf(rng, total);
    const Rational l(testing::uniform_int(rng, 0, 6), 2);
    if (check_two_point(tau1, tau2, l)) continue;
    ++checked;
    for (int k = 0; k <= 1000; ++k) {
      const Rational u(k, 1000);
      const auto r1 = invert_cdf(tau1, u);
      const auto r2 = invert_cdf(tau2, u);
      ASSERT_EQ(r1.has_value(), r2.has_value());
      if (r1) EXPECT_LE(abs(*r1 - *r2), l);
    }
  }
  EXPECT_EQ(checked, 40);
}

TEST(ConstructTwoPointSet, Examples) {
  const auto set = construct_two_point_set(step_at("1"), step_at("2"), point({0, 0}), point({2, 0}), q("0.5"));
  ASSERT_TRUE(set.has_value());
  ASSERT_EQ(set->exact.size(), 2u);
  EXPECT_EQ(set->exact[0], point({-1, 0}));
  EXPECT_EQ(set->exact[1], point({4, 0}));

  const auto same = construct_two_point_set(step_at("1"), step_at("1"), point({0, 0}), point({2, 0}), q("0.5"));
  EXPECT_EQ(same->r1, same->r2);
  EXPECT_EQ(same->exact[0], point({-1, 0}));
  EXPECT_EQ(same->exact[1], point({3, 0}));

  const StepCdf sub({{q("1"), q("0.5")}});
  EXPECT_FALSE(construct_two_point_set(sub, sub, point({0}), point({1}), q("0.9")).has_value());
  EXPECT_THROW(construct_two_point_set(step_at("1"), step_at("2"), point({0}), point({0}), q("0.5")), Infeasible);
  const auto single = construct_two_point_set(step_at("1"), step_at("1"), point({0}), point({0}), q("0.5"));
  ASSERT_EQ(single->exact.size(), 1u);
  EXPECT_EQ(single->exact[0], point({1}));
}

TEST(ConstructTwoPointSet, DistancesAreExactForRationalL) {
  Rng rng(705);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 40; ++trial) {
    const int total = testing::uniform_int(rng, 1, 10);
    const StepCdf tau1 = random_cdf(rng, total);
    const StepCdf tau2 = random_cdf(rng, total);
    // Pythagorean offsets keep l rational.
    const Rational scale(testing::uniform_int(rng, 1, 4), 4);
    const VectorQ x1 = point({Rational(testing::uniform_int(rng, -3, 3)), Rational(1)});
    const VectorQ x2 = x1 + point({3 * scale, 4 * scale});
    if (check_two_point(tau1, tau2, 5 * scale)) continue;
    ++checked;
    for (int k = 1; k <= 20; ++k) {
      const auto set = construct_two_point_set(tau1, tau2, x1, x2, Rational(k, 20));
      if (!set) continue;
      for (int side = 0; side < 2; ++side) {
        const VectorQ& x = side == 0 ? x1 : x2;
        Rational nearest(-1);
        for (const auto& a : set->exact) {
          const Rational d2 = (x - a).squaredNorm();
          if (nearest < 0 || d2 < nearest) nearest = d2;
        }
        const Rational r = side == 0 ? set->r1 : set->r2;
        EXPECT_EQ(nearest, r * r);
      }
    }
  }
  EXPECT_EQ(checked, 40);
}

TEST(BallPositivityScreen, Examples) {
  const StepCdf tau({{q("1"), q("0.3")}, {q("2"), q("0.8")}});
  const std::vector<VectorQ> probes{point({0, 0}), point({q("1.5"), 0}), point({3, 0})};

  BallSystem single{{point({0, 0})}, {tau}, {{0, Rational(1), Rational(1)}}};
  const auto one = ball_positivity_screen(single, probes);
  EXPECT_TRUE(one.nonnegative);
  EXPECT_TRUE(one.pass);

  BallSystem nested{{point({0, 0})}, {tau}, {{0, Rational(2), Rational(1)}, {0, Rational(1), Rational(-1)}}};
  const auto both = ball_positivity_screen(nested, probes);
  EXPECT_TRUE(both.nonnegative);
  EXPECT_TRUE(both.pass);
  EXPECT_EQ(*both.functional, q("0.5"));

  BallSystem negative{{point({0, 0})}, {tau}, {{0, Rational(1), Rational(-1)}}};
  const auto rejected = ball_positivity_screen(negative, probes);
  EXPECT_FALSE(rejected.nonnegative);
  EXPECT_FALSE(rejected.functional.has_value());
  EXPECT_EQ(*rejected.witness, std::vector<int>{0});
}

TEST(MonteCarloContact, DeterministicRadiusGivesExactSteps) {
  const auto report = monte_carlo_contact(step_at("1"), step_at("1"), point({0, 0}), point({1, 0}), 100000, 7);
  EXPECT_EQ(report.max_deviation, 0.0);
  EXPECT_TRUE(report.exact);
  ASSERT_EQ(report.points.size(), 1u);
  EXPECT_EQ(report.points[0].empirical1, 1.0);
}

TEST(MonteCarloContact, TwoStepDeviationWithinDkwBand) {
  const StepCdf tau1({{q("1"), q("0.4")}, {q("2"), q("1")}});
  const StepCdf tau2({{q("1.5"), q("0.4")}, {q("2.5"), q("1")}});
  ASSERT_FALSE(check_two_point(tau1, tau2, Rational(1)).has_value());
  const auto report = monte_carlo_contact(tau1, tau2, point({0, 0}), point({1, 0}), 100000, 7);
  // Two-sided DKW at 99.9% for each of the two functions.
  EXPECT_LE(report.max_deviation, std::sqrt(std::log(2.0 / 0.0005) / (2.0 * 100000)));
  const auto again = monte_carlo_contact(tau1, tau2, point({0, 0}), point({1, 0}), 100000, 7);
  EXPECT_EQ(report.max_deviation, again.max_deviation);
  EXPECT_EQ(report.points.size(), again.points.size());
  for (std::size_t k = 0; k < report.points.size(); ++k) {
    EXPECT_EQ(report.points[k].empirical1, again.points[k].empirical1);
    EXPECT_EQ(report.points[k].empirical2, again.points[k].empirical2);
  }
}

TEST(MonteCarloContact, SubProbabilityTailCountsEmptySets) {
  const StepCdf sub({{q("1"), q("0.5")}});
  const auto report = monte_carlo_contact(sub, sub, point({0}), point({1}), 20000, 3);
  EXPECT_GT(report.empty_sets, 9000);
  EXPECT_LT(report.empty_sets, 11000);
  EXPECT_THROW(monte_carlo_contact(step_at("1"), step_at("3"), point({0}), point({1}), 10, 3), Infeasible);
}

TEST(StepCdf, RejectsMalformedJumps) {
  EXPECT_THROW(StepCdf({{q("1"), q("0.5")}, {q("1"), q("0.6")}}), InvalidInstance);
  EXPECT_THROW(StepCdf({{q("1"), q("0.5")}, {q("2"), q("0.4")}}), InvalidInstance);
  EXPECT_THROW(StepCdf({{q("1"), q("1.5")}}), InvalidInstance);
  EXPECT_THROW(StepCdf({{q("-1"), q("0.5")}}), InvalidInstance);
}

}  // namespace
}  // namespace realkit
