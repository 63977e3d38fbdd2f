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

#include "realkit/rational.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "realkit/psi.hpp"
#include "realkit/errors.hpp"

namespace realkit {
namespace {

TEST(RationalParse, AcceptsDecimalsFractionsAndExponents) {
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E+2"), Rational(250));
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("-2/4"), Rational(-1, 2));
}

TEST(RationalParse, RejectsMalformedText) {
  for (const char* text : {"", "abc", "1/0", "0.5.1", "1/", "--1", "1e", "nan"})
    EXPECT_THROW(parse_rational(text), std::invalid_argument) << text;
}

TEST(RationalFormat, TerminatingDecimalsAndFractions) {
  EXPECT_EQ(format_rational(Rational(1, 4)), "0.25");
  EXPECT_EQ(format_rational(Rational(-7, 2)), "-3.5");
  EXPECT_EQ(format_rational(Rational(1, 3)), "1/3");
  EXPECT_EQ(format_rational(Rational(5)), "5");
  EXPECT_EQ(format_rational(Rational(0)), "0");
}

TEST(RationalFormat, RoundTripsOnRandomValues) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const long num = static_cast<long>(rng() % 20001) - 10000;
    const long den = static_cast<long>(rng() % 999) + 1;
    const Rational value(num, den);
    EXPECT_EQ(parse_rational(format_rational(value)), value);
  }
}

TEST(RationalConvert, FromDoubleIsExact) {
  EXPECT_EQ(from_double(0.5), Rational(1, 2));
  EXPECT_EQ(from_double(-0.125), Rational(-1, 8));
  EXPECT_EQ(to_double(from_double(0.1)), 0.1);
}

TEST(RationalConvert, RationalizeFindsSmallDenominators) {
  EXPECT_EQ(rationalize(1.0 / 3.0, 1000), Rational(1, 3));
  EXPECT_EQ(rationalize(-2.0 / 7.0, 1000), Rational(-2, 7));
  EXPECT_EQ(rationalize(-1.5, 10), Rational(-3, 2));
  EXPECT_EQ(rationalize(0.0, 10), Rational(0));
}

TEST(RationalSqrt, PerfectSquaresOnly) {
  EXPECT_EQ(exact_sqrt(Rational(9, 4)), Rational(3, 2));
  EXPECT_EQ(exact_sqrt(Rational(0)), Rational(0));
  EXPECT_FALSE(exact_sqrt(Rational(2)).has_value());
  EXPECT_FALSE(exact_sqrt(Rational(1, 3)).has_value());
}

TEST(ExtendedRational, ArithmeticAndOrder) {
  const ExtendedRational inf = ExtendedRational::infinity();
  EXPECT_TRUE((ExtendedRational(1) + inf).is_infinite());
  EXPECT_EQ(inf.scaled(Rational(0)), ExtendedRational(0));  // 0 * inf = 0
  EXPECT_TRUE(inf.scaled(Rational(1, 2)).is_infinite());
  EXPECT_LT(ExtendedRational(Rational(100)), inf);
  EXPECT_FALSE(inf < inf);
  EXPECT_EQ(parse_extended("inf"), inf);
  EXPECT_EQ(format_extended(inf), "inf");
  EXPECT_EQ(parse_extended("0.5"), ExtendedRational(Rational(1, 2)));
}

TEST(PsiFunction, StepSemantics) {
  const PsiFunction psi({{Rational(1), ExtendedRational::infinity()},
                         {Rational(2), ExtendedRational(Rational(3))},
                         {Rational(4), ExtendedRational(Rational(1))}});
  EXPECT_TRUE(psi(Rational(1, 2)).is_infinite());  // below the first breakpoint
  EXPECT_TRUE(psi(Rational(1)).is_infinite());
  EXPECT_EQ(psi(Rational(2)), ExtendedRational(Rational(3)));  // right-continuous
  EXPECT_EQ(psi(Rational(7, 2)), ExtendedRational(Rational(3)));
  EXPECT_EQ(psi(Rational(100)), ExtendedRational(Rational(1)));
  EXPECT_EQ(PsiFunction::constant(Rational(2))(Rational(0)), ExtendedRational(Rational(2)));
}

TEST(PsiFunction, RejectsIncreasingSegmentsAndBadBreakpoints) {
  EXPECT_THROW(PsiFunction({{Rational(0), ExtendedRational(1)}, {Rational(1), ExtendedRational(2)}}),
               InvalidPsi);
  EXPECT_THROW(PsiFunction({{Rational(1), ExtendedRational(1)}, {Rational(1), ExtendedRational(1)}}),
               InvalidPsi);
  EXPECT_THROW(PsiFunction({{Rational(-1), ExtendedRational(1)}}), InvalidPsi);
}

}  // namespace
}  // namespace realkit
