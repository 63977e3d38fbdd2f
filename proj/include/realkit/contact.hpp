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

// Contact distribution functions tau_x(R) = P{d(x, Z) <= R} of a random
// closed set Z in R^d, given as sub-probability step functions.
//
// Two reference points at distance l admit a common Z iff, for all R >= 0,
//
//   tau_1(R - l) <= tau_2(R) <= tau_1(R + l),   tau_1(R - l) := 0 for R < l.
//
// A realisation feeds one uniform u through both generalised inverses and
// places one point on each sphere along the line through x_1 and x_2.

#ifndef REALKIT_CONTACT_HPP_
#define REALKIT_CONTACT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "realkit/rational.hpp"

namespace realkit {

struct CdfJump {
  Rational r;
  Rational value;
};

/// Right-continuous non-decreasing step function, zero before the first jump.
class StepCdf {
 public:
  /// Throws InvalidInstance unless abscissae are non-negative and strictly
  /// increasing and values are non-decreasing within [0, 1].
  explicit StepCdf(std::vector<CdfJump> jumps);

  Rational operator()(const Rational& r) const;
  /// tau(a + k sqrt(s)) for a point given in that form.
  Rational at(const Rational& a, int k, const Rational& s) const;
  Rational total_mass() const;
  const std::vector<CdfJump>& jumps() const { return jumps_; }

  friend bool operator==(const StepCdf&, const StepCdf&);

 private:
  std::vector<CdfJump> jumps_;
};

/// A real number a + k sqrt(s) with a rational, k an integer and s >= 0.
struct Surd {
  Rational a;
  int k = 0;
  Rational s{0};

  std::optional<Rational> rational() const;
  double approx() const;
  std::string format() const;
};

/// Sign of a + k sqrt(s).
int surd_sign(const Rational& a, int k, const Rational& s);

struct ContactViolation {
  enum class Side { kLower, kUpper };
  Surd r;
  Side side;
  Rational lhs;  // the side's left-hand value at r
  Rational rhs;
};

std::string to_string(ContactViolation::Side side);

/// Checks both inequalities at every point of {0, l} and of the jumps of
/// either function shifted by 0 and +-l, ascending, and returns the first
/// violation. The squared distance l^2 may be any non-negative rational.
std::optional<ContactViolation> check_two_point_squared(const StepCdf& tau1, const StepCdf& tau2,
                                                        const Rational& l_squared);

std::optional<ContactViolation> check_two_point(const StepCdf& tau1, const StepCdf& tau2,
                                                const Rational& l);

/// inf{R : tau(R) >= u}; 0 for u = 0 and nullopt when u exceeds the total
/// mass (the set avoids every ball around the reference point).
std::optional<Rational> invert_cdf(const StepCdf& tau, const Rational& u);

struct ContactSet {
  Rational r1;
  Rational r2;
  // Exact coordinates when the reference distance is rational.
  std::vector<VectorQ> exact;
  std::vector<Vector<double>> approx;
};

/// Antipodal placement a1 = x1 + R1 (x1 - x2)/l, a2 = x2 + R2 (x2 - x1)/l,
/// or the single point x1 + R e_1 when x1 = x2. nullopt means the set is
/// empty. Throws Infeasible when x1 = x2 and the functions differ, or when
/// exactly one inverse exists.
std::optional<ContactSet> construct_two_point_set(const StepCdf& tau1, const StepCdf& tau2,
                                                  const VectorQ& x1, const VectorQ& x2,
                                                  const Rational& u);

struct Ball {
  int center;  // index into BallSystem::centers
  Rational radius;
  Rational coefficient;
};

struct BallSystem {
  std::vector<VectorQ> centers;
  std::vector<StepCdf> taus;  // one per center
  std::vector<Ball> balls;
};

struct BallScreen {
  bool nonnegative = false;               // g(F) >= 0 for every probe subset F
  std::optional<std::vector<int>> witness;  // probe subset with g(F) < 0
  Rational g_min{0};
  std::optional<Rational> functional;  // sum_i a_i tau_{x_i}(R_i), when nonnegative
  bool pass = false;
};

/// g(F) = sum_i a_i 1{F meets the closed ball i} over all subsets F of the
/// probes (at most 20). Only when g >= 0 there is the functional evaluated.
/// A failure is a screen result: g >= 0 on probe subsets need not imply
/// g >= 0 on all closed sets.
BallScreen ball_positivity_screen(const BallSystem& system, const std::vector<VectorQ>& probes);

struct EmpiricalPoint {
  Rational r;
  Rational tau1;
  Rational tau2;
  double empirical1;
  double empirical2;
};

struct MonteCarloReport {
  long samples = 0;
  std::uint64_t seed = 0;
  long empty_sets = 0;
  bool exact = false;  // constructions verified in rational arithmetic
  std::vector<EmpiricalPoint> points;
  double deviation1 = 0;
  double deviation2 = 0;
  double max_deviation = 0;
};

/// Draws u per sample (seeded mt19937_64), realises the two-point set and
/// records d(x_i, set), then compares the empirical cdfs with tau_i at
/// every jump of either function. Throws Infeasible if the pair fails
/// check_two_point.
MonteCarloReport monte_carlo_contact(const StepCdf& tau1, const StepCdf& tau2, const VectorQ& x1,
                                     const VectorQ& x2, long samples, std::uint64_t seed);

}  // namespace realkit

#endif  // REALKIT_CONTACT_HPP_
