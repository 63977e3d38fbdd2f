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

// Integrability checks on atomic second-order measures.
//
// Integrals are plain sums over the listed atoms: a symmetric measure must
// list both orientations of an off-diagonal pair (AtomicMeasure2D::from_target
// does this). Euclidean norms are irrational in general, so |x|^-d is
// carried as an enclosing interval with exact endpoints whenever it is not
// itself rational.

#ifndef REALKIT_REGULARITY_HPP_
#define REALKIT_REGULARITY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "realkit/metric_space.hpp"
#include "realkit/pp_realizer.hpp"
#include "realkit/psi.hpp"

namespace realkit {

/// Atomic measure on X x X, X either a finite metric space (points are
/// indices) or R^d with rational coordinates. Zero-weight atoms are dropped.
class AtomicMeasure2D {
 public:
  struct Atom {
    int a = -1;
    int b = -1;
    VectorQ x;
    VectorQ y;
    Rational weight;
  };

  static AtomicMeasure2D finite(const FiniteMetricSpace& space,
                                const std::vector<CorrelationAtom>& atoms);
  static AtomicMeasure2D euclidean(int dimension, const std::vector<Atom>& atoms);
  /// Both orientations of every positive-weight pair of the target.
  static AtomicMeasure2D from_target(const CorrelationTarget& target);

  bool is_euclidean() const { return dimension_ > 0; }
  int dimension() const { return dimension_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<FiniteMetricSpace>& space() const { return space_; }

  /// Squared distance between the two endpoints of an atom (exact).
  Rational squared_distance(const Atom& atom) const;

  /// Measure with both atom lists.
  AtomicMeasure2D concatenated(const AtomicMeasure2D& other) const;

 private:
  int dimension_ = 0;  // 0 for a finite space
  std::optional<FiniteMetricSpace> space_;
  std::vector<Atom> atoms_;
};

/// A value in [lower, upper]; exact when the endpoints agree.
struct Enclosure {
  ExtendedRational lower;
  ExtendedRational upper;

  static Enclosure exactly(ExtendedRational value) { return {value, value}; }
  bool exact() const { return lower == upper; }
  Enclosure& operator+=(const Enclosure& other) {
    lower += other.lower;
    upper += other.upper;
    return *this;
  }
  Enclosure scaled(const Rational& weight) const {
    return {lower.scaled(weight), upper.scaled(weight)};
  }
};

enum class CheckVerdict { kPass, kFail, kIndeterminate };
std::string to_string(CheckVerdict verdict);

/// pass if value <= bound, fail if value > bound, indeterminate when the
/// enclosure straddles the bound.
CheckVerdict compare_to_bound(const Enclosure& value, const Rational& bound);

/// psi evaluated at sqrt(squared), exactly.
ExtendedRational psi_at_sqrt(const PsiFunction& psi, const Rational& squared);

/// sum over atoms of w psi(d(a, b)); +inf if a positive atom sits where psi
/// is infinite.
ExtendedRational chi_hc_integral(const AtomicMeasure2D& rho, const PsiFunction& psi);

/// sum over atoms of w packing(d(a, b)), with packing(0) = n.
Rational packing_integral(const AtomicMeasure2D& rho, const FiniteMetricSpace& space);

struct PsiProfileEntry {
  Rational t;
  ExtendedRational psi;
  int packing;
  ExtendedRational ratio;  // psi(t) / packing(t)
};

struct PsiAdmissibility {
  std::vector<PsiProfileEntry> profile;  // ascending in t, positive t only
  bool ratio_grows = false;  // ratio non-increasing in t along the profile
  bool pass = false;         // ratio at the smallest positive distance > threshold
};

/// Finite proxy for psi(t)/packing(t) -> inf as t -> 0.
PsiAdmissibility psi_admissibility(const PsiFunction& psi, const FiniteMetricSpace& space,
                                   const Rational& threshold);

/// |v|^-d for a vector with squared norm `squared` > 0.
Enclosure inverse_power(const Rational& squared, int d);

struct ShellSeries {
  std::vector<Enclosure> r;  // r_n for n = 1..N (one per radius)
  Enclosure value;           // sum_{n=1}^{N-1} beta_n (r_{n+1} - r_n)
  bool infinite = false;     // some r_n is infinite
};

/// Balls are open and centred at the origin. Radii must be positive and
/// strictly increasing; beta needs at least radii.size() - 1 positive,
/// non-increasing entries (InvalidBeta otherwise).
ShellSeries shell_series(const AtomicMeasure2D& rho, const std::vector<Rational>& radii,
                         const std::vector<Rational>& beta);

struct PointAtom {
  VectorQ y;
  Rational weight;
};

/// sum over atoms with |y| < radius of w |y|^-d; +inf for a positive atom at
/// the origin.
Enclosure reduced_measure_check(const std::vector<PointAtom>& rho_bar, const Rational& radius,
                                int d);

struct SplitCheck {
  ExtendedRational integral;
  bool integral_ok = false;
  std::optional<PpRealization> realization;  // absent when the integral fails
  Verdict verdict = Verdict::kInfeasible;
};

/// Realisable by a simple process with E chi_psi <= r iff the integral of
/// psi(d) is at most r and the positivity LP is feasible. The LP is run with
/// the chi_psi objective, whose optimum equals the integral.
SplitCheck hardcore_split_check(const CorrelationTarget& target, const PsiFunction& psi,
                                const Rational& r, const PpRealizeOptions& options = {});

}  // namespace realkit

#endif  // REALKIT_REGULARITY_HPP_
