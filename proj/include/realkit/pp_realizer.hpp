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

// Realisability of a correlation measure rho on X x X (and optionally an
// intensity rho1) by a point process on a finite metric space whose
// configurations have total mass at most `cap`.
//
// A configuration m contributes m_i m_j ordered particle pairs to (i, j),
// i != j, and m_i (m_i - 1) to (i, i). The target is realisable iff some
// probability vector q over admissible configurations satisfies
//
//   sum_m q_m pairs_ij(m) = rho_ij  for every (i, j),
//   sum_m q_m m_i        = rho1_i   when an intensity is given.
//
// Infeasibility is certified by (c, a, b) with
// g(m) = c + sum_{i<j} a_ij m_i m_j + sum_i a_ii m_i (m_i - 1) + sum_i b_i m_i
// non-negative on every admissible configuration and negative in expectation
// under the target.

#ifndef REALKIT_PP_REALIZER_HPP_
#define REALKIT_PP_REALIZER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "realkit/column_generation.hpp"
#include "realkit/config_search.hpp"
#include "realkit/metric_space.hpp"
#include "realkit/psi.hpp"
#include "realkit/set_realizer.hpp"

namespace realkit {

struct CorrelationAtom {
  int i;
  int j;
  Rational weight;
};

class CorrelationTarget {
 public:
  /// Atoms are symmetrised: (i, j, w) sets rho(i, j) = rho(j, i) = w.
  /// Repeating a pair in either order with a different weight, negative
  /// weights, out-of-range indices, a negative cap or a non-positive hard
  /// core all throw InvalidInstance.
  CorrelationTarget(FiniteMetricSpace space, const std::vector<CorrelationAtom>& atoms,
                    std::optional<VectorQ> rho1, int cap, bool simple,
                    std::optional<Rational> hardcore_eps = std::nullopt,
                    bool strict_hardcore = false);

  const FiniteMetricSpace& space() const { return space_; }
  int size() const { return space_.size(); }
  const MatrixQ& rho() const { return rho_; }
  const std::optional<VectorQ>& rho1() const { return rho1_; }
  int cap() const { return cap_; }
  bool simple() const { return simple_; }
  const std::optional<Rational>& hardcore_eps() const { return hardcore_eps_; }
  bool strict_hardcore() const { return strict_hardcore_; }

  /// Positive-weight ordered pairs (i <= j), row-major.
  std::vector<CorrelationAtom> atoms() const;

  /// Whether two particles at points i and j (possibly i == j) may coexist
  /// under the hard-core rule: d >= eps, or d > eps when strict.
  bool hardcore_allows(int i, int j) const;

  /// The admissible-configuration search space with zero objective.
  ConfigProblem<Rational> admissible_region() const;

 private:
  FiniteMetricSpace space_;
  MatrixQ rho_;
  std::optional<VectorQ> rho1_;
  int cap_;
  bool simple_;
  std::optional<Rational> hardcore_eps_;
  bool strict_hardcore_;
};

struct ConfigAtom {
  Configuration config;
  Rational weight;
};

struct ConfigMixture {
  std::vector<ConfigAtom> atoms;

  Rational total_weight() const;
  /// Merges repeated configurations, drops zero weights, sorts.
  void canonicalize();
};

/// sum_{i != j} m_i m_j h(i, j) + sum_i m_i (m_i - 1) h(i, i)
template <typename Scalar>
Scalar g_h_eval(const Configuration& config, const Matrix<Scalar>& h) {
  Scalar value(0);
  for (int i = 0; i < config.size(); ++i) {
    if (config[i] == 0) continue;
    value += Scalar(config[i] * (config[i] - 1)) * h(i, i);
    for (int j = 0; j < config.size(); ++j)
      if (j != i && config[j] != 0) value += Scalar(config[i] * config[j]) * h(i, j);
  }
  return value;
}

struct HardcoreSupport {
  bool ok = true;
  std::vector<CorrelationAtom> offending;  // i <= j
};

/// Positive-weight atoms closer than eps (or at most eps when strict).
HardcoreSupport check_hardcore_support(const CorrelationTarget& target, const Rational& eps,
                                       bool strict = false);

inline constexpr std::size_t kDefaultConfigLimit = 2000000;

/// All admissible multiplicity vectors: total mass <= cap, m_i <= 1 when
/// simple, occupied points pairwise at distance >= eps (> eps when strict)
/// and no co-location under a hard core. Ordered by total mass, then
/// lexicographically descending. Throws CapExceeded beyond `limit` vectors.
std::vector<Configuration> enumerate_configs(const FiniteMetricSpace& space, int cap, bool simple,
                                             std::optional<Rational> hardcore_eps,
                                             bool strict_hardcore = false,
                                             std::size_t limit = kDefaultConfigLimit);

struct PpObjective {
  enum class Kind { kNone, kCardinalityPower, kChiHardcore };
  Kind kind = Kind::kNone;
  int alpha = 2;                  // kCardinalityPower: chi(m) = N^alpha, alpha in 2..4
  std::optional<PsiFunction> psi;  // kChiHardcore: chi(m) = sum over ordered pairs psi(d)

  static PpObjective none() { return {}; }
  static PpObjective cardinality_power(int alpha);
  static PpObjective chi_hardcore(PsiFunction psi);
};

/// chi(m) for the objective; +inf when a pair sits where psi is infinite.
ExtendedRational objective_value(const PpObjective& objective, const FiniteMetricSpace& space,
                                 const Configuration& config);

struct PpRealizeOptions {
  int max_exact = 15;  // exact rational re-solve up to this many points
  double tolerance = 1e-9;
  ColumnGenerationOptions generation;
};

struct PpRealization {
  Verdict verdict = Verdict::kIndeterminate;
  std::optional<ConfigMixture> mixture;
  std::optional<InfeasibilityCertificate> certificate;
  std::optional<ExtendedRational> objective;  // E chi under the returned mixture
  std::optional<Rational> dual_objective;     // optimal dual value, when finite
  Rational residual{0};
  std::string method;  // "screen", "hardcore-support", "exact", "column-generation"
  std::string note;
  long rounds = 0;
};

PpRealization realize_pp(const CorrelationTarget& target,
                         const PpObjective& objective = PpObjective::none(),
                         const PpRealizeOptions& options = {});

struct PpMoments {
  MatrixQ rho;
  VectorQ rho1;
};

PpMoments pp_moments(const ConfigMixture& mixture, int n);

/// Exact re-verification of a point-process certificate over all admissible
/// configurations of the target.
CertificateCheck verify_pp_certificate(const CorrelationTarget& target,
                                       const InfeasibilityCertificate& certificate);

/// Scales (a, b) to max entry 1 and sets c to minus the exact minimum of
/// the induced functional over admissible configurations.
InfeasibilityCertificate normalize_pp_certificate(const CorrelationTarget& target, MatrixQ a,
                                                  VectorQ b);

struct PositivityViolation {
  int trial;
  MatrixQ h;
  Rational phi;      // sum_{i,j} rho_ij h_ij
  Rational infimum;  // min over admissible configurations of g_h
  Configuration argmin;
};

struct PositivityReport {
  int trials = 0;
  std::vector<PositivityViolation> violations;
};

/// Samples symmetric h with entries uniform in [-1, 1] (seeded mt19937_64,
/// entries converted exactly from doubles) and compares Phi(g_h) with the
/// exact infimum of g_h over admissible configurations.
PositivityReport positivity_screen(const CorrelationTarget& target, int trials,
                                   std::uint64_t seed);

/// The same comparison for one given symmetric h.
std::optional<PositivityViolation> positivity_check(const CorrelationTarget& target,
                                                    const MatrixQ& h);

}  // namespace realkit

#endif  // REALKIT_PP_REALIZER_HPP_
