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

// Realisability of two-point covering probabilities p_ij = P{i, j in X} by a
// random subset X of a finite carrier.
//
// The data are realisable iff the linear program
//
//   q >= 0,  sum_F q_F = 1,  sum_F q_F 1{i, j in F} = p_ij  (i <= j)
//
// is feasible. Its Farkas alternative is a pair (c, a) with
// c + sum_{i<=j} a_ij 1{i,j in F} >= 0 for every subset F while
// c + sum_{i<=j} a_ij p_ij < 0, which is returned as the certificate.

#ifndef REALKIT_SET_REALIZER_HPP_
#define REALKIT_SET_REALIZER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "realkit/column_generation.hpp"
#include "realkit/qubo.hpp"
#include "realkit/rational.hpp"

namespace realkit {

struct FrechetViolation {
  int i;
  int j;
  bool upper;  // p_ij > min(p_i, p_j); otherwise p_ij < p_i + p_j - 1
};

/// Symmetric matrix of two-point covering probabilities; the diagonal holds
/// the one-point probabilities.
class TwoPointTarget {
 public:
  /// Throws InvalidInstance (naming the offending entry) unless `p` is
  /// square, symmetric and has entries in [0, 1].
  explicit TwoPointTarget(MatrixQ p);

  int size() const { return static_cast<int>(p_.rows()); }
  const MatrixQ& p() const { return p_; }
  const Rational& operator()(int i, int j) const { return p_(i, j); }

  std::vector<FrechetViolation> frechet_violations() const;

  /// Target with points relabeled: result(perm[i], perm[j]) = p(i, j).
  TwoPointTarget permuted(const std::vector<int>& perm) const;

 private:
  MatrixQ p_;
};

struct SubsetAtom {
  Subset subset;
  Rational weight;
};

/// Finitely supported law of a random subset of {0, ..., points-1}.
struct SubsetMixture {
  int points = 0;
  std::vector<SubsetAtom> atoms;

  Rational total_weight() const;
  /// Merges repeated subsets, drops zero weights, sorts lexicographically.
  void canonicalize();
};

/// Certificate of non-realisability. For two-point targets `b` is empty and
/// `minimizer` is a 0/1 indicator; point-process certificates also use the
/// linear part `b` and general multiplicities.
struct InfeasibilityCertificate {
  Rational c;
  MatrixQ a;  // symmetric; only the upper triangle enters the functional
  VectorQ b;
  Rational gap;                // -(c + <a, target>) > 0
  std::vector<int> minimizer;  // attains the minimum 0 of the functional
};

enum class Verdict { kFeasible, kInfeasible, kIndeterminate };

std::string to_string(Verdict verdict);

struct SetRealizeOptions {
  int max_exact = 15;  // exact rational mode up to this many points
  double tolerance = 1e-9;
  bool frechet_screen = true;
  ColumnGenerationOptions generation;
};

struct SetRealization {
  Verdict verdict = Verdict::kIndeterminate;
  std::optional<SubsetMixture> mixture;
  std::optional<InfeasibilityCertificate> certificate;
  Rational residual{0};  // max |moment - target| of the returned mixture
  std::optional<Rational> gap;
  std::string method;  // "trivial", "frechet", "exact", "column-generation"
  std::string note;
  long rounds = 0;
};

/// c + sum_{i <= j} a_ij 1{i in F and j in F}
Rational evaluate_g(const Rational& c, const MatrixQ& a, Subset subset);

SetRealization realize_subsets(const TwoPointTarget& target, const SetRealizeOptions& options = {});

/// p_hat_ij = sum_F q_F 1{i, j in F}
TwoPointTarget moments_of_mixture(const SubsetMixture& mixture);

using Permutation = std::vector<int>;

/// Throws InvalidGroup unless `group` is a set of permutations of
/// {0..n-1} closed under composition and inverses.
void validate_group(const std::vector<Permutation>& group, int n);

bool is_invariant(const TwoPointTarget& target, const std::vector<Permutation>& group);

/// Orbit average (1/|G|) sum_g g.mixture, where g.F = {g[i] : i in F}.
SubsetMixture symmetrize(const SubsetMixture& mixture, const std::vector<Permutation>& group);

/// Independent coordinates with P{i in X} = p[i]. Throws CapExceeded above
/// 15 points (the support has 2^n subsets).
SubsetMixture product_form_mixture(const std::vector<Rational>& p);

struct CertificateCheck {
  bool sound = false;       // min over subsets >= 0 and pairing < 0
  bool normalized = false;  // stored c, gap, minimizer and scale agree with recomputation
  Rational minimum{0};
  std::vector<int> argmin;
  Rational pairing{0};  // c + <a, target>
  std::vector<std::string> problems;
  bool valid() const { return sound && normalized; }
};

/// Independent exact re-verification: re-minimises the functional over all
/// 2^n subsets and recomputes the pairing with the target.
CertificateCheck verify_set_certificate(const TwoPointTarget& target,
                                        const InfeasibilityCertificate& certificate);

/// Scales `a` to max |a_ij| = 1 and re-derives c as minus the exact minimum
/// of the quadratic part, then fills gap and minimizer.
InfeasibilityCertificate normalize_set_certificate(const TwoPointTarget& target, MatrixQ a);

}  // namespace realkit

#endif  // REALKIT_SET_REALIZER_HPP_
