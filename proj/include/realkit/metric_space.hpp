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

// Finite metric spaces, counting-measure configurations on them, packing
// numbers and the close-pair combinatorics used to bound regularity moduli.

#ifndef REALKIT_METRIC_SPACE_HPP_
#define REALKIT_METRIC_SPACE_HPP_

#include <string>
#include <vector>

#include "realkit/rational.hpp"

namespace realkit {

struct MetricViolation {
  enum class Kind { kSymmetry, kDiagonal, kPositivity, kTriangle };
  Kind kind;
  int i = 0;
  int j = 0;
  int k = -1;  // only for kTriangle: d(i,k) > d(i,j) + d(j,k)

  std::string describe() const;
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the metric axioms on a labeled distance matrix. The triangle
/// inequality is checked with an absolute slack of 1e-12. Throws
/// InvalidInstance if the matrix shape does not match the label count.
MetricReport validate_metric(const std::vector<std::string>& labels, const MatrixQ& dist);

class FiniteMetricSpace {
 public:
  /// Throws InvalidInstance unless validate_metric passes.
  FiniteMetricSpace(std::vector<std::string> labels, MatrixQ dist);

  /// n points at mutual distance one, labeled "0".."n-1".
  static FiniteMetricSpace discrete(int n);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const MatrixQ& distances() const { return dist_; }
  const Rational& distance(int i, int j) const { return dist_(i, j); }

  /// Sorted distinct off-diagonal distances.
  std::vector<Rational> distinct_distances() const;

  /// Index of a label, or -1.
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  MatrixQ dist_;
};

/// A finite counting measure on the points of a space: multiplicity[i] is
/// the number of particles located at point i.
struct Configuration {
  std::vector<int> multiplicity;

  Configuration() = default;
  explicit Configuration(std::vector<int> m) : multiplicity(std::move(m)) {}
  static Configuration empty(int n) { return Configuration(std::vector<int>(n, 0)); }

  int size() const { return static_cast<int>(multiplicity.size()); }
  int operator[](int i) const { return multiplicity[static_cast<std::size_t>(i)]; }
  int total_mass() const;
  bool is_simple() const;
  std::vector<int> support() const;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

/// Maximum number of points with pairwise distances strictly exceeding t.
/// packing_number(space, 0) == space.size().
int packing_number(const FiniteMetricSpace& space, const Rational& t);

/// A maximum t-packing (sorted point indices) found by the same search.
std::vector<int> maximum_packing(const FiniteMetricSpace& space, const Rational& t);

/// Number of ordered particle pairs (p, p'), p != p', at distance <= t.
/// Co-located particles are at distance 0.
long close_pair_count(const FiniteMetricSpace& space, const Configuration& config,
                      const Rational& t);

inline constexpr int kDefaultGammaMassCap = 8;

/// Minimum of close_pair_count over all configurations of total mass n.
/// Throws CapExceeded when n > mass_cap.
long gamma_min_pairs(const FiniteMetricSpace& space, int n, const Rational& t,
                     int mass_cap = kDefaultGammaMassCap);

struct LemmaBounds {
  Rational lower;  // n (n / packing - 1); may be negative
  Rational upper;  // n (n / packing + 1)
};

LemmaBounds lemma_bounds(int n, int packing);
LemmaBounds lemma_bounds(const FiniteMetricSpace& space, int n, const Rational& t);

/// Total mass n spread over a maximum t-packing with masses floor(n/q) or
/// ceil(n/q); its close-pair count is at most lemma_bounds(...).upper.
Configuration spread_mass(const FiniteMetricSpace& space, int n, const Rational& t);

struct TransferStep {
  int donor;
  int recipient;
  long pairs_before;
  long pairs_after;
};

struct MassTransferResult {
  Configuration final;
  std::vector<TransferStep> trace;
};

/// Merges close support points by moving unit masses toward the point with
/// the smaller neighbourhood count until the support is t-separated. The
/// close-pair count never increases along the trace.
MassTransferResult mass_transfer_reduce(const FiniteMetricSpace& space, Configuration config,
                                        const Rational& t);

}  // namespace realkit

#endif  // REALKIT_METRIC_SPACE_HPP_
