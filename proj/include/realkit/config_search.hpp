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

// Exact minimisation over multiplicity vectors m of
//
//   f(m) = constant + sum_i linear_i m_i + sum_{i<j} pair_ij m_i m_j
//          + sum_i diagonal_i m_i (m_i - 1) + mass_cost[sum_i m_i]
//
// subject to sum_i m_i <= cap, m_i <= max_multiplicity_i and no two
// occupied points forming a forbidden pair. Ties go to the
// lexicographically smallest vector.

#ifndef REALKIT_CONFIG_SEARCH_HPP_
#define REALKIT_CONFIG_SEARCH_HPP_

#include <algorithm>
#include <vector>

#include "realkit/errors.hpp"
#include "realkit/metric_space.hpp"
#include "realkit/rational.hpp"

namespace realkit {

template <typename Scalar>
struct ConfigProblem {
  int cap = 0;
  Scalar constant{0};
  Vector<Scalar> linear;
  Matrix<Scalar> pair;      // upper triangle read
  Vector<Scalar> diagonal;  // coefficient of m_i (m_i - 1)
  std::vector<Scalar> mass_cost;  // indexed by total mass; empty means zero
  std::vector<int> max_multiplicity;
  std::vector<std::vector<bool>> forbidden;  // symmetric, i != j; empty means none

  /// Zero objective over all vectors of total mass at most cap.
  static ConfigProblem zero(int n, int cap) {
    ConfigProblem p;
    p.cap = cap;
    p.linear = Vector<Scalar>::Zero(n);
    p.pair = Matrix<Scalar>::Zero(n, n);
    p.diagonal = Vector<Scalar>::Zero(n);
    p.max_multiplicity.assign(static_cast<std::size_t>(n), cap);
    return p;
  }

  int size() const { return static_cast<int>(linear.size()); }

  bool forbids(int i, int j) const {
    return !forbidden.empty() && forbidden[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  bool admissible(const Configuration& m) const {
    if (m.total_mass() > cap) return false;
    for (int i = 0; i < size(); ++i) {
      if (m[i] < 0 || m[i] > max_multiplicity[static_cast<std::size_t>(i)]) return false;
      if (m[i] == 0) continue;
      for (int j = i + 1; j < size(); ++j)
        if (m[j] > 0 && forbids(i, j)) return false;
    }
    return true;
  }

  Scalar evaluate(const Configuration& m) const {
    Scalar value = constant;
    for (int i = 0; i < size(); ++i) {
      if (m[i] == 0) continue;
      value += linear(i) * Scalar(m[i]) + diagonal(i) * Scalar(m[i] * (m[i] - 1));
      for (int j = i + 1; j < size(); ++j)
        if (m[j] != 0) value += pair(i, j) * Scalar(m[i] * m[j]);
    }
    if (!mass_cost.empty()) value += mass_cost[static_cast<std::size_t>(m.total_mass())];
    return value;
  }
};

template <typename Scalar>
struct ConfigMinResult {
  Configuration minimizer;
  Scalar value;
};

/// The `count` smallest admissible values, best first, by depth-first
/// branch and bound over m_0, m_1, ... with each m_i tried in increasing
/// order, so admissible vectors are visited lexicographically. Subtrees whose
/// lower bound cannot beat the current k-th best are pruned. The bound sums,
/// over unassigned points, the best single-point contribution given the
/// assigned ones, plus all negative pair terms among unassigned points at
/// their largest multiplicities.
template <typename Scalar>
std::vector<ConfigMinResult<Scalar>> config_lowest(const ConfigProblem<Scalar>& problem,
                                                   std::size_t count) {
  const int n = problem.size();
  if (problem.cap < 0) throw InvalidInstance("negative cardinality cap");
  std::vector<int> upper(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    upper[static_cast<std::size_t>(i)] =
        std::min(problem.max_multiplicity[static_cast<std::size_t>(i)], problem.cap);
  Matrix<Scalar> sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = i < j ? problem.pair(i, j) : problem.pair(j, i);
  // negative_tail(k) = sum_{l >= k, l' > l} min(0, pair) U_l U_l'
  std::vector<Scalar> negative_tail(static_cast<std::size_t>(n) + 1, Scalar(0));
  for (int k = n - 1; k >= 0; --k) {
    Scalar row(0);
    for (int l = k + 1; l < n; ++l)
      if (sym(k, l) < 0)
        row += sym(k, l) * Scalar(upper[static_cast<std::size_t>(k)] * upper[static_cast<std::size_t>(l)]);
    negative_tail[static_cast<std::size_t>(k)] = negative_tail[static_cast<std::size_t>(k) + 1] + row;
  }
  // Smallest mass cost over totals >= N.
  std::vector<Scalar> mass_floor(static_cast<std::size_t>(problem.cap) + 2, Scalar(0));
  if (!problem.mass_cost.empty()) {
    mass_floor[static_cast<std::size_t>(problem.cap)] =
        problem.mass_cost[static_cast<std::size_t>(problem.cap)];
    for (int N = problem.cap - 1; N >= 0; --N)
      mass_floor[static_cast<std::size_t>(N)] =
          std::min(mass_floor[static_cast<std::size_t>(N) + 1],
                   problem.mass_cost[static_cast<std::size_t>(N)]);
  }

  std::vector<ConfigMinResult<Scalar>> best;
  auto full = [&] { return best.size() >= count; };
  auto offer = [&](const std::vector<int>& m, const Scalar& value) {
    if (full() && !(value < best.back().value)) return;
    // Later vectors are lexicographically larger, so equal values go after.
    auto pos = std::find_if(best.begin(), best.end(),
                            [&](const ConfigMinResult<Scalar>& r) { return value < r.value; });
    best.insert(pos, ConfigMinResult<Scalar>{Configuration(m), value});
    if (best.size() > count) best.pop_back();
  };

  std::vector<int> m(static_cast<std::size_t>(n), 0);
  Vector<Scalar> field = Vector<Scalar>::Zero(n);  // sum over assigned i of pair(i,k) m_i

  auto lower_bound = [&](int depth, int mass, const Scalar& value) {
    Scalar bound = value + negative_tail[static_cast<std::size_t>(depth)];
    const int room = problem.cap - mass;
    for (int k = depth; k < n; ++k) {
      Scalar best_k(0);
      const int top = std::min(upper[static_cast<std::size_t>(k)], room);
      for (int v = 1; v <= top; ++v) {
        Scalar term = (problem.linear(k) + field(k)) * Scalar(v) + problem.diagonal(k) * Scalar(v * (v - 1));
        if (term < best_k) best_k = term;
      }
      bound += best_k;
    }
    if (!problem.mass_cost.empty()) bound += mass_floor[static_cast<std::size_t>(mass)];
    return bound;
  };

  auto search = [&](auto&& self, int depth, int mass, const Scalar& value) -> void {
    if (depth == n) {
      Scalar total = value;
      if (!problem.mass_cost.empty()) total += problem.mass_cost[static_cast<std::size_t>(mass)];
      offer(m, total);
      return;
    }
    if (full() && !(lower_bound(depth, mass, value) < best.back().value)) return;
    const int top = std::min(upper[static_cast<std::size_t>(depth)], problem.cap - mass);
    bool blocked = false;
    for (int i = 0; i < depth && !blocked; ++i)
      blocked = m[static_cast<std::size_t>(i)] > 0 && problem.forbids(i, depth);
    for (int v = 0; v <= (blocked ? 0 : top); ++v) {
      Scalar next = value;
      if (v > 0) {
        next += (problem.linear(depth) + field(depth)) * Scalar(v) +
                problem.diagonal(depth) * Scalar(v * (v - 1));
        for (int k = depth + 1; k < n; ++k) field(k) += sym(depth, k) * Scalar(v);
      }
      m[static_cast<std::size_t>(depth)] = v;
      self(self, depth + 1, mass + v, next);
      if (v > 0)
        for (int k = depth + 1; k < n; ++k) field(k) -= sym(depth, k) * Scalar(v);
    }
    m[static_cast<std::size_t>(depth)] = 0;
  };
  search(search, 0, 0, problem.constant);
  return best;
}

template <typename Scalar>
ConfigMinResult<Scalar> config_min(const ConfigProblem<Scalar>& problem) {
  return config_lowest(problem, 1).front();
}

}  // namespace realkit

#endif  // REALKIT_CONFIG_SEARCH_HPP_
