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

// Column generation over an implicitly described column family. A pricer
// supplies columns by key and searches the whole family for columns of
// negative reduced cost:
//
//   struct Pricer {
//     using Key = ...;
//     SparseVector<Scalar> column(const Key&) const;
//     Scalar cost(const Key&) const;     // objective coefficient (phase two)
//     // Columns with reduced cost < -tolerance, most negative first, where
//     // reduced cost = (phase_one ? 0 : cost) - duals . column.
//     std::vector<Priced<Key, Scalar>> price(const Vector<Scalar>& duals,
//                                            bool phase_one,
//                                            std::size_t max_columns) const;
//   };

#ifndef REALKIT_COLUMN_GENERATION_HPP_
#define REALKIT_COLUMN_GENERATION_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "realkit/simplex.hpp"

namespace realkit {

template <typename Key, typename Scalar>
struct Priced {
  Key key;
  Scalar reduced_cost;
};

/// A basis member: a column key, or the artificial variable of a row.
template <typename Key>
struct BasisEntry {
  std::optional<Key> key;
  int artificial_row = -1;
};

struct ColumnGenerationOptions {
  long max_rounds = 20000;
  std::size_t columns_per_round = 8;
  // Nonbasic columns are pruned once the pool exceeds this multiple of the
  // row count.
  std::size_t prune_factor = 4;
  long simplex_iteration_limit = 500000;
};

enum class GenerationStatus { kFeasible, kInfeasible, kIndeterminate };

template <typename Key, typename Scalar>
struct ColumnGenerationResult {
  GenerationStatus status = GenerationStatus::kIndeterminate;
  std::vector<std::pair<Key, Scalar>> solution;  // positive weights only
  Vector<Scalar> farkas;                         // phase-one duals when infeasible
  Vector<Scalar> duals;                          // final duals of the last phase
  Scalar objective{0};
  Scalar dual_objective{0};
  std::vector<BasisEntry<Key>> basis;
  long rounds = 0;
  long simplex_iterations = 0;
  std::string detail;
};

template <typename Scalar, typename Pricer, typename KeyLess = std::less<typename Pricer::Key>>
ColumnGenerationResult<typename Pricer::Key, Scalar> column_generation(
    const Vector<Scalar>& rhs, const Pricer& pricer,
    const std::vector<typename Pricer::Key>& initial_columns, bool optimize,
    const ColumnGenerationOptions& options = {},
    const std::vector<BasisEntry<typename Pricer::Key>>* warm_basis = nullptr) {
  using Key = typename Pricer::Key;
  ColumnGenerationResult<Key, Scalar> result;
  Simplex<Scalar> lp(rhs);
  lp.set_iteration_limit(options.simplex_iteration_limit);
  std::vector<Key> keys;
  std::map<Key, int, KeyLess> index;

  auto add = [&](const Key& key) -> bool {
    if (index.count(key) != 0) return false;
    index.emplace(key, lp.add_column(pricer.column(key), pricer.cost(key)));
    keys.push_back(key);
    return true;
  };
  for (const Key& key : initial_columns) add(key);

  if (warm_basis != nullptr) {
    for (const auto& entry : *warm_basis)
      if (entry.key) add(*entry.key);
    std::vector<int> basis;
    for (const auto& entry : *warm_basis)
      basis.push_back(entry.key ? index.at(*entry.key)
                                : Simplex<Scalar>::artificial(entry.artificial_row));
    lp.warm_start(basis);
  }

  auto prune = [&] {
    if (keys.size() <= options.prune_factor * static_cast<std::size_t>(lp.rows())) return;
    const std::vector<Scalar> x = lp.primal();
    std::vector<bool> drop(keys.size(), false);
    for (std::size_t j = 0; j < keys.size(); ++j)
      drop[j] = !lp.is_basic(static_cast<int>(j)) && !(x[j] > Scalar(0));
    const std::vector<int> remap = lp.remove_columns(drop);
    std::vector<Key> kept;
    index.clear();
    for (std::size_t j = 0; j < keys.size(); ++j)
      if (remap[j] >= 0) {
        index.emplace(keys[j], remap[j]);
        kept.push_back(keys[j]);
      }
    keys = std::move(kept);
  };

  auto capture_basis = [&] {
    result.basis.clear();
    for (int var : lp.basis()) {
      BasisEntry<Key> entry;
      if (Simplex<Scalar>::is_artificial(var))
        entry.artificial_row = -var - 1;
      else
        entry.key = keys[static_cast<std::size_t>(var)];
      result.basis.push_back(entry);
    }
  };

  bool phase_one = true;
  for (result.rounds = 0; result.rounds < options.max_rounds; ++result.rounds) {
    const LpStatus status = phase_one ? lp.phase1() : lp.phase2();
    if (status != LpStatus::kOptimal) {
      result.detail = status == LpStatus::kUnbounded ? "master LP unbounded"
                                                     : "simplex iteration limit reached";
      result.simplex_iterations = lp.iterations();
      return result;
    }
    if (phase_one && lp.feasible()) {
      if (!optimize) break;
      phase_one = false;
      continue;
    }
    const Vector<Scalar> y = lp.duals();
    bool added = false;
    for (const auto& priced : pricer.price(y, phase_one, options.columns_per_round))
      added = add(priced.key) || added;
    if (!added) {
      if (phase_one) {
        result.status = GenerationStatus::kInfeasible;
        result.farkas = y;
        result.duals = y;
        result.objective = lp.infeasibility();
        result.dual_objective = y.dot(rhs);
        result.simplex_iterations = lp.iterations();
        capture_basis();
        return result;
      }
      break;
    }
    prune();
  }
  result.simplex_iterations = lp.iterations();
  if (result.rounds >= options.max_rounds) {
    result.detail = "column generation did not converge";
    return result;
  }
  result.status = GenerationStatus::kFeasible;
  const std::vector<Scalar> x = lp.primal();
  for (std::size_t j = 0; j < keys.size(); ++j)
    if (x[j] > Scalar(0)) result.solution.emplace_back(keys[j], x[j]);
  result.duals = lp.duals();
  result.objective = optimize ? lp.objective() : Scalar(0);
  result.dual_objective = optimize ? Scalar(result.duals.dot(rhs)) : Scalar(0);
  capture_basis();
  return result;
}

/// Basis of an infeasible or feasible run, for warm-starting a re-solve in
/// another scalar type.
template <typename Key>
using WarmBasis = std::vector<BasisEntry<Key>>;

}  // namespace realkit

#endif  // REALKIT_COLUMN_GENERATION_HPP_
