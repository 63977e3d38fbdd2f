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

// Exact minimisation of quadratic set functionals
//
//   g(F) = c + sum_{i <= j} a_ij 1{i in F and j in F},   F subset of {0..n-1},
//
// over all 2^n subsets. Only the upper triangle of `a` is read. Ties are
// broken toward the lexicographically smallest subset, comparing subsets as
// sorted index lists (so {} < {0} < {0,1} < {1}).

#ifndef REALKIT_QUBO_HPP_
#define REALKIT_QUBO_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "realkit/errors.hpp"
#include "realkit/parallel.hpp"
#include "realkit/rational.hpp"

namespace realkit {

inline constexpr int kMaxSubsetPoints = 30;
inline constexpr int kQuboEnumerationLimit = 20;

/// A subset of at most 32 point indices.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint32_t bits) : bits_(bits) {}
  static Subset of(const std::vector<int>& indices) {
    std::uint32_t bits = 0;
    for (int i : indices) bits |= std::uint32_t{1} << i;
    return Subset(bits);
  }
  static Subset full(int n) {
    return Subset(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1U; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  std::vector<int> indices() const {
    std::vector<int> result;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) result.push_back(std::countr_zero(b));
    return result;
  }

  friend constexpr bool operator==(Subset a, Subset b) { return a.bits_ == b.bits_; }

 private:
  std::uint32_t bits_ = 0;
};

/// Lexicographic order on sorted index lists.
inline bool lex_less(Subset a, Subset b) {
  const std::uint32_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  const int k = std::countr_zero(diff);
  const std::uint32_t above = k >= 31 ? 0 : ~((std::uint32_t{2} << k) - 1);
  if (a.contains(k)) return (b.bits() & above) != 0;
  return (a.bits() & above) == 0;
}

struct SubsetLexLess {
  bool operator()(Subset a, Subset b) const { return lex_less(a, b); }
};

template <typename Scalar>
Scalar evaluate_g(const Scalar& c, const Matrix<Scalar>& a, Subset subset) {
  Scalar value = c;
  const std::vector<int> members = subset.indices();
  for (std::size_t p = 0; p < members.size(); ++p)
    for (std::size_t q = p; q < members.size(); ++q) value += a(members[p], members[q]);
  return value;
}

template <typename Scalar>
struct QuboResult {
  Subset minimizer;
  Scalar value;
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> symmetric_from_upper(const Matrix<Scalar>& a) {
  const auto n = a.rows();
  Matrix<Scalar> sym(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sym(i, j) = i <= j ? a(i, j) : a(j, i);
  return sym;
}

template <typename Scalar>
void check_qubo_shape(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw InvalidInstance("quadratic coefficient matrix must be square");
}

// Keeps the k best (value, subset) pairs, best first.
template <typename Scalar>
class BestSubsets {
 public:
  explicit BestSubsets(std::size_t capacity) : capacity_(capacity) {}

  bool better(const Scalar& v, Subset s, const QuboResult<Scalar>& other) const {
    return v < other.value || (v == other.value && lex_less(s, other.minimizer));
  }
  bool admits(const Scalar& v, Subset s) const {
    return items_.size() < capacity_ || better(v, s, items_.back());
  }
  void offer(const Scalar& v, Subset s) {
    if (!admits(v, s)) return;
    auto pos = std::find_if(items_.begin(), items_.end(),
                            [&](const QuboResult<Scalar>& item) { return better(v, s, item); });
    items_.insert(pos, QuboResult<Scalar>{s, v});
    if (items_.size() > capacity_) items_.pop_back();
  }
  void merge(const BestSubsets& other) {
    for (const auto& item : other.items_) offer(item.value, item.minimizer);
  }
  const std::vector<QuboResult<Scalar>>& items() const { return items_; }

 private:
  std::size_t capacity_;
  std::vector<QuboResult<Scalar>> items_;
};

// Gray-code walk over the low `free_bits` bits with the high bits fixed to
// `prefix`. The walk keeps, for every i, field_i = sum_{j in F, j != i} a_ij,
// so each step costs O(n).
template <typename Scalar>
void enumerate_block(const Scalar& c, const Matrix<Scalar>& sym, int free_bits,
                     std::uint32_t prefix, BestSubsets<Scalar>& best) {
  const int n = static_cast<int>(sym.rows());
  std::uint32_t bits = prefix;
  Vector<Scalar> field = Vector<Scalar>::Zero(n);
  Scalar value = c;
  for (int i = 0; i < n; ++i) {
    if (!((bits >> i) & 1U)) continue;
    value += sym(i, i) + field(i);
    for (int j = 0; j < n; ++j)
      if (j != i) field(j) += sym(j, i);
  }
  best.offer(value, Subset(bits));
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < steps; ++step) {
    const int i = std::countr_zero(step);
    const std::uint32_t mask = std::uint32_t{1} << i;
    if (bits & mask) {
      bits &= ~mask;
      value -= sym(i, i) + field(i);
      for (int j = 0; j < n; ++j)
        if (j != i) field(j) -= sym(j, i);
    } else {
      value += sym(i, i) + field(i);
      bits |= mask;
      for (int j = 0; j < n; ++j)
        if (j != i) field(j) += sym(j, i);
    }
    if (best.admits(value, Subset(bits))) best.offer(value, Subset(bits));
  }
}

}  // namespace detail

/// The `count` smallest values of g over all subsets, best first, by
/// exhaustive Gray-code enumeration (split into blocks across worker threads).
template <typename Scalar>
std::vector<QuboResult<Scalar>> qubo_lowest_enumerate(const Scalar& c, const Matrix<Scalar>& a,
                                                      std::size_t count) {
  detail::check_qubo_shape(a);
  const int n = static_cast<int>(a.rows());
  if (n > kMaxSubsetPoints)
    throw CapExceeded("subset enumeration supports at most " +
                      std::to_string(kMaxSubsetPoints) + " points");
  const Matrix<Scalar> sym = detail::symmetric_from_upper(a);
  const int split_bits = n >= 14 ? std::min(6, n - 10) : 0;
  const int blocks = 1 << split_bits;
  std::vector<detail::BestSubsets<Scalar>> partial(static_cast<std::size_t>(blocks),
                                                   detail::BestSubsets<Scalar>(count));
  parallel_for(blocks, [&](int block) {
    const std::uint32_t prefix = static_cast<std::uint32_t>(block) << (n - split_bits);
    detail::enumerate_block(c, sym, n - split_bits, prefix,
                            partial[static_cast<std::size_t>(block)]);
  });
  detail::BestSubsets<Scalar> merged(count);
  for (const auto& part : partial) merged.merge(part);
  return merged.items();
}

template <typename Scalar>
QuboResult<Scalar> qubo_min_enumerate(const Scalar& c, const Matrix<Scalar>& a) {
  return qubo_lowest_enumerate(c, a, 1).front();
}

/// Depth-first search over subsets in lexicographic pre-order, pruning a
/// subtree when a lower bound on every subset in it is no better than the
/// incumbent. Pre-order visits subsets in lexicographic order, so the first
/// strict improvement that survives is the tie-broken optimum.
template <typename Scalar>
QuboResult<Scalar> qubo_min_branch_and_bound(const Scalar& c, const Matrix<Scalar>& a) {
  detail::check_qubo_shape(a);
  const int n = static_cast<int>(a.rows());
  if (n > kMaxSubsetPoints)
    throw CapExceeded("branch and bound supports at most " + std::to_string(kMaxSubsetPoints) +
                      " points");
  const Matrix<Scalar> sym = detail::symmetric_from_upper(a);
  // negative_tail(i) = sum_{k > i} min(0, a_ik)
  Vector<Scalar> negative_tail = Vector<Scalar>::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      if (sym(i, k) < 0) negative_tail(i) += sym(i, k);

  QuboResult<Scalar> best{Subset(), c};
  Vector<Scalar> field = Vector<Scalar>::Zero(n);

  auto search = [&](auto&& self, std::uint32_t bits, int last, const Scalar& value) -> void {
    for (int j = last + 1; j < n; ++j) {
      const Scalar child_value = value + sym(j, j) + field(j);
      for (int k = j + 1; k < n; ++k) field(k) += sym(k, j);
      Scalar bound = child_value;
      for (int k = j + 1; k < n; ++k) {
        Scalar gain = sym(k, k) + field(k) + negative_tail(k);
        if (gain < 0) bound += gain;
      }
      if (bound < best.value) {
        const std::uint32_t child_bits = bits | (std::uint32_t{1} << j);
        if (child_value < best.value) best = {Subset(child_bits), child_value};
        self(self, child_bits, j, child_value);
      }
      for (int k = j + 1; k < n; ++k) field(k) -= sym(k, j);
    }
  };
  search(search, 0U, -1, c);
  return best;
}

/// Global minimum: enumeration up to 20 points, branch and bound up to 30.
template <typename Scalar>
QuboResult<Scalar> qubo_min(const Scalar& c, const Matrix<Scalar>& a) {
  detail::check_qubo_shape(a);
  const int n = static_cast<int>(a.rows());
  if (n > kMaxSubsetPoints)
    throw CapExceeded("qubo_min: " + std::to_string(n) + " points exceeds the exact cap of " +
                      std::to_string(kMaxSubsetPoints));
  if (n <= kQuboEnumerationLimit) return qubo_min_enumerate(c, a);
  return qubo_min_branch_and_bound(c, a);
}

}  // namespace realkit

#endif  // REALKIT_QUBO_HPP_
