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

// Revised primal simplex for
//
//   min c^T x  subject to  A x = b,  x >= 0,  b >= 0,
//
// with columns appended incrementally (column generation). Phase one adds
// one artificial variable per row. The basis inverse is kept explicitly and
// updated in product form; with Scalar = Rational every step is exact and
// the tolerances are zero.

#ifndef REALKIT_SIMPLEX_HPP_
#define REALKIT_SIMPLEX_HPP_

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "realkit/rational.hpp"

namespace realkit {

enum class LpStatus { kOptimal, kUnbounded, kIterationLimit };

template <typename Scalar>
class Simplex {
 public:
  using Traits = ScalarTraits<Scalar>;

  /// Basis entries: j >= 0 is structural column j, -(r + 1) is the
  /// artificial variable of row r.
  static int artificial(int row) { return -(row + 1); }
  static bool is_artificial(int var) { return var < 0; }

  explicit Simplex(Vector<Scalar> rhs) : rhs_(std::move(rhs)) {
    for (Eigen::Index r = 0; r < rhs_.size(); ++r)
      if (rhs_(r) < 0) throw std::invalid_argument("simplex right-hand side must be >= 0");
    reset_basis();
  }

  int rows() const { return static_cast<int>(rhs_.size()); }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  int phase() const { return phase_; }
  long iterations() const { return iterations_; }
  void set_iteration_limit(long limit) { iteration_limit_ = limit; }

  int add_column(SparseVector<Scalar> column, Scalar cost) {
    if (column.size() != rhs_.size()) throw std::invalid_argument("column has wrong length");
    columns_.push_back(std::move(column));
    costs_.push_back(std::move(cost));
    position_.push_back(-1);
    return num_columns() - 1;
  }
  const SparseVector<Scalar>& column(int j) const { return columns_[static_cast<std::size_t>(j)]; }
  const Scalar& cost(int j) const { return costs_[static_cast<std::size_t>(j)]; }

  /// All-artificial starting basis; always primal feasible since b >= 0.
  void reset_basis() {
    const int m = rows();
    basis_.resize(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) basis_[static_cast<std::size_t>(r)] = artificial(r);
    std::fill(position_.begin(), position_.end(), -1);
    binv_ = Matrix<Scalar>::Identity(m, m);
    xb_ = rhs_;
    phase_ = 1;
  }

  /// Installs `basis` if it is nonsingular and primal feasible; otherwise
  /// leaves the current basis untouched and returns false.
  bool warm_start(const std::vector<int>& basis) {
    const int m = rows();
    if (static_cast<int>(basis.size()) != m) return false;
    std::vector<int> seen;
    for (int var : basis) {
      if (var >= num_columns() || var < -m) return false;
      seen.push_back(var);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    auto inverse = invert(basis_matrix(basis));
    if (!inverse) return false;
    Vector<Scalar> x = (*inverse) * rhs_;
    for (Eigen::Index r = 0; r < x.size(); ++r)
      if (x(r) < -Traits::zero_tolerance()) return false;
    basis_ = basis;
    std::fill(position_.begin(), position_.end(), -1);
    for (int r = 0; r < m; ++r)
      if (!is_artificial(basis_[static_cast<std::size_t>(r)]))
        position_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = r;
    binv_ = std::move(*inverse);
    xb_ = std::move(x);
    clamp();
    return true;
  }

  const std::vector<int>& basis() const { return basis_; }

  /// Minimises the sum of artificial variables from the current basis.
  LpStatus phase1() {
    phase_ = 1;
    return iterate();
  }

  /// Sum of basic artificial values; zero (within tolerance) iff feasible.
  Scalar infeasibility() const {
    Scalar sum(0);
    for (int r = 0; r < rows(); ++r)
      if (is_artificial(basis_[static_cast<std::size_t>(r)])) sum += xb_(r);
    return sum;
  }
  bool feasible() const { return infeasibility() <= Traits::zero_tolerance() * Scalar(rows()); }

  /// Minimises the true costs. Requires a feasible basis (after phase1).
  LpStatus phase2() {
    if (phase_ == 1) {
      drive_out_artificials();
      phase_ = 2;
    }
    return iterate();
  }

  /// Current-phase objective value.
  Scalar objective() const {
    Scalar value(0);
    for (int r = 0; r < rows(); ++r) value += basic_cost(r) * xb_(r);
    return value;
  }

  /// Simplex multipliers y = B^{-T} c_B for the current phase.
  Vector<Scalar> duals() const {
    Vector<Scalar> y = Vector<Scalar>::Zero(rows());
    for (int r = 0; r < rows(); ++r) {
      const Scalar c = basic_cost(r);
      if (c != 0) y += c * binv_.row(r).transpose();
    }
    return y;
  }

  Scalar reduced_cost(int j, const Vector<Scalar>& y) const {
    return phase_cost(j) - dot(columns_[static_cast<std::size_t>(j)], y);
  }

  /// Value of every structural column (zero when nonbasic).
  std::vector<Scalar> primal() const {
    std::vector<Scalar> x(columns_.size(), Scalar(0));
    for (int r = 0; r < rows(); ++r) {
      const int var = basis_[static_cast<std::size_t>(r)];
      if (!is_artificial(var)) x[static_cast<std::size_t>(var)] = xb_(r);
    }
    return x;
  }

  bool is_basic(int j) const { return position_[static_cast<std::size_t>(j)] >= 0; }

  /// Removes nonbasic columns flagged in `drop`; returns the old->new index
  /// map (-1 for removed columns).
  std::vector<int> remove_columns(const std::vector<bool>& drop) {
    std::vector<int> remap(columns_.size(), -1);
    std::vector<SparseVector<Scalar>> kept_columns;
    std::vector<Scalar> kept_costs;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (drop[j] && position_[j] < 0) continue;
      remap[j] = static_cast<int>(kept_columns.size());
      kept_columns.push_back(std::move(columns_[j]));
      kept_costs.push_back(std::move(costs_[j]));
    }
    columns_ = std::move(kept_columns);
    costs_ = std::move(kept_costs);
    position_.assign(columns_.size(), -1);
    for (int r = 0; r < rows(); ++r) {
      int& var = basis_[static_cast<std::size_t>(r)];
      if (!is_artificial(var)) {
        var = remap[static_cast<std::size_t>(var)];
        position_[static_cast<std::size_t>(var)] = r;
      }
    }
    return remap;
  }

  static Scalar dot(const SparseVector<Scalar>& column, const Vector<Scalar>& y) {
    Scalar sum(0);
    for (typename SparseVector<Scalar>::InnerIterator it(column); it; ++it)
      sum += it.value() * y(it.index());
    return sum;
  }

 private:
  static constexpr int kDegenerateStreakForBland = 30;
  static constexpr int kRefactorInterval = 64;

  Scalar phase_cost(int j) const {
    return phase_ == 1 ? Scalar(0) : costs_[static_cast<std::size_t>(j)];
  }
  Scalar basic_cost(int r) const {
    const int var = basis_[static_cast<std::size_t>(r)];
    if (is_artificial(var)) return phase_ == 1 ? Scalar(1) : Scalar(0);
    return phase_cost(var);
  }

  Matrix<Scalar> basis_matrix(const std::vector<int>& basis) const {
    const int m = rows();
    Matrix<Scalar> b = Matrix<Scalar>::Zero(m, m);
    for (int r = 0; r < m; ++r) {
      const int var = basis[static_cast<std::size_t>(r)];
      if (is_artificial(var)) {
        b(-var - 1, r) = Scalar(1);
      } else {
        for (typename SparseVector<Scalar>::InnerIterator it(columns_[static_cast<std::size_t>(var)]);
             it; ++it)
          b(it.index(), r) = it.value();
      }
    }
    return b;
  }

  // Gauss-Jordan with partial pivoting; nullopt when singular.
  static std::optional<Matrix<Scalar>> invert(Matrix<Scalar> a) {
    const Eigen::Index m = a.rows();
    Matrix<Scalar> inv = Matrix<Scalar>::Identity(m, m);
    for (Eigen::Index col = 0; col < m; ++col) {
      Eigen::Index pivot = -1;
      Scalar best(0);
      for (Eigen::Index r = col; r < m; ++r) {
        Scalar magnitude = a(r, col) < 0 ? Scalar(-a(r, col)) : a(r, col);
        if (magnitude > best) {
          best = magnitude;
          pivot = r;
          if constexpr (Traits::kExact) break;
        }
      }
      if (pivot < 0 || best <= Traits::pivot_tolerance()) return std::nullopt;
      if (pivot != col) {
        a.row(pivot).swap(a.row(col));
        inv.row(pivot).swap(inv.row(col));
      }
      const Scalar scale = Scalar(1) / a(col, col);
      a.row(col) *= scale;
      inv.row(col) *= scale;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (r == col || a(r, col) == 0) continue;
        const Scalar factor = a(r, col);
        a.row(r) -= factor * a.row(col);
        inv.row(r) -= factor * inv.row(col);
      }
    }
    return inv;
  }

  void refactor() {
    if constexpr (!Traits::kExact) {
      auto inverse = invert(basis_matrix(basis_));
      if (inverse) {
        binv_ = std::move(*inverse);
        xb_ = binv_ * rhs_;
        clamp();
      }
    }
  }

  void clamp() {
    if constexpr (!Traits::kExact) {
      for (Eigen::Index r = 0; r < xb_.size(); ++r)
        if (xb_(r) < 0) xb_(r) = 0;
    }
  }

  Vector<Scalar> direction(const SparseVector<Scalar>& column) const {
    Vector<Scalar> d = Vector<Scalar>::Zero(rows());
    for (typename SparseVector<Scalar>::InnerIterator it(column); it; ++it)
      d += it.value() * binv_.col(it.index());
    return d;
  }

  static Scalar magnitude(const Scalar& v) { return v < 0 ? Scalar(-v) : v; }

  // Bland ordering key over all variables: artificials first.
  int order_key(int var) const { return is_artificial(var) ? -var - 1 : rows() + var; }

  void pivot(int row, int entering, const Vector<Scalar>& d) {
    const Scalar& pivot_value = d(row);
    const Scalar theta = xb_(row) / pivot_value;
    for (int r = 0; r < rows(); ++r)
      if (r != row && d(r) != 0) xb_(r) -= theta * d(r);
    xb_(row) = theta;
    binv_.row(row) /= pivot_value;
    for (int r = 0; r < rows(); ++r) {
      if (r == row || d(r) == 0) continue;
      const Scalar factor = d(r);
      binv_.row(r) -= factor * binv_.row(row);
    }
    const int leaving = basis_[static_cast<std::size_t>(row)];
    if (!is_artificial(leaving)) position_[static_cast<std::size_t>(leaving)] = -1;
    basis_[static_cast<std::size_t>(row)] = entering;
    position_[static_cast<std::size_t>(entering)] = row;
    ++iterations_;
    if (++since_refactor_ >= kRefactorInterval) {
      since_refactor_ = 0;
      refactor();
    }
    clamp();
  }

  LpStatus iterate() {
    const Scalar tol = Traits::zero_tolerance();
    const Scalar pivot_tol = Traits::pivot_tolerance();
    int degenerate_streak = 0;
    while (true) {
      if (iterations_ >= iteration_limit_) return LpStatus::kIterationLimit;
      const Vector<Scalar> y = duals();
      const bool bland = degenerate_streak >= kDegenerateStreakForBland;
      int entering = -1;
      Scalar best_rc(0);
      for (int j = 0; j < num_columns(); ++j) {
        if (position_[static_cast<std::size_t>(j)] >= 0) continue;
        Scalar rc = reduced_cost(j, y);
        if (rc < -tol && (entering < 0 || rc < best_rc)) {
          entering = j;
          best_rc = rc;
          if (bland) break;
        }
      }
      if (entering < 0) {
        refactor();
        return LpStatus::kOptimal;
      }
      const Vector<Scalar> d = direction(columns_[static_cast<std::size_t>(entering)]);
      int leave = -1;
      Scalar best_ratio(0);
      for (int r = 0; r < rows(); ++r) {
        const int var = basis_[static_cast<std::size_t>(r)];
        std::optional<Scalar> ratio;
        if (phase_ == 2 && is_artificial(var) && (d(r) > pivot_tol || d(r) < -pivot_tol))
          ratio = Scalar(0);  // artificials are pinned at zero in phase two
        else if (d(r) > pivot_tol)
          ratio = xb_(r) / d(r);
        if (!ratio) continue;
        if (leave < 0 || *ratio < best_ratio - tol) {
          leave = r;
          best_ratio = *ratio;
          continue;
        }
        if (*ratio > best_ratio + tol) continue;
        // Tie: Bland's rule in anti-cycling mode, else the larger pivot.
        const bool take =
            bland ? order_key(var) < order_key(basis_[static_cast<std::size_t>(leave)])
                  : magnitude(d(r)) > magnitude(d(leave));
        if (take) {
          leave = r;
          if (*ratio < best_ratio) best_ratio = *ratio;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      degenerate_streak = best_ratio <= tol ? degenerate_streak + 1 : 0;
      if (phase_ == 2 && is_artificial(basis_[static_cast<std::size_t>(leave)])) {
        // Degenerate exchange: keep x unchanged.
        xb_(leave) = Scalar(0);
      }
      pivot(leave, entering, d);
    }
  }

  // After a feasible phase one, pivot zero-valued artificials out of the
  // basis wherever some structural column has a non-zero entry in their row.
  void drive_out_artificials() {
    const Scalar pivot_tol = Traits::pivot_tolerance();
    for (int r = 0; r < rows(); ++r) {
      if (!is_artificial(basis_[static_cast<std::size_t>(r)])) continue;
      int entering = -1;
      Scalar best(0);
      for (int j = 0; j < num_columns(); ++j) {
        if (position_[static_cast<std::size_t>(j)] >= 0) continue;
        Scalar value = dot(columns_[static_cast<std::size_t>(j)], binv_.row(r).transpose());
        Scalar magnitude = value < 0 ? Scalar(-value) : value;
        if (magnitude > pivot_tol && magnitude > best) {
          best = magnitude;
          entering = j;
          if constexpr (Traits::kExact) break;
        }
      }
      if (entering < 0) continue;  // redundant row
      const Vector<Scalar> d = direction(columns_[static_cast<std::size_t>(entering)]);
      xb_(r) = Scalar(0);
      pivot(r, entering, d);
    }
  }

  Vector<Scalar> rhs_;
  std::vector<SparseVector<Scalar>> columns_;
  std::vector<Scalar> costs_;
  std::vector<int> position_;  // basis row of each structural column, or -1
  std::vector<int> basis_;
  Matrix<Scalar> binv_;
  Vector<Scalar> xb_;
  int phase_ = 1;
  long iterations_ = 0;
  long iteration_limit_ = 200000;
  int since_refactor_ = 0;
};

}  // namespace realkit

#endif  // REALKIT_SIMPLEX_HPP_
