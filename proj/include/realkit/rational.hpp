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

#ifndef REALKIT_RATIONAL_HPP_
#define REALKIT_RATIONAL_HPP_

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace realkit {

// Exact rational scalar. Expression templates are disabled so the type
// composes cleanly with Eigen's own expression machinery.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SparseVector = Eigen::SparseVector<Scalar>;

using MatrixQ = Matrix<Rational>;
using VectorQ = Vector<Rational>;

/// Parses "0.25", "-3", "1e-3", "2.5E+2" or "1/3" into an exact rational.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Renders a rational as a terminating decimal when one exists, otherwise
/// as "p/q". The output always parses back to the same value.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

/// Exact binary value of a finite double.
Rational from_double(double value);

/// Best rational approximation with denominator at most `max_denominator`
/// (continued fractions).
Rational rationalize(double value, std::int64_t max_denominator);

/// sqrt(value) when it is itself rational, otherwise nullopt.
std::optional<Rational> exact_sqrt(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

/// A non-negative extended real: a rational or +infinity. 0 * inf is 0.
class ExtendedRational {
 public:
  ExtendedRational() = default;
  ExtendedRational(Rational value) : value_(std::move(value)) {}  // NOLINT
  ExtendedRational(int value) : value_(value) {}                  // NOLINT

  static ExtendedRational infinity() {
    ExtendedRational result;
    result.infinite_ = true;
    return result;
  }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }

  ExtendedRational& operator+=(const ExtendedRational& other) {
    if (other.infinite_) infinite_ = true;
    if (!infinite_) value_ += other.value_;
    return *this;
  }
  friend ExtendedRational operator+(ExtendedRational lhs, const ExtendedRational& rhs) {
    lhs += rhs;
    return lhs;
  }
  // weight * this, with weight >= 0 and 0 * inf = 0.
  ExtendedRational scaled(const Rational& weight) const {
    if (weight == 0) return ExtendedRational(Rational(0));
    if (infinite_) return infinity();
    return ExtendedRational(Rational(value_ * weight));
  }

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b) {
    return !(b < a);
  }
  friend bool operator>(const ExtendedRational& a, const ExtendedRational& b) { return b < a; }

  double to_double() const;

 private:
  Rational value_{0};
  bool infinite_ = false;
};

/// Accepts "inf" / "infinity" in addition to the rational grammar.
ExtendedRational parse_extended(std::string_view text);
std::string format_extended(const ExtendedRational& value);

// Per-scalar numeric policy. Exact scalars compare against zero exactly.
template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static double zero_tolerance() { return 1e-9; }
  static double pivot_tolerance() { return 1e-9; }
  static double from(const Rational& value) { return realkit::to_double(value); }
  static double to_double(double value) { return value; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static Rational zero_tolerance() { return Rational(0); }
  static Rational pivot_tolerance() { return Rational(0); }
  static Rational from(const Rational& value) { return value; }
  static double to_double(const Rational& value) { return realkit::to_double(value); }
};

template <typename Scalar>
Matrix<Scalar> cast_matrix(const MatrixQ& source) {
  Matrix<Scalar> result(source.rows(), source.cols());
  for (Eigen::Index i = 0; i < source.rows(); ++i)
    for (Eigen::Index j = 0; j < source.cols(); ++j)
      result(i, j) = ScalarTraits<Scalar>::from(source(i, j));
  return result;
}

}  // namespace realkit

#endif  // REALKIT_RATIONAL_HPP_
