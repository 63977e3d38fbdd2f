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

#include "realkit/contact.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "realkit/errors.hpp"

namespace realkit {

StepCdf::StepCdf(std::vector<CdfJump> jumps) : jumps_(std::move(jumps)) {
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const std::string where = "/jumps/" + std::to_string(k);
    if (jumps_[k].r < 0) throw InvalidInstance(where + ": negative abscissa");
    if (jumps_[k].value < 0 || jumps_[k].value > 1)
      throw InvalidInstance(where + ": value outside [0, 1]");
    if (k == 0) continue;
    if (!(jumps_[k - 1].r < jumps_[k].r))
      throw InvalidInstance(where + ": abscissae must be strictly increasing");
    if (jumps_[k].value < jumps_[k - 1].value)
      throw InvalidInstance(where + ": values must be non-decreasing");
  }
}

int surd_sign(const Rational& a, int k, const Rational& s) {
  const int sa = a > 0 ? 1 : (a < 0 ? -1 : 0);
  const int sk = (k == 0 || s == 0) ? 0 : (k > 0 ? 1 : -1);
  if (sk == 0) return sa;
  if (sa == 0 || sa == sk) return sk;
  // Opposite signs: compare a^2 with k^2 s.
  const Rational lhs = a * a;
  const Rational rhs = Rational(k * k) * s;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sk;
}

Rational StepCdf::at(const Rational& a, int k, const Rational& s) const {
  Rational value(0);
  for (const auto& jump : jumps_) {
    if (surd_sign(a - jump.r, k, s) < 0) break;
    value = jump.value;
  }
  return value;
}

Rational StepCdf::operator()(const Rational& r) const { return at(r, 0, Rational(0)); }

Rational StepCdf::total_mass() const { return jumps_.empty() ? Rational(0) : jumps_.back().value; }

bool operator==(const StepCdf& a, const StepCdf& b) {
  for (const auto* f : {&a, &b})
    for (const auto& jump : f->jumps_)
      if (a(jump.r) != b(jump.r)) return false;
  return true;
}

std::optional<Rational> Surd::rational() const {
  if (k == 0 || s == 0) return a;
  if (auto root = exact_sqrt(s)) return Rational(a + k * *root);
  return std::nullopt;
}

double Surd::approx() const { return to_double(a) + k * std::sqrt(to_double(s)); }

std::string Surd::format() const {
  if (auto exact = rational()) return format_rational(*exact);
  std::string text = a == 0 ? "" : format_rational(a) + (k > 0 ? " + " : " - ");
  if (a == 0 && k < 0) text += "-";
  const int magnitude = std::abs(k);
  if (magnitude != 1) text += std::to_string(magnitude) + "*";
  return text + "sqrt(" + format_rational(s) + ")";
}

std::string to_string(ContactViolation::Side side) {
  return side == ContactViolation::Side::kLower ? "lower" : "upper";
}

std::optional<ContactViolation> check_two_point_squared(const StepCdf& tau1, const StepCdf& tau2,
                                                        const Rational& l_squared) {
  if (l_squared < 0) throw InvalidInstance("squared distance must be non-negative");
  const Rational& s = l_squared;
  std::vector<Surd> grid{{Rational(0), 0, s}, {Rational(0), 1, s}};
  for (const auto* tau : {&tau1, &tau2})
    for (const auto& jump : tau->jumps())
      for (int k : {-1, 0, 1})
        if (surd_sign(jump.r, k, s) >= 0) grid.push_back({jump.r, k, s});
  auto less = [&](const Surd& x, const Surd& y) { return surd_sign(x.a - y.a, x.k - y.k, s) < 0; };
  auto same = [&](const Surd& x, const Surd& y) { return surd_sign(x.a - y.a, x.k - y.k, s) == 0; };
  std::sort(grid.begin(), grid.end(), less);
  grid.erase(std::unique(grid.begin(), grid.end(), same), grid.end());

  for (const Surd& r : grid) {
    const Rational middle = tau2.at(r.a, r.k, s);
    const bool below_l = surd_sign(r.a, r.k - 1, s) < 0;
    const Rational lower = below_l ? Rational(0) : tau1.at(r.a, r.k - 1, s);
    if (lower > middle) return ContactViolation{r, ContactViolation::Side::kLower, lower, middle};
    const Rational upper = tau1.at(r.a, r.k + 1, s);
    if (middle > upper) return ContactViolation{r, ContactViolation::Side::kUpper, middle, upper};
  }
  return std::nullopt;
}

std::optional<ContactViolation> check_two_point(const StepCdf& tau1, const StepCdf& tau2,
                                                const Rational& l) {
  if (l < 0) throw InvalidInstance("l must be non-negative");
  return check_two_point_squared(tau1, tau2, l * l);
}

std::optional<Rational> invert_cdf(const StepCdf& tau, const Rational& u) {
  if (u < 0 || u > 1) throw InvalidInstance("u must lie in [0, 1]");
  if (u == 0) return Rational(0);
  for (const auto& jump : tau.jumps())
    if (jump.value >= u) return jump.r;
  return std::nullopt;
}

namespace {

Rational squared_distance(const VectorQ& x, const VectorQ& y) {
  Rational total(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const Rational diff = x(k) - y(k);
    total += diff * diff;
  }
  return total;
}

Vector<double> to_doubles(const VectorQ& x) {
  Vector<double> result(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) result(k) = to_double(x(k));
  return result;
}

}  // namespace

std::optional<ContactSet> construct_two_point_set(const StepCdf& tau1, const StepCdf& tau2,
                                                  const VectorQ& x1, const VectorQ& x2,
                                                  const Rational& u) {
  if (x1.size() != x2.size() || x1.size() == 0)
    throw InvalidInstance("reference points must have the same positive dimension");
  const Rational l_squared = squared_distance(x1, x2);
  if (l_squared == 0 && !(tau1 == tau2))
    throw Infeasible("coincident reference points need identical contact functions");
  const auto r1 = invert_cdf(tau1, u);
  const auto r2 = invert_cdf(tau2, u);
  if (!r1 && !r2) return std::nullopt;
  if (!r1 || !r2) throw Infeasible("contact functions have different total mass");

  ContactSet set{*r1, *r2, {}, {}};
  if (l_squared == 0) {
    VectorQ a = x1;
    a(0) += *r1;
    set.approx.push_back(to_doubles(a));
    set.exact.push_back(std::move(a));
    return set;
  }
  if (auto l = exact_sqrt(l_squared)) {
    const VectorQ direction = (x1 - x2) / *l;
    VectorQ a1 = x1 + direction * *r1;
    VectorQ a2 = x2 - direction * *r2;
    set.approx = {to_doubles(a1), to_doubles(a2)};
    set.exact = {std::move(a1), std::move(a2)};
    return set;
  }
  const Vector<double> p1 = to_doubles(x1), p2 = to_doubles(x2);
  const Vector<double> direction = (p1 - p2) / std::sqrt(to_double(l_squared));
  set.approx = {p1 + direction * to_double(*r1), p2 - direction * to_double(*r2)};
  return set;
}

BallScreen ball_positivity_screen(const BallSystem& system, const std::vector<VectorQ>& probes) {
  if (probes.empty()) throw InvalidInstance("probe set must be non-empty");
  if (probes.size() > 20) throw CapExceeded("at most 20 probe points");
  if (system.balls.size() > 64) throw CapExceeded("at most 64 balls");
  if (system.taus.size() != system.centers.size())
    throw InvalidInstance("one contact function per center is required");
  const std::size_t m = system.balls.size();
  std::vector<std::uint32_t> hits(m, 0);  // probes inside each closed ball
  for (std::size_t i = 0; i < m; ++i) {
    const Ball& ball = system.balls[i];
    if (ball.center < 0 || ball.center >= static_cast<int>(system.centers.size()))
      throw InvalidInstance("/balls/" + std::to_string(i) + ": unknown center");
    if (ball.radius <= 0) throw InvalidInstance("/balls/" + std::to_string(i) + ": radius must be positive");
    for (std::size_t p = 0; p < probes.size(); ++p)
      if (squared_distance(probes[p], system.centers[static_cast<std::size_t>(ball.center)]) <=
          ball.radius * ball.radius)
        hits[i] |= std::uint32_t{1} << p;
  }
  // g depends on F only through the set of balls it meets.
  std::map<std::uint64_t, std::uint32_t> patterns;
  const std::uint32_t subsets = std::uint32_t{1} << probes.size();
  for (std::uint32_t f = 0; f < subsets; ++f) {
    std::uint64_t pattern = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (hits[i] & f) pattern |= std::uint64_t{1} << i;
    patterns.emplace(pattern, f);
  }
  BallScreen screen;
  std::uint32_t worst = 0;
  for (const auto& [pattern, first] : patterns) {
    Rational g(0);
    for (std::size_t i = 0; i < m; ++i)
      if ((pattern >> i) & 1U) g += system.balls[i].coefficient;
    if (g < screen.g_min || (g == screen.g_min && first < worst)) {
      screen.g_min = g;
      worst = first;
    }
  }
  screen.nonnegative = screen.g_min >= 0;
  if (!screen.nonnegative) {
    std::vector<int> witness;
    for (std::size_t p = 0; p < probes.size(); ++p)
      if ((worst >> p) & 1U) witness.push_back(static_cast<int>(p));
    screen.witness = std::move(witness);
    return screen;
  }
  Rational functional(0);
  for (const Ball& ball : system.balls)
    functional += ball.coefficient * system.taus[static_cast<std::size_t>(ball.center)](ball.radius);
  screen.functional = functional;
  screen.pass = functional >= 0;
  return screen;
}

MonteCarloReport monte_carlo_contact(const StepCdf& tau1, const StepCdf& tau2, const VectorQ& x1,
                                     const VectorQ& x2, long samples, std::uint64_t seed) {
  if (samples <= 0) throw InvalidInstance("samples must be positive");
  const Rational l_squared = squared_distance(x1, x2);
  if (auto violation = check_two_point_squared(tau1, tau2, l_squared))
    throw Infeasible("contact functions fail the two-point condition at R = " +
                     violation->r.format());
  MonteCarloReport report;
  report.samples = samples;
  report.seed = seed;
  report.exact = exact_sqrt(l_squared).has_value();

  // Every u selects one jump of each function; the construction depends on
  // u only through that pair, so each pair is built and verified once.
  auto jump_index = [](const StepCdf& tau, const Rational& u) -> int {
    const auto& jumps = tau.jumps();
    for (std::size_t k = 0; k < jumps.size(); ++k)
      if (jumps[k].value >= u) return static_cast<int>(k);
    return -1;
  };
  std::map<std::pair<int, int>, bool> verified;
  auto verify = [&](int k1, int k2, const Rational& u) {
    auto [it, inserted] = verified.emplace(std::make_pair(k1, k2), true);
    if (!inserted) return;
    const auto set = construct_two_point_set(tau1, tau2, x1, x2, u);
    if (!set) return;
    for (int side = 0; side < 2; ++side) {
      const VectorQ& x = side == 0 ? x1 : x2;
      const Rational& target = side == 0 ? set->r1 : set->r2;
      if (report.exact) {
        std::optional<Rational> nearest;
        for (const auto& a : set->exact) {
          const Rational d2 = squared_distance(x, a);
          if (!nearest || d2 < *nearest) nearest = d2;
        }
        if (*nearest != target * target) throw std::logic_error("construction misses its radius");
      } else {
        double nearest = INFINITY;
        const Vector<double> p = to_doubles(x);
        for (const auto& a : set->approx) nearest = std::min(nearest, (p - a).norm());
        if (std::abs(nearest - to_double(target)) > 1e-9 * std::max(1.0, to_double(target)))
          throw std::logic_error("construction misses its radius");
      }
    }
  };

  std::vector<long> count1(tau1.jumps().size(), 0), count2(tau2.jumps().size(), 0);
  std::mt19937_64 rng(seed);
  for (long s = 0; s < samples; ++s) {
    // u in (0, 1], away from the u = 0 boundary convention.
    const Rational u = from_double(static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53);
    const int k1 = jump_index(tau1, u);
    const int k2 = jump_index(tau2, u);
    if (k1 >= 0 && k2 >= 0) verify(k1, k2, u);
    if (k1 < 0 || k2 < 0) {
      if (k1 >= 0 || k2 >= 0) throw std::logic_error("inconsistent total masses");
      ++report.empty_sets;
      continue;
    }
    ++count1[static_cast<std::size_t>(k1)];
    ++count2[static_cast<std::size_t>(k2)];
  }

  std::vector<Rational> grid;
  for (const auto* tau : {&tau1, &tau2})
    for (const auto& jump : tau->jumps()) grid.push_back(jump.r);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  auto empirical = [&](const StepCdf& tau, const std::vector<long>& counts, const Rational& r) {
    long hits = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (tau.jumps()[k].r <= r) hits += counts[k];
    return static_cast<double>(hits) / static_cast<double>(samples);
  };
  for (const Rational& r : grid) {
    EmpiricalPoint point{r, tau1(r), tau2(r), empirical(tau1, count1, r), empirical(tau2, count2, r)};
    report.deviation1 = std::max(report.deviation1, std::abs(point.empirical1 - to_double(point.tau1)));
    report.deviation2 = std::max(report.deviation2, std::abs(point.empirical2 - to_double(point.tau2)));
    report.points.push_back(std::move(point));
  }
  report.max_deviation = std::max(report.deviation1, report.deviation2);
  return report;
}

}  // namespace realkit
