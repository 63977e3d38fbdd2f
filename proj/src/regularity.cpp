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

#include "realkit/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "realkit/errors.hpp"

namespace realkit {

AtomicMeasure2D AtomicMeasure2D::finite(const FiniteMetricSpace& space,
                                        const std::vector<CorrelationAtom>& atoms) {
  AtomicMeasure2D measure;
  measure.space_ = space;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& atom = atoms[k];
    if (atom.i < 0 || atom.i >= space.size() || atom.j < 0 || atom.j >= space.size())
      throw InvalidInstance("/rho/" + std::to_string(k) + ": point index out of range");
    if (atom.weight < 0) throw InvalidInstance("/rho/" + std::to_string(k) + ": negative weight");
    if (atom.weight == 0) continue;
    Atom stored;
    stored.a = atom.i;
    stored.b = atom.j;
    stored.weight = atom.weight;
    measure.atoms_.push_back(std::move(stored));
  }
  return measure;
}

AtomicMeasure2D AtomicMeasure2D::euclidean(int dimension, const std::vector<Atom>& atoms) {
  if (dimension < 1) throw InvalidInstance("dimension must be positive");
  AtomicMeasure2D measure;
  measure.dimension_ = dimension;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& atom = atoms[k];
    const std::string where = "/rho/" + std::to_string(k);
    if (atom.x.size() != dimension || atom.y.size() != dimension)
      throw InvalidInstance(where + ": coordinates must have length " + std::to_string(dimension));
    if (atom.weight < 0) throw InvalidInstance(where + ": negative weight");
    if (atom.weight != 0) measure.atoms_.push_back(atom);
  }
  return measure;
}

AtomicMeasure2D AtomicMeasure2D::from_target(const CorrelationTarget& target) {
  std::vector<CorrelationAtom> atoms;
  for (int i = 0; i < target.size(); ++i)
    for (int j = 0; j < target.size(); ++j)
      if (target.rho()(i, j) > 0) atoms.push_back({i, j, target.rho()(i, j)});
  return finite(target.space(), atoms);
}

Rational AtomicMeasure2D::squared_distance(const Atom& atom) const {
  if (!is_euclidean()) {
    const Rational& d = space_->distance(atom.a, atom.b);
    return d * d;
  }
  Rational total(0);
  for (int k = 0; k < dimension_; ++k) {
    const Rational diff = atom.x(k) - atom.y(k);
    total += diff * diff;
  }
  return total;
}

AtomicMeasure2D AtomicMeasure2D::concatenated(const AtomicMeasure2D& other) const {
  if (dimension_ != other.dimension_) throw InvalidInstance("measures live on different spaces");
  AtomicMeasure2D result = *this;
  result.atoms_.insert(result.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  return result;
}

std::string to_string(CheckVerdict verdict) {
  switch (verdict) {
    case CheckVerdict::kPass:
      return "pass";
    case CheckVerdict::kFail:
      return "fail";
    case CheckVerdict::kIndeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

CheckVerdict compare_to_bound(const Enclosure& value, const Rational& bound) {
  if (value.upper <= ExtendedRational(bound)) return CheckVerdict::kPass;
  if (ExtendedRational(bound) < value.lower) return CheckVerdict::kFail;
  return CheckVerdict::kIndeterminate;
}

ExtendedRational psi_at_sqrt(const PsiFunction& psi, const Rational& squared) {
  if (auto root = exact_sqrt(squared)) return psi(*root);
  // Last breakpoint t with t^2 <= squared.
  const auto& steps = psi.steps();
  std::optional<ExtendedRational> value;
  for (const auto& step : steps) {
    if (step.t * step.t > squared) break;
    value = step.value;
  }
  return value ? *value : ExtendedRational::infinity();
}

namespace {

ExtendedRational psi_of_atom(const AtomicMeasure2D& rho, const AtomicMeasure2D::Atom& atom,
                             const PsiFunction& psi) {
  if (!rho.is_euclidean()) return psi(rho.space()->distance(atom.a, atom.b));
  return psi_at_sqrt(psi, rho.squared_distance(atom));
}

Rational squared_norm(const VectorQ& v) {
  Rational total(0);
  for (Eigen::Index k = 0; k < v.size(); ++k) total += v(k) * v(k);
  return total;
}

}  // namespace

ExtendedRational chi_hc_integral(const AtomicMeasure2D& rho, const PsiFunction& psi) {
  ExtendedRational total(0);
  for (const auto& atom : rho.atoms()) total += psi_of_atom(rho, atom, psi).scaled(atom.weight);
  return total;
}

Rational packing_integral(const AtomicMeasure2D& rho, const FiniteMetricSpace& space) {
  if (rho.is_euclidean()) throw InvalidInstance("packing integral needs a finite space");
  std::map<Rational, int> cache;
  Rational total(0);
  for (const auto& atom : rho.atoms()) {
    if (atom.a >= space.size() || atom.b >= space.size())
      throw InvalidInstance("measure refers to points outside the space");
    const Rational& d = space.distance(atom.a, atom.b);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, packing_number(space, d)).first;
    total += atom.weight * it->second;
  }
  return total;
}

PsiAdmissibility psi_admissibility(const PsiFunction& psi, const FiniteMetricSpace& space,
                                   const Rational& threshold) {
  std::vector<Rational> grid = space.distinct_distances();
  for (const auto& step : psi.steps())
    if (step.t > 0) grid.push_back(step.t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  PsiAdmissibility report;
  for (const auto& t : grid) {
    if (t <= 0) continue;
    PsiProfileEntry entry{t, psi(t), packing_number(space, t), {}};
    entry.ratio = entry.psi.is_infinite()
                      ? ExtendedRational::infinity()
                      : ExtendedRational(Rational(entry.psi.value() / entry.packing));
    report.profile.push_back(std::move(entry));
  }
  const auto distances = space.distinct_distances();
  if (report.profile.empty() || distances.empty()) return report;
  report.ratio_grows = true;
  for (std::size_t k = 1; k < report.profile.size(); ++k)
    if (report.profile[k - 1].ratio < report.profile[k].ratio) report.ratio_grows = false;
  const Rational& smallest = distances.front();
  for (const auto& entry : report.profile)
    if (entry.t == smallest) report.pass = ExtendedRational(threshold) < entry.ratio;
  return report;
}

Enclosure inverse_power(const Rational& squared, int d) {
  if (squared <= 0) return Enclosure::exactly(ExtendedRational::infinity());
  if (d % 2 == 0) {
    Rational value(1);
    for (int k = 0; k < d / 2; ++k) value /= squared;
    return Enclosure::exactly(ExtendedRational(value));
  }
  if (auto root = exact_sqrt(squared)) {
    Rational value(1);
    for (int k = 0; k < d; ++k) value /= *root;
    return Enclosure::exactly(ExtendedRational(value));
  }
  const double approx = std::pow(to_double(squared), -0.5 * d);
  return {ExtendedRational(from_double(approx * (1 - 1e-12))),
          ExtendedRational(from_double(approx * (1 + 1e-12)))};
}

ShellSeries shell_series(const AtomicMeasure2D& rho, const std::vector<Rational>& radii,
                         const std::vector<Rational>& beta) {
  if (!rho.is_euclidean()) throw InvalidInstance("shell series needs a Euclidean measure");
  if (radii.empty()) throw InvalidInstance("at least one radius is required");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] <= 0) throw InvalidInstance("/radii/" + std::to_string(k) + ": must be positive");
    if (k > 0 && radii[k] <= radii[k - 1])
      throw InvalidInstance("/radii/" + std::to_string(k) + ": radii must increase");
  }
  if (beta.size() + 1 < radii.size())
    throw InvalidBeta("need " + std::to_string(radii.size() - 1) + " beta values");
  for (std::size_t k = 0; k < beta.size(); ++k) {
    if (beta[k] <= 0) throw InvalidBeta("/beta/" + std::to_string(k) + ": must be positive");
    if (k > 0 && beta[k] > beta[k - 1])
      throw InvalidBeta("/beta/" + std::to_string(k) + ": beta must be non-increasing");
  }
  const int d = rho.dimension();
  // Index of the first ball containing both endpoints (radii.size() if none).
  auto first_ball = [&](const AtomicMeasure2D::Atom& atom) {
    const Rational reach = std::max(squared_norm(atom.x), squared_norm(atom.y));
    std::size_t k = 0;
    while (k < radii.size() && !(reach < radii[k] * radii[k])) ++k;
    return k;
  };
  ShellSeries series;
  std::vector<Enclosure> increments(radii.size(), Enclosure::exactly(ExtendedRational(0)));
  for (const auto& atom : rho.atoms()) {
    const std::size_t k = first_ball(atom);
    if (k < radii.size())
      increments[k] += inverse_power(rho.squared_distance(atom), d).scaled(atom.weight);
  }
  Enclosure running = Enclosure::exactly(ExtendedRational(0));
  for (std::size_t k = 0; k < radii.size(); ++k) {
    running += increments[k];
    series.r.push_back(running);
    if (running.upper.is_infinite()) series.infinite = true;
  }
  series.value = Enclosure::exactly(ExtendedRational(0));
  if (series.infinite) {
    series.value = Enclosure::exactly(ExtendedRational::infinity());
    return series;
  }
  for (std::size_t n = 0; n + 1 < radii.size(); ++n) series.value += increments[n + 1].scaled(beta[n]);
  return series;
}

Enclosure reduced_measure_check(const std::vector<PointAtom>& rho_bar, const Rational& radius,
                                int d) {
  if (d < 1) throw InvalidInstance("dimension must be positive");
  if (radius <= 0) throw InvalidInstance("ball radius must be positive");
  Enclosure total = Enclosure::exactly(ExtendedRational(0));
  for (std::size_t k = 0; k < rho_bar.size(); ++k) {
    const auto& atom = rho_bar[k];
    if (atom.y.size() != d)
      throw InvalidInstance("/rho_bar/" + std::to_string(k) + ": coordinates must have length " +
                            std::to_string(d));
    if (atom.weight < 0) throw InvalidInstance("/rho_bar/" + std::to_string(k) + ": negative weight");
    const Rational sq = squared_norm(atom.y);
    if (!(sq < radius * radius)) continue;
    total += inverse_power(sq, d).scaled(atom.weight);
  }
  return total;
}

SplitCheck hardcore_split_check(const CorrelationTarget& target, const PsiFunction& psi,
                                const Rational& r, const PpRealizeOptions& options) {
  SplitCheck check;
  check.integral = chi_hc_integral(AtomicMeasure2D::from_target(target), psi);
  check.integral_ok = check.integral <= ExtendedRational(r);
  if (!check.integral_ok) return check;
  check.realization = realize_pp(target, PpObjective::chi_hardcore(psi), options);
  check.verdict = check.realization->verdict;
  return check;
}

}  // namespace realkit
