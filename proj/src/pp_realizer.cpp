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

#include "realkit/pp_realizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "realkit/errors.hpp"

namespace realkit {

CorrelationTarget::CorrelationTarget(FiniteMetricSpace space,
                                     const std::vector<CorrelationAtom>& atoms,
                                     std::optional<VectorQ> rho1, int cap, bool simple,
                                     std::optional<Rational> hardcore_eps, bool strict_hardcore)
    : space_(std::move(space)),
      rho1_(std::move(rho1)),
      cap_(cap),
      simple_(simple),
      hardcore_eps_(std::move(hardcore_eps)),
      strict_hardcore_(strict_hardcore) {
  const int n = space_.size();
  if (cap_ < 0) throw InvalidInstance("/cap: cardinality cap must be non-negative");
  if (hardcore_eps_ && *hardcore_eps_ <= 0)
    throw InvalidInstance("/hardcore_eps: hard-core distance must be positive");
  rho_ = MatrixQ::Zero(n, n);
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& atom = atoms[k];
    const std::string where = "/rho/" + std::to_string(k);
    if (atom.i < 0 || atom.i >= n || atom.j < 0 || atom.j >= n)
      throw InvalidInstance(where + ": point index out of range");
    if (atom.weight < 0) throw InvalidInstance(where + ": negative weight");
    const std::pair<int, int> key{std::min(atom.i, atom.j), std::max(atom.i, atom.j)};
    if (!seen.insert(key).second && rho_(atom.i, atom.j) != atom.weight)
      throw InvalidInstance(where + ": conflicting weight for a repeated pair");
    rho_(atom.i, atom.j) = rho_(atom.j, atom.i) = atom.weight;
  }
  if (rho1_) {
    if (rho1_->size() != n) throw InvalidInstance("/rho1: length must equal the number of points");
    for (int i = 0; i < n; ++i)
      if ((*rho1_)(i) < 0)
        throw InvalidInstance("/rho1/" + std::to_string(i) + ": negative intensity");
  }
}

std::vector<CorrelationAtom> CorrelationTarget::atoms() const {
  std::vector<CorrelationAtom> result;
  for (int i = 0; i < size(); ++i)
    for (int j = i; j < size(); ++j)
      if (rho_(i, j) > 0) result.push_back({i, j, rho_(i, j)});
  return result;
}

bool CorrelationTarget::hardcore_allows(int i, int j) const {
  if (!hardcore_eps_) return true;
  if (i == j) return false;
  const Rational& d = space_.distance(i, j);
  return strict_hardcore_ ? d > *hardcore_eps_ : d >= *hardcore_eps_;
}

ConfigProblem<Rational> CorrelationTarget::admissible_region() const {
  const int n = size();
  auto region = ConfigProblem<Rational>::zero(n, cap_);
  const int top = simple_ || hardcore_eps_ ? std::min(1, cap_) : cap_;
  region.max_multiplicity.assign(static_cast<std::size_t>(n), top);
  if (hardcore_eps_) {
    region.forbidden.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && !hardcore_allows(i, j))
          region.forbidden[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  }
  return region;
}

namespace {

// Total mass ascending, then multiplicities descending.
struct ConfigOrder {
  bool operator()(const Configuration& a, const Configuration& b) const {
    const int ma = a.total_mass(), mb = b.total_mass();
    if (ma != mb) return ma < mb;
    return a.multiplicity > b.multiplicity;
  }
};

}  // namespace

Rational ConfigMixture::total_weight() const {
  Rational total(0);
  for (const auto& atom : atoms) total += atom.weight;
  return total;
}

void ConfigMixture::canonicalize() {
  std::map<Configuration, Rational, ConfigOrder> merged;
  for (const auto& atom : atoms) merged[atom.config] += atom.weight;
  atoms.clear();
  for (auto& [config, weight] : merged)
    if (weight != 0) atoms.push_back({config, weight});
}

HardcoreSupport check_hardcore_support(const CorrelationTarget& target, const Rational& eps,
                                       bool strict) {
  HardcoreSupport result;
  const MatrixQ& rho = target.rho();
  for (int i = 0; i < target.size(); ++i)
    for (int j = i; j < target.size(); ++j) {
      if (rho(i, j) <= 0) continue;
      const Rational& d = target.space().distance(i, j);
      if (strict ? d <= eps : d < eps) result.offending.push_back({i, j, rho(i, j)});
    }
  result.ok = result.offending.empty();
  return result;
}

std::vector<Configuration> enumerate_configs(const FiniteMetricSpace& space, int cap, bool simple,
                                             std::optional<Rational> hardcore_eps,
                                             bool strict_hardcore, std::size_t limit) {
  if (cap < 0) throw InvalidInstance("negative cardinality cap");
  const int n = space.size();
  const int top = simple || hardcore_eps ? 1 : cap;
  auto allowed = [&](int i, int j) {
    const Rational& d = space.distance(i, j);
    return strict_hardcore ? d > *hardcore_eps : d >= *hardcore_eps;
  };
  std::vector<Configuration> result;
  std::vector<int> m(static_cast<std::size_t>(n), 0);
  auto fill = [&](auto&& self, int index, int remaining) -> void {
    if (index == n) {
      if (remaining == 0) {
        if (result.size() >= limit)
          throw CapExceeded("enumerate_configs: more than " + std::to_string(limit) +
                            " configurations");
        result.emplace_back(m);
      }
      return;
    }
    for (int v = std::min(top, remaining); v >= 0; --v) {
      if (v > 0 && hardcore_eps) {
        bool ok = true;
        for (int i = 0; i < index && ok; ++i) ok = m[static_cast<std::size_t>(i)] == 0 || allowed(i, index);
        if (!ok) continue;
      }
      m[static_cast<std::size_t>(index)] = v;
      self(self, index + 1, remaining - v);
    }
    m[static_cast<std::size_t>(index)] = 0;
  };
  for (int total = 0; total <= cap; ++total) {
    const std::size_t before = result.size();
    fill(fill, 0, total);
    if (total > 0 && result.size() == before) break;  // no larger admissible mass either
  }
  return result;
}

PpObjective PpObjective::cardinality_power(int alpha) {
  if (alpha < 2 || alpha > 4) throw InvalidInstance("cardinality power must be 2, 3 or 4");
  PpObjective objective;
  objective.kind = Kind::kCardinalityPower;
  objective.alpha = alpha;
  return objective;
}

PpObjective PpObjective::chi_hardcore(PsiFunction psi) {
  PpObjective objective;
  objective.kind = Kind::kChiHardcore;
  objective.psi = std::move(psi);
  return objective;
}

ExtendedRational objective_value(const PpObjective& objective, const FiniteMetricSpace& space,
                                 const Configuration& config) {
  switch (objective.kind) {
    case PpObjective::Kind::kNone:
      return ExtendedRational(0);
    case PpObjective::Kind::kCardinalityPower: {
      Rational value(1);
      for (int k = 0; k < objective.alpha; ++k) value *= config.total_mass();
      return ExtendedRational(value);
    }
    case PpObjective::Kind::kChiHardcore: {
      ExtendedRational total(0);
      for (int i = 0; i < config.size(); ++i) {
        if (config[i] == 0) continue;
        total += (*objective.psi)(Rational(0)).scaled(Rational(config[i] * (config[i] - 1)));
        for (int j = 0; j < config.size(); ++j)
          if (j != i && config[j] != 0)
            total += (*objective.psi)(space.distance(i, j)).scaled(Rational(config[i] * config[j]));
      }
      return total;
    }
  }
  return ExtendedRational(0);
}

PpMoments pp_moments(const ConfigMixture& mixture, int n) {
  PpMoments moments{MatrixQ::Zero(n, n), VectorQ::Zero(n)};
  for (const auto& atom : mixture.atoms) {
    const Configuration& m = atom.config;
    for (int i = 0; i < n; ++i) {
      if (m[i] == 0) continue;
      moments.rho1(i) += atom.weight * m[i];
      moments.rho(i, i) += atom.weight * (m[i] * (m[i] - 1));
      for (int j = 0; j < n; ++j)
        if (j != i && m[j] != 0) moments.rho(i, j) += atom.weight * (m[i] * m[j]);
    }
  }
  return moments;
}

namespace {

struct RowLayout {
  int n;
  bool intensity;
  int pair(int i, int j) const {
    if (i > j) std::swap(i, j);
    return 1 + i * n - i * (i - 1) / 2 + (j - i);
  }
  int intensity_row(int i) const { return 1 + n * (n + 1) / 2 + i; }
  int rows() const { return 1 + n * (n + 1) / 2 + (intensity ? n : 0); }
};

// Objective coefficients in the configuration-search form, exact.
struct ObjectiveData {
  bool active = false;
  MatrixQ pair;     // i < j: 2 psi(d_ij)
  VectorQ diagonal;  // psi(0)
  std::vector<Rational> mass_cost;
};

// Restricts the region to configurations of finite objective and returns
// the finite objective coefficients. Reports whether anything was excluded.
ObjectiveData objective_data(const PpObjective& objective, const CorrelationTarget& target,
                             ConfigProblem<Rational>& region, bool& excluded) {
  const int n = target.size();
  ObjectiveData data;
  data.pair = MatrixQ::Zero(n, n);
  data.diagonal = VectorQ::Zero(n);
  excluded = false;
  if (objective.kind == PpObjective::Kind::kNone) return data;
  data.active = true;
  if (objective.kind == PpObjective::Kind::kCardinalityPower) {
    for (int N = 0; N <= target.cap(); ++N) {
      Rational value(1);
      for (int k = 0; k < objective.alpha; ++k) value *= N;
      data.mass_cost.push_back(value);
    }
    return data;
  }
  const PsiFunction& psi = *objective.psi;
  const ExtendedRational at_zero = psi(Rational(0));
  for (int i = 0; i < n; ++i) {
    int& top = region.max_multiplicity[static_cast<std::size_t>(i)];
    if (at_zero.is_infinite()) {
      if (top > 1) excluded = true;
      top = std::min(top, 1);
    } else {
      data.diagonal(i) = at_zero.value();
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const ExtendedRational value = psi(target.space().distance(i, j));
      if (!value.is_infinite()) {
        data.pair(i, j) = 2 * value.value();
        continue;
      }
      if (region.forbidden.empty())
        region.forbidden.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
      auto& row_i = region.forbidden[static_cast<std::size_t>(i)];
      if (!row_i[static_cast<std::size_t>(j)] && target.cap() >= 2) excluded = true;
      row_i[static_cast<std::size_t>(j)] = true;
      region.forbidden[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
    }
  return data;
}

template <typename Scalar>
ConfigProblem<Scalar> cast_problem(const ConfigProblem<Rational>& source) {
  ConfigProblem<Scalar> result;
  result.cap = source.cap;
  result.constant = ScalarTraits<Scalar>::from(source.constant);
  result.linear = Vector<Scalar>(source.linear.size());
  for (Eigen::Index i = 0; i < source.linear.size(); ++i)
    result.linear(i) = ScalarTraits<Scalar>::from(source.linear(i));
  result.pair = cast_matrix<Scalar>(source.pair);
  result.diagonal = Vector<Scalar>(source.diagonal.size());
  for (Eigen::Index i = 0; i < source.diagonal.size(); ++i)
    result.diagonal(i) = ScalarTraits<Scalar>::from(source.diagonal(i));
  for (const auto& v : source.mass_cost) result.mass_cost.push_back(ScalarTraits<Scalar>::from(v));
  result.max_multiplicity = source.max_multiplicity;
  result.forbidden = source.forbidden;
  return result;
}

template <typename Scalar>
class ConfigPricer {
 public:
  using Key = Configuration;

  ConfigPricer(RowLayout layout, const ConfigProblem<Rational>& region, const ObjectiveData& data,
               Scalar tolerance)
      : layout_(layout), region_(cast_problem<Scalar>(region)), tolerance_(std::move(tolerance)) {
    ConfigProblem<Rational> cost = region;
    cost.pair = data.pair;
    cost.diagonal = data.diagonal;
    cost.mass_cost = data.mass_cost;
    cost_ = cast_problem<Scalar>(cost);
  }

  SparseVector<Scalar> column(const Configuration& m) const {
    SparseVector<Scalar> col(layout_.rows());
    col.insert(0) = Scalar(1);
    for (int i = 0; i < layout_.n; ++i) {
      if (m[i] == 0) continue;
      if (m[i] > 1) col.coeffRef(layout_.pair(i, i)) = Scalar(m[i] * (m[i] - 1));
      for (int j = i + 1; j < layout_.n; ++j)
        if (m[j] != 0) col.coeffRef(layout_.pair(i, j)) = Scalar(m[i] * m[j]);
      if (layout_.intensity) col.coeffRef(layout_.intensity_row(i)) = Scalar(m[i]);
    }
    return col;
  }

  Scalar cost(const Configuration& m) const { return cost_.evaluate(m); }

  std::vector<Priced<Configuration, Scalar>> price(const Vector<Scalar>& y, bool phase_one,
                                                   std::size_t max_columns) const {
    ConfigProblem<Scalar> problem = region_;
    const int n = layout_.n;
    problem.constant = -y(0);
    for (int i = 0; i < n; ++i) {
      problem.diagonal(i) = -y(layout_.pair(i, i));
      if (layout_.intensity) problem.linear(i) = -y(layout_.intensity_row(i));
      for (int j = i + 1; j < n; ++j) problem.pair(i, j) = -y(layout_.pair(i, j));
    }
    if (!phase_one) {
      problem.diagonal += cost_.diagonal;
      problem.pair += cost_.pair;
      problem.mass_cost = cost_.mass_cost;
    }
    std::vector<Priced<Configuration, Scalar>> result;
    for (auto& item : config_lowest(problem, max_columns))
      if (item.value < -tolerance_) result.push_back({item.minimizer, item.value});
    return result;
  }

 private:
  RowLayout layout_;
  ConfigProblem<Scalar> region_;
  ConfigProblem<Scalar> cost_;
  Scalar tolerance_;
};

template <typename Scalar>
Vector<Scalar> target_rhs(const CorrelationTarget& target, const RowLayout& layout) {
  Vector<Scalar> rhs = Vector<Scalar>::Zero(layout.rows());
  rhs(0) = Scalar(1);
  for (int i = 0; i < layout.n; ++i) {
    for (int j = i; j < layout.n; ++j)
      rhs(layout.pair(i, j)) = ScalarTraits<Scalar>::from(target.rho()(i, j));
    if (layout.intensity) rhs(layout.intensity_row(i)) = ScalarTraits<Scalar>::from((*target.rho1())(i));
  }
  return rhs;
}

std::vector<Configuration> initial_configs(const ConfigProblem<Rational>& region) {
  const int n = region.size();
  std::vector<Configuration> initial{Configuration::empty(n)};
  if (region.cap >= 1)
    for (int i = 0; i < n; ++i) {
      Configuration m = Configuration::empty(n);
      m.multiplicity[static_cast<std::size_t>(i)] = 1;
      if (region.admissible(m)) initial.push_back(std::move(m));
    }
  return initial;
}

Rational pairing_of(const CorrelationTarget& target, const InfeasibilityCertificate& cert) {
  Rational value = cert.c;
  for (int i = 0; i < target.size(); ++i)
    for (int j = i; j < target.size(); ++j) value += cert.a(i, j) * target.rho()(i, j);
  if (target.rho1())
    for (int i = 0; i < target.size(); ++i) value += cert.b(i) * (*target.rho1())(i);
  return value;
}

ConfigProblem<Rational> functional_of(const CorrelationTarget& target, const MatrixQ& a,
                                      const VectorQ& b) {
  ConfigProblem<Rational> problem = target.admissible_region();
  for (int i = 0; i < target.size(); ++i) {
    problem.diagonal(i) = a(i, i);
    problem.linear(i) = b.size() == 0 ? Rational(0) : b(i);
    for (int j = i + 1; j < target.size(); ++j) problem.pair(i, j) = a(i, j);
  }
  return problem;
}

// Certificate whose functional -(term) vanishes on every admissible
// configuration because the term is structurally zero there.
InfeasibilityCertificate vanishing_certificate(const CorrelationTarget& target, int i, int j,
                                               bool intensity) {
  const int n = target.size();
  InfeasibilityCertificate cert;
  cert.c = 0;
  cert.a = MatrixQ::Zero(n, n);
  cert.b = VectorQ::Zero(n);
  if (intensity)
    cert.b(i) = -1;
  else
    cert.a(i, j) = cert.a(j, i) = -1;
  cert.gap = -pairing_of(target, cert);
  cert.minimizer.assign(static_cast<std::size_t>(n), 0);
  return cert;
}

Rational mixture_residual(const CorrelationTarget& target, const ConfigMixture& mixture) {
  const PpMoments moments = pp_moments(mixture, target.size());
  Rational worst = abs(mixture.total_weight() - 1);
  for (int i = 0; i < target.size(); ++i) {
    for (int j = 0; j < target.size(); ++j)
      worst = std::max(worst, abs(moments.rho(i, j) - target.rho()(i, j)));
    if (target.rho1()) worst = std::max(worst, abs(moments.rho1(i) - (*target.rho1())(i)));
  }
  return worst;
}

ExtendedRational mixture_objective(const PpObjective& objective, const CorrelationTarget& target,
                                   const ConfigMixture& mixture) {
  ExtendedRational total(0);
  for (const auto& atom : mixture.atoms)
    total += objective_value(objective, target.space(), atom.config).scaled(atom.weight);
  return total;
}

struct Solve {
  PpRealization result;
  bool infeasible = false;
};

Solve solve_lp(const CorrelationTarget& target, const PpObjective& objective,
               const ConfigProblem<Rational>& region, const ObjectiveData& data,
               const PpRealizeOptions& options) {
  const int n = target.size();
  const RowLayout layout{n, target.rho1().has_value()};
  const bool exact = n <= options.max_exact;
  Solve solve;
  PpRealization& result = solve.result;
  result.method = exact ? "exact" : "column-generation";
  const std::vector<Configuration> initial = initial_configs(region);

  ConfigPricer<double> float_pricer(layout, region, data, options.tolerance);
  auto floating = column_generation<double>(target_rhs<double>(target, layout), float_pricer,
                                            initial, data.active, options.generation);
  result.rounds = floating.rounds;

  if (exact) {
    ConfigPricer<Rational> exact_pricer(layout, region, data, Rational(0));
    const auto* warm = floating.basis.empty() ? nullptr : &floating.basis;
    auto solved = column_generation<Rational>(target_rhs<Rational>(target, layout), exact_pricer,
                                              initial, data.active, options.generation, warm);
    result.rounds += solved.rounds;
    if (solved.status == GenerationStatus::kFeasible) {
      ConfigMixture mixture;
      for (auto& [config, weight] : solved.solution) mixture.atoms.push_back({config, weight});
      mixture.canonicalize();
      result.residual = mixture_residual(target, mixture);
      result.verdict = Verdict::kFeasible;
      if (data.active) {
        result.objective = mixture_objective(objective, target, mixture);
        result.dual_objective = solved.dual_objective;
      }
      result.mixture = std::move(mixture);
      return solve;
    }
    if (solved.status == GenerationStatus::kInfeasible) {
      MatrixQ a(n, n);
      VectorQ b = VectorQ::Zero(n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = -solved.farkas(layout.pair(i, j));
        if (layout.intensity) b(i) = -solved.farkas(layout.intensity_row(i));
      }
      solve.infeasible = true;
      result.verdict = Verdict::kInfeasible;
      result.certificate = normalize_pp_certificate(target, std::move(a), std::move(b));
      return solve;
    }
    result.note = "exact re-solve failed: " + solved.detail;
    return solve;
  }

  if (floating.status == GenerationStatus::kFeasible) {
    std::optional<ConfigMixture> best;
    Rational best_residual(0);
    for (bool snap : {true, false}) {
      ConfigMixture candidate;
      for (const auto& [config, weight] : floating.solution)
        if (weight >= 1e-12)
          candidate.atoms.push_back({config, snap ? rationalize(weight, 1000000) : from_double(weight)});
      candidate.canonicalize();
      const Rational residual = mixture_residual(target, candidate);
      if (!best || residual < best_residual) {
        best = std::move(candidate);
        best_residual = residual;
      }
    }
    result.residual = best_residual;
    if (best_residual > from_double(options.tolerance)) {
      result.note = "floating solution failed exact residual check";
      return solve;
    }
    result.verdict = Verdict::kFeasible;
    if (data.active) {
      result.objective = mixture_objective(objective, target, *best);
      result.dual_objective = from_double(floating.dual_objective);
    }
    result.mixture = std::move(best);
    return solve;
  }
  if (floating.status == GenerationStatus::kInfeasible) {
    solve.infeasible = true;
    double scale = 0;
    for (Eigen::Index r = 1; r < floating.farkas.size(); ++r)
      scale = std::max(scale, std::abs(floating.farkas(r)));
    for (bool snap : {true, false}) {
      if (scale == 0) break;
      MatrixQ a(n, n);
      VectorQ b = VectorQ::Zero(n);
      auto convert = [&](double v) {
        return snap ? rationalize(-v / scale, 1000000) : from_double(-v / scale);
      };
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = convert(floating.farkas(layout.pair(i, j)));
        if (layout.intensity) b(i) = convert(floating.farkas(layout.intensity_row(i)));
      }
      if (a.isZero() && b.isZero()) continue;
      InfeasibilityCertificate cert = normalize_pp_certificate(target, std::move(a), std::move(b));
      if (cert.gap > 0) {
        result.verdict = Verdict::kInfeasible;
        result.certificate = std::move(cert);
        return solve;
      }
    }
    result.note = "floating Farkas ray failed exact verification";
    return solve;
  }
  result.note = floating.detail;
  return solve;
}

}  // namespace

InfeasibilityCertificate normalize_pp_certificate(const CorrelationTarget& target, MatrixQ a,
                                                  VectorQ b) {
  const int n = target.size();
  if (b.size() == 0) b = VectorQ::Zero(n);
  if (a.rows() != n || a.cols() != n || b.size() != n)
    throw InvalidInstance("certificate has wrong dimensions");
  Rational scale(0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) scale = std::max(scale, abs(a(i, j)));
    scale = std::max(scale, abs(b(i)));
  }
  if (scale == 0) throw InvalidInstance("certificate is zero");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = a(j, i);
  a /= scale;
  b /= scale;
  const auto found = config_min(functional_of(target, a, b));
  InfeasibilityCertificate cert;
  cert.c = -found.value;
  cert.a = std::move(a);
  cert.b = std::move(b);
  cert.minimizer = found.minimizer.multiplicity;
  cert.gap = -pairing_of(target, cert);
  return cert;
}

CertificateCheck verify_pp_certificate(const CorrelationTarget& target,
                                       const InfeasibilityCertificate& certificate) {
  CertificateCheck check;
  const int n = target.size();
  if (certificate.a.rows() != n || certificate.a.cols() != n ||
      (certificate.b.size() != 0 && certificate.b.size() != n)) {
    check.problems.push_back("certificate has wrong dimensions");
    return check;
  }
  const VectorQ b = certificate.b.size() == 0 ? VectorQ(VectorQ::Zero(n)) : certificate.b;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (certificate.a(i, j) != certificate.a(j, i))
        check.problems.push_back("coefficient matrix is not symmetric");
  if (!target.rho1() && !b.isZero())
    check.problems.push_back("linear part given but the target has no intensity");
  if (!check.problems.empty()) return check;

  const auto found = config_min(functional_of(target, certificate.a, b));
  check.minimum = certificate.c + found.value;
  check.argmin = found.minimizer.multiplicity;
  InfeasibilityCertificate copy = certificate;
  copy.b = b;
  check.pairing = pairing_of(target, copy);
  check.sound = check.minimum >= 0 && check.pairing < 0;
  if (check.minimum < 0)
    check.problems.push_back("functional is negative on an admissible configuration (minimum " +
                             format_rational(check.minimum) + ")");
  if (check.pairing >= 0)
    check.problems.push_back("pairing with the target is " + format_rational(check.pairing) +
                             ", not negative");

  bool normalized = true;
  Rational scale(0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) scale = std::max(scale, abs(certificate.a(i, j)));
    scale = std::max(scale, abs(b(i)));
  }
  if (scale != 1) {
    normalized = false;
    check.problems.push_back("max coefficient magnitude is " + format_rational(scale) + ", expected 1");
  }
  if (check.minimum != 0) {
    normalized = false;
    check.problems.push_back("c is not minus the minimum of the functional");
  }
  if (certificate.gap != -check.pairing) {
    normalized = false;
    check.problems.push_back("stated gap differs from recomputed " + format_rational(-check.pairing));
  }
  const auto region = target.admissible_region();
  if (static_cast<int>(certificate.minimizer.size()) != n ||
      !region.admissible(Configuration(certificate.minimizer)) ||
      certificate.c + functional_of(target, certificate.a, b).evaluate(Configuration(certificate.minimizer)) !=
          check.minimum) {
    normalized = false;
    check.problems.push_back("stated minimizer does not attain the minimum");
  }
  check.normalized = normalized;
  return check;
}

PpRealization realize_pp(const CorrelationTarget& target, const PpObjective& objective,
                         const PpRealizeOptions& options) {
  const int n = target.size();
  PpRealization result;
  result.method = "screen";

  // Structural screens: a positive atom on a pair that no admissible
  // configuration can populate.
  if (target.hardcore_eps()) {
    const HardcoreSupport support =
        check_hardcore_support(target, *target.hardcore_eps(), target.strict_hardcore());
    if (!support.ok) {
      const auto& atom = support.offending.front();
      result.verdict = Verdict::kInfeasible;
      result.method = "hardcore-support";
      result.certificate = vanishing_certificate(target, atom.i, atom.j, false);
      result.note = "positive correlation inside the hard-core distance";
      return result;
    }
  }
  for (const auto& atom : target.atoms()) {
    const bool diagonal_blocked = atom.i == atom.j && (target.simple() || target.cap() < 2);
    const bool pair_blocked = atom.i != atom.j && target.cap() < 2;
    if (diagonal_blocked || pair_blocked) {
      result.verdict = Verdict::kInfeasible;
      result.certificate = vanishing_certificate(target, atom.i, atom.j, false);
      result.note = diagonal_blocked && target.simple()
                        ? "simple processes have zero diagonal correlation"
                        : "cardinality cap admits no particle pair";
      return result;
    }
  }
  if (target.rho1() && target.cap() < 1)
    for (int i = 0; i < n; ++i)
      if ((*target.rho1())(i) > 0) {
        result.verdict = Verdict::kInfeasible;
        result.certificate = vanishing_certificate(target, i, i, true);
        result.note = "cardinality cap admits no particle";
        return result;
      }

  ConfigProblem<Rational> region = target.admissible_region();
  bool excluded = false;
  const ObjectiveData data = objective_data(objective, target, region, excluded);
  Solve solve = solve_lp(target, objective, region, data, options);
  if (solve.infeasible && excluded) {
    // Every realisation must charge configurations of infinite objective.
    const ConfigProblem<Rational> full = target.admissible_region();
    bool unused = false;
    ConfigProblem<Rational> scratch = full;
    const ObjectiveData none = objective_data(PpObjective::none(), target, scratch, unused);
    Solve plain = solve_lp(target, PpObjective::none(), full, none, options);
    if (plain.result.verdict == Verdict::kFeasible) {
      plain.result.objective = ExtendedRational::infinity();
      plain.result.note = "every realisation has infinite expected objective";
    }
    plain.result.rounds += solve.result.rounds;
    return plain.result;
  }
  return solve.result;
}

std::optional<PositivityViolation> positivity_check(const CorrelationTarget& target,
                                                    const MatrixQ& h) {
  const int n = target.size();
  Rational phi(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) phi += target.rho()(i, j) * h(i, j);
  ConfigProblem<Rational> problem = target.admissible_region();
  for (int i = 0; i < n; ++i) {
    problem.diagonal(i) = h(i, i);
    for (int j = i + 1; j < n; ++j) problem.pair(i, j) = 2 * h(i, j);
  }
  const auto found = config_min(problem);
  if (!(phi < found.value)) return std::nullopt;
  return PositivityViolation{0, h, phi, found.value, found.minimizer};
}

PositivityReport positivity_screen(const CorrelationTarget& target, int trials,
                                   std::uint64_t seed) {
  const int n = target.size();
  std::mt19937_64 rng(seed);
  PositivityReport report;
  report.trials = trials;
  const ConfigProblem<Rational> region = target.admissible_region();
  const ConfigProblem<double> region_f = cast_problem<double>(region);
  const Matrix<double> rho_f = cast_matrix<double>(target.rho());
  for (int trial = 0; trial < trials; ++trial) {
    Matrix<double> h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        h(i, j) = h(j, i) = 2 * u - 1;
      }
    // Floating pre-screen; only near-violations are settled exactly.
    ConfigProblem<double> problem = region_f;
    for (int i = 0; i < n; ++i) {
      problem.diagonal(i) = h(i, i);
      for (int j = i + 1; j < n; ++j) problem.pair(i, j) = 2 * h(i, j);
    }
    const double phi = rho_f.cwiseProduct(h).sum();
    if (phi >= config_min(problem).value + 1e-9) continue;
    MatrixQ exact(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) exact(i, j) = from_double(h(i, j));
    if (auto violation = positivity_check(target, exact)) {
      violation->trial = trial;
      report.violations.push_back(std::move(*violation));
    }
  }
  return report;
}

}  // namespace realkit
