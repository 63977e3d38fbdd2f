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

#include "realkit/set_realizer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "realkit/errors.hpp"

namespace realkit {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kFeasible:
      return "feasible";
    case Verdict::kInfeasible:
      return "infeasible";
    case Verdict::kIndeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

TwoPointTarget::TwoPointTarget(MatrixQ p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols() || p_.rows() < 1)
    throw InvalidInstance("/p: covering matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < p_.rows(); ++i)
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      const std::string where = "/p/" + std::to_string(i) + "/" + std::to_string(j);
      if (p_(i, j) < 0 || p_(i, j) > 1)
        throw InvalidInstance(where + ": probability " + format_rational(p_(i, j)) +
                              " outside [0, 1]");
      if (p_(i, j) != p_(j, i)) throw InvalidInstance(where + ": matrix is not symmetric");
    }
}

std::vector<FrechetViolation> TwoPointTarget::frechet_violations() const {
  std::vector<FrechetViolation> result;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) {
      const Rational& pij = p_(i, j);
      if (pij > std::min(p_(i, i), p_(j, j))) result.push_back({i, j, true});
      if (pij < p_(i, i) + p_(j, j) - 1) result.push_back({i, j, false});
    }
  return result;
}

TwoPointTarget TwoPointTarget::permuted(const std::vector<int>& perm) const {
  MatrixQ q(size(), size());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      q(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = p_(i, j);
  return TwoPointTarget(std::move(q));
}

Rational SubsetMixture::total_weight() const {
  Rational total(0);
  for (const auto& atom : atoms) total += atom.weight;
  return total;
}

void SubsetMixture::canonicalize() {
  std::map<Subset, Rational, SubsetLexLess> merged;
  for (const auto& atom : atoms) merged[atom.subset] += atom.weight;
  atoms.clear();
  for (auto& [subset, weight] : merged)
    if (weight != 0) atoms.push_back({subset, weight});
}

Rational evaluate_g(const Rational& c, const MatrixQ& a, Subset subset) {
  return evaluate_g<Rational>(c, a, subset);
}

namespace {

int pair_row(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // Rows: 0 is the normalisation, then (0,0),(0,1),..,(0,n-1),(1,1),...
  return 1 + i * n - i * (i - 1) / 2 + (j - i);
}

int row_count(int n) { return 1 + n * (n + 1) / 2; }

struct SubsetKeyLess {
  bool operator()(Subset a, Subset b) const { return a.bits() < b.bits(); }
};

// Columns are subsets F with entries 1 in the normalisation row and in every
// pair row (i, j) with i, j in F. Reduced cost of F is minus the dual
// functional, so pricing is a quadratic set minimisation.
template <typename Scalar>
class SubsetPricer {
 public:
  using Key = Subset;

  SubsetPricer(int n, bool enumerate, Scalar tolerance)
      : n_(n), enumerate_(enumerate), tolerance_(std::move(tolerance)) {}

  SparseVector<Scalar> column(Subset subset) const {
    SparseVector<Scalar> col(row_count(n_));
    col.insert(0) = Scalar(1);
    const std::vector<int> members = subset.indices();
    for (std::size_t p = 0; p < members.size(); ++p)
      for (std::size_t q = p; q < members.size(); ++q)
        col.coeffRef(pair_row(n_, members[p], members[q])) = Scalar(1);
    return col;
  }
  Scalar cost(Subset) const { return Scalar(0); }

  std::vector<Priced<Subset, Scalar>> price(const Vector<Scalar>& y, bool,
                                            std::size_t max_columns) const {
    Matrix<Scalar> a = Matrix<Scalar>::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) a(i, j) = -y(pair_row(n_, i, j));
    const Scalar c = -y(0);
    std::vector<QuboResult<Scalar>> found;
    if (enumerate_)
      found = qubo_lowest_enumerate(c, a, max_columns);
    else
      found.push_back(qubo_min(c, a));
    std::vector<Priced<Subset, Scalar>> result;
    for (auto& item : found)
      if (item.value < -tolerance_) result.push_back({item.minimizer, item.value});
    return result;
  }

 private:
  int n_;
  bool enumerate_;
  Scalar tolerance_;
};

template <typename Scalar>
Vector<Scalar> target_rhs(const TwoPointTarget& target) {
  const int n = target.size();
  Vector<Scalar> rhs(row_count(n));
  rhs(0) = Scalar(1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) rhs(pair_row(n, i, j)) = ScalarTraits<Scalar>::from(target(i, j));
  return rhs;
}

std::vector<Subset> initial_subsets(int n) {
  std::vector<Subset> initial{Subset(), Subset::full(n)};
  for (int i = 0; i < n; ++i) initial.push_back(Subset(std::uint32_t{1} << i));
  return initial;
}

Rational mixture_residual(const TwoPointTarget& target, const SubsetMixture& mixture) {
  const MatrixQ moments = moments_of_mixture(mixture).p();
  Rational worst = abs(mixture.total_weight() - 1);
  for (int i = 0; i < target.size(); ++i)
    for (int j = i; j < target.size(); ++j) worst = std::max(worst, abs(moments(i, j) - target(i, j)));
  return worst;
}

// Moments of a mixture whose weights need not sum to one.
MatrixQ raw_moments(int n, const std::vector<SubsetAtom>& atoms) {
  MatrixQ m = MatrixQ::Zero(n, n);
  for (const auto& atom : atoms) {
    const std::vector<int> members = atom.subset.indices();
    for (int i : members)
      for (int j : members) m(i, j) += atom.weight;
  }
  return m;
}

std::optional<SubsetMixture> mixture_from_floats(
    const TwoPointTarget& target, const std::vector<std::pair<Subset, double>>& solution,
    double tolerance, Rational& residual) {
  const int n = target.size();
  std::optional<SubsetMixture> best;
  for (bool snap : {true, false}) {
    SubsetMixture candidate{n, {}};
    for (const auto& [subset, weight] : solution) {
      if (weight < 1e-12) continue;
      candidate.atoms.push_back({subset, snap ? rationalize(weight, 1000000) : from_double(weight)});
    }
    candidate.canonicalize();
    const MatrixQ m = raw_moments(n, candidate.atoms);
    Rational worst = abs(candidate.total_weight() - 1);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) worst = std::max(worst, abs(m(i, j) - target(i, j)));
    if (!best || worst < residual) {
      best = candidate;
      residual = worst;
    }
    if (residual == 0) break;
  }
  if (residual > from_double(tolerance) || abs(best->total_weight() - 1) > Rational(1, 1000000000000LL))
    return std::nullopt;
  return best;
}

InfeasibilityCertificate frechet_certificate(const TwoPointTarget& target,
                                             const FrechetViolation& v) {
  const int n = target.size();
  MatrixQ a = MatrixQ::Zero(n, n);
  if (v.upper) {
    // 1{k in F} - 1{i, j in F} >= 0 with k the point of smaller probability.
    const int k = target(v.i, v.i) <= target(v.j, v.j) ? v.i : v.j;
    a(k, k) = 1;
    a(v.i, v.j) = a(v.j, v.i) = -1;
  } else {
    // (1 - 1{i in F})(1 - 1{j in F}) >= 0
    a(v.i, v.i) = a(v.j, v.j) = -1;
    a(v.i, v.j) = a(v.j, v.i) = 1;
  }
  return normalize_set_certificate(target, std::move(a));
}

Rational pairing_of(const TwoPointTarget& target, const Rational& c, const MatrixQ& a) {
  Rational value = c;
  for (int i = 0; i < target.size(); ++i)
    for (int j = i; j < target.size(); ++j) value += a(i, j) * target(i, j);
  return value;
}

MatrixQ symmetric_upper(const MatrixQ& a) {
  MatrixQ s = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) s(i, j) = a(j, i);
  return s;
}

std::optional<InfeasibilityCertificate> certificate_from_farkas_floats(
    const TwoPointTarget& target, const Vector<double>& y) {
  const int n = target.size();
  Matrix<double> a(n, n);
  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      a(i, j) = a(j, i) = -y(pair_row(n, i, j));
      scale = std::max(scale, std::abs(a(i, j)));
    }
  if (scale == 0) return std::nullopt;
  for (bool snap : {true, false}) {
    MatrixQ exact(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = a(i, j) / scale;
        exact(i, j) = exact(j, i) = snap ? rationalize(v, 1000000) : from_double(v);
      }
    if (exact.cwiseAbs().maxCoeff() == 0) continue;
    InfeasibilityCertificate cert = normalize_set_certificate(target, std::move(exact));
    if (cert.gap > 0) return cert;
  }
  return std::nullopt;
}

}  // namespace

InfeasibilityCertificate normalize_set_certificate(const TwoPointTarget& target, MatrixQ a) {
  const int n = target.size();
  if (a.rows() != n || a.cols() != n) throw InvalidInstance("certificate matrix has wrong size");
  a = symmetric_upper(a);
  Rational scale(0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) scale = std::max(scale, abs(a(i, j)));
  if (scale == 0) throw InvalidInstance("certificate matrix is zero");
  a /= scale;
  const QuboResult<Rational> quad = qubo_min(Rational(0), a);
  InfeasibilityCertificate cert;
  cert.c = -quad.value;
  cert.gap = -pairing_of(target, cert.c, a);
  cert.minimizer.assign(static_cast<std::size_t>(n), 0);
  for (int i : quad.minimizer.indices()) cert.minimizer[static_cast<std::size_t>(i)] = 1;
  cert.a = std::move(a);
  return cert;
}

CertificateCheck verify_set_certificate(const TwoPointTarget& target,
                                        const InfeasibilityCertificate& certificate) {
  CertificateCheck check;
  const int n = target.size();
  if (certificate.a.rows() != n || certificate.a.cols() != n) {
    check.problems.push_back("coefficient matrix has wrong size");
    return check;
  }
  if (certificate.b.size() != 0 && !certificate.b.isZero())
    check.problems.push_back("set certificates carry no linear part");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (certificate.a(i, j) != certificate.a(j, i))
        check.problems.push_back("coefficient matrix is not symmetric at (" + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
  const QuboResult<Rational> found = qubo_min(certificate.c, certificate.a);
  check.minimum = found.value;
  check.argmin = found.minimizer.indices();
  check.pairing = pairing_of(target, certificate.c, certificate.a);
  check.sound = check.problems.empty() && check.minimum >= 0 && check.pairing < 0;
  if (check.minimum < 0)
    check.problems.push_back("functional is negative on subset (minimum " +
                             format_rational(check.minimum) + ")");
  if (check.pairing >= 0)
    check.problems.push_back("pairing with the target is " + format_rational(check.pairing) +
                             ", not negative");

  bool normalized = true;
  Rational scale(0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) scale = std::max(scale, abs(certificate.a(i, j)));
  if (scale != 1) {
    normalized = false;
    check.problems.push_back("max |a_ij| is " + format_rational(scale) + ", expected 1");
  }
  if (check.minimum != 0) {
    normalized = false;
    check.problems.push_back("c is not minus the minimum of the quadratic part");
  }
  if (certificate.gap != -check.pairing) {
    normalized = false;
    check.problems.push_back("stated gap " + format_rational(certificate.gap) +
                             " differs from recomputed " + format_rational(-check.pairing));
  }
  if (static_cast<int>(certificate.minimizer.size()) != n) {
    normalized = false;
    check.problems.push_back("minimizer has wrong length");
  } else {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      const int m = certificate.minimizer[static_cast<std::size_t>(i)];
      if (m != 0 && m != 1) normalized = false;
      if (m == 1) members.push_back(i);
    }
    if (!normalized || evaluate_g(certificate.c, certificate.a, Subset::of(members)) != check.minimum) {
      normalized = false;
      check.problems.push_back("stated minimizer does not attain the minimum");
    }
  }
  check.normalized = normalized;
  return check;
}

TwoPointTarget moments_of_mixture(const SubsetMixture& mixture) {
  return TwoPointTarget(raw_moments(mixture.points, mixture.atoms));
}

SetRealization realize_subsets(const TwoPointTarget& target, const SetRealizeOptions& options) {
  const int n = target.size();
  SetRealization result;
  result.note =
      "finite-carrier verdict; closedness of a realizing random set on a continuum carrier "
      "is not assessed";

  if (n == 1) {
    const Rational& p = target(0, 0);
    SubsetMixture mixture{1, {{Subset(), 1 - p}, {Subset(1U), p}}};
    mixture.canonicalize();
    result.verdict = Verdict::kFeasible;
    result.mixture = std::move(mixture);
    result.method = "trivial";
    return result;
  }
  if (options.frechet_screen) {
    const auto violations = target.frechet_violations();
    if (!violations.empty()) {
      result.verdict = Verdict::kInfeasible;
      result.certificate = frechet_certificate(target, violations.front());
      result.gap = result.certificate->gap;
      result.method = "frechet";
      return result;
    }
  }
  if (n > kMaxSubsetPoints)
    throw CapExceeded("realize_subsets: " + std::to_string(n) +
                      " points exceeds the pricing cap of " + std::to_string(kMaxSubsetPoints));

  const bool exact = n <= options.max_exact;
  result.method = exact ? "exact" : "column-generation";
  const std::vector<Subset> initial = initial_subsets(n);
  SubsetPricer<double> float_pricer(n, n <= kQuboEnumerationLimit, options.tolerance);
  auto floating = column_generation<double, SubsetPricer<double>, SubsetKeyLess>(
      target_rhs<double>(target), float_pricer, initial, false, options.generation);
  result.rounds = floating.rounds;

  if (exact) {
    // Re-solve in exact arithmetic from the floating basis; pricing scans all
    // 2^n subsets exactly, so the verdict is certified.
    SubsetPricer<Rational> exact_pricer(n, true, Rational(0));
    const auto* warm = floating.basis.empty() ? nullptr : &floating.basis;
    auto solved = column_generation<Rational, SubsetPricer<Rational>, SubsetKeyLess>(
        target_rhs<Rational>(target), exact_pricer, initial, false, options.generation, warm);
    result.rounds += solved.rounds;
    if (solved.status == GenerationStatus::kFeasible) {
      SubsetMixture mixture{n, {}};
      for (auto& [subset, weight] : solved.solution) mixture.atoms.push_back({subset, weight});
      mixture.canonicalize();
      result.residual = mixture_residual(target, mixture);
      result.verdict = Verdict::kFeasible;
      result.mixture = std::move(mixture);
      return result;
    }
    if (solved.status == GenerationStatus::kInfeasible) {
      MatrixQ a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = -solved.farkas(pair_row(n, i, j));
      result.certificate = normalize_set_certificate(target, std::move(a));
      result.gap = result.certificate->gap;
      result.verdict = Verdict::kInfeasible;
      return result;
    }
    result.note = "exact re-solve failed: " + solved.detail;
    return result;
  }

  // Floating column generation: post-verify whichever verdict came out.
  if (floating.status == GenerationStatus::kFeasible) {
    Rational residual(0);
    std::vector<std::pair<Subset, double>> solution(floating.solution.begin(),
                                                    floating.solution.end());
    if (auto mixture = mixture_from_floats(target, solution, options.tolerance, residual)) {
      result.verdict = Verdict::kFeasible;
      result.mixture = std::move(mixture);
      result.residual = residual;
      return result;
    }
    result.residual = residual;
    result.note = "floating solution failed exact residual check";
    return result;
  }
  if (floating.status == GenerationStatus::kInfeasible) {
    if (auto cert = certificate_from_farkas_floats(target, floating.farkas)) {
      result.verdict = Verdict::kInfeasible;
      result.gap = cert->gap;
      result.certificate = std::move(cert);
      return result;
    }
    result.note = "floating Farkas ray failed exact verification";
    return result;
  }
  result.note = floating.detail;
  return result;
}

void validate_group(const std::vector<Permutation>& group, int n) {
  if (group.empty()) throw InvalidGroup("group is empty");
  std::set<Permutation> members;
  for (const auto& g : group) {
    if (static_cast<int>(g.size()) != n)
      throw InvalidGroup("permutation has length " + std::to_string(g.size()) + ", expected " +
                         std::to_string(n));
    std::vector<int> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
      if (sorted[static_cast<std::size_t>(i)] != i) throw InvalidGroup("not a permutation");
    members.insert(g);
  }
  for (const auto& g : members) {
    Permutation inverse(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inverse[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])] = i;
    if (members.count(inverse) == 0) throw InvalidGroup("not closed under inverses");
    for (const auto& h : members) {
      Permutation composed(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        composed[static_cast<std::size_t>(i)] =
            g[static_cast<std::size_t>(h[static_cast<std::size_t>(i)])];
      if (members.count(composed) == 0) throw InvalidGroup("not closed under composition");
    }
  }
}

bool is_invariant(const TwoPointTarget& target, const std::vector<Permutation>& group) {
  const int n = target.size();
  for (const auto& g : group)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (target(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]) != target(i, j))
          return false;
  return true;
}

SubsetMixture symmetrize(const SubsetMixture& mixture, const std::vector<Permutation>& group) {
  validate_group(group, mixture.points);
  std::set<Permutation> members(group.begin(), group.end());
  const Rational share = Rational(1) / Rational(static_cast<long>(members.size()));
  SubsetMixture result{mixture.points, {}};
  for (const auto& g : members)
    for (const auto& atom : mixture.atoms) {
      std::uint32_t bits = 0;
      for (int i : atom.subset.indices()) bits |= std::uint32_t{1} << g[static_cast<std::size_t>(i)];
      result.atoms.push_back({Subset(bits), atom.weight * share});
    }
  result.canonicalize();
  return result;
}

SubsetMixture product_form_mixture(const std::vector<Rational>& p) {
  const int n = static_cast<int>(p.size());
  if (n > 15)
    throw CapExceeded("product_form_mixture: explicit support of 2^" + std::to_string(n) +
                      " subsets exceeds the cap of 2^15");
  for (const auto& v : p)
    if (v < 0 || v > 1) throw InvalidInstance("one-point probability outside [0, 1]");
  SubsetMixture mixture{n, {}};
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
    Rational weight(1);
    for (int i = 0; i < n && weight != 0; ++i)
      weight *= ((bits >> i) & 1U) ? p[static_cast<std::size_t>(i)]
                                   : Rational(1 - p[static_cast<std::size_t>(i)]);
    if (weight != 0) mixture.atoms.push_back({Subset(bits), weight});
  }
  mixture.canonicalize();
  return mixture;
}

}  // namespace realkit
