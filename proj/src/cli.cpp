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

#include "realkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "realkit/contact.hpp"
#include "realkit/errors.hpp"
#include "realkit/io.hpp"
#include "realkit/metric_space.hpp"
#include "realkit/pp_realizer.hpp"
#include "realkit/regularity.hpp"
#include "realkit/set_realizer.hpp"

namespace realkit::cli {

namespace {

using io::Json;

// Input files are read once through this cache so that the digest covers
// exactly the bytes that were parsed.
class Inputs {
 public:
  Json json(const std::string& path) {
    const std::string text = io::read_file(path);
    contents_.push_back(text);
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInstance(path + ": malformed JSON (" + e.what() + ")");
    }
  }
  std::string digest() const { return io::digest(contents_); }

 private:
  std::vector<std::string> contents_;
};

struct Outcome {
  Json report;
  int code = kExitOk;
};

Json header(const std::string& command) {
  Json report = Json::object();
  report["command"] = command;
  report["status"] = "invalid";
  report["version"] = REALKIT_VERSION;
  report["input_digest"] = nullptr;
  return report;
}

void set_status(Outcome& outcome, const std::string& status) {
  outcome.report["status"] = status;
  if (status == "feasible" || status == "pass") outcome.code = kExitOk;
  if (status == "infeasible" || status == "fail") outcome.code = kExitNegative;
  if (status == "indeterminate") outcome.code = kExitIndeterminate;
  if (status == "invalid") outcome.code = kExitInvalid;
}

std::string status_of(Verdict verdict) {
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

Rational flag_rational(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw InvalidInstance(flag + ": \"" + text + "\" is not a decimal or fraction");
  }
}

VectorQ flag_point(const std::string& text, const std::string& flag) {
  std::vector<Rational> coords;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) coords.push_back(flag_rational(item, flag));
  if (coords.empty()) throw InvalidInstance(flag + ": expected comma-separated coordinates");
  VectorQ v(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t k = 0; k < coords.size(); ++k) v(static_cast<Eigen::Index>(k)) = coords[k];
  return v;
}

std::string max_abs_difference(const MatrixQ& a, const MatrixQ& b) {
  Rational worst(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, abs(Rational(a(i, j) - b(i, j))));
  return format_rational(worst);
}

// ---------------------------------------------------------------- commands

struct PackingArgs {
  std::string instance;
  std::string t;
};

Outcome run_packing(const PackingArgs& args, Inputs& inputs) {
  Outcome outcome{header("packing")};
  const FiniteMetricSpace space = io::parse_space(inputs.json(args.instance));
  const Rational t = flag_rational(args.t, "--t");
  const std::vector<int> net = maximum_packing(space, t);
  outcome.report["t"] = format_rational(t);
  outcome.report["value"] = static_cast<int>(net.size());
  Json labels = Json::array();
  for (int i : net) labels.push_back(space.labels()[static_cast<std::size_t>(i)]);
  outcome.report["packing"] = labels;
  set_status(outcome, "pass");
  return outcome;
}

struct GammaArgs {
  std::string instance;
  int n = 0;
  std::string t;
  int cap = kDefaultGammaMassCap;
};

Outcome run_gamma(const GammaArgs& args, Inputs& inputs) {
  Outcome outcome{header("gamma")};
  const FiniteMetricSpace space = io::parse_space(inputs.json(args.instance));
  const Rational t = flag_rational(args.t, "--t");
  if (args.n < 0) throw InvalidInstance("--n: total mass must be non-negative");
  const int packing = packing_number(space, t);
  const LemmaBounds bounds = lemma_bounds(args.n, packing);
  const Configuration spread = spread_mass(space, args.n, t);
  const long spread_pairs = close_pair_count(space, spread, t);
  outcome.report["n"] = args.n;
  outcome.report["t"] = format_rational(t);
  outcome.report["packing"] = packing;
  outcome.report["lower_bound"] = format_rational(std::max(Rational(0), bounds.lower));
  outcome.report["upper_bound"] = format_rational(bounds.upper);
  outcome.report["spread"] = Json(spread.multiplicity);
  outcome.report["spread_pairs"] = spread_pairs;
  const bool upper_ok = Rational(spread_pairs) <= bounds.upper;
  try {
    const long value = gamma_min_pairs(space, args.n, t, args.cap);
    outcome.report["value"] = value;
    set_status(outcome, Rational(value) >= bounds.lower && upper_ok ? "pass" : "fail");
  } catch (const CapExceeded& e) {
    outcome.report["value"] = nullptr;
    outcome.report["note"] = e.what();
    set_status(outcome, upper_ok ? "indeterminate" : "fail");
  }
  return outcome;
}

struct RealizeSetArgs {
  std::string instance;
  int max_exact = 15;
  double tolerance = 1e-9;
  std::string group;
};

Outcome run_realize_set(const RealizeSetArgs& args, Inputs& inputs) {
  Outcome outcome{header("realize-set")};
  const TwoPointTarget target = io::parse_two_point_target(inputs.json(args.instance));
  std::optional<std::vector<Permutation>> group;
  if (!args.group.empty()) {
    group = io::parse_group(inputs.json(args.group));
    validate_group(*group, target.size());
    if (!is_invariant(target, *group)) throw InvalidGroup("target is not invariant under the group");
  }
  SetRealizeOptions options;
  options.max_exact = args.max_exact;
  options.tolerance = args.tolerance;
  SetRealization result = realize_subsets(target, options);
  if (group && result.mixture) {
    result.mixture = symmetrize(*result.mixture, *group);
    result.residual = parse_rational(
        max_abs_difference(moments_of_mixture(*result.mixture).p(), target.p()));
  }
  auto& r = outcome.report;
  r["points"] = target.size();
  r["method"] = result.method;
  if (result.verdict == Verdict::kFeasible && result.mixture)
    r["mixture"] = io::subset_mixture_json(*result.mixture);
  if (result.verdict == Verdict::kInfeasible && result.certificate)
    r["certificate"] = io::set_certificate_json(*result.certificate);
  r["residual"] = format_rational(result.residual);
  r["gap"] = result.gap ? Json(format_rational(*result.gap)) : Json(nullptr);
  if (group) r["symmetrized"] = true;
  r["rounds"] = result.rounds;
  r["note"] = result.note;
  set_status(outcome, status_of(result.verdict));
  return outcome;
}

struct RealizePpArgs {
  std::string instance;
  std::string objective = "none";
  std::string psi;
  int max_exact = 15;
  double tolerance = 1e-9;
};

PpObjective parse_objective(const std::string& name, const std::string& psi_path, Inputs& inputs) {
  if (name == "none") return PpObjective::none();
  if (name == "card2") return PpObjective::cardinality_power(2);
  if (name == "card3") return PpObjective::cardinality_power(3);
  if (name == "card4") return PpObjective::cardinality_power(4);
  if (name == "chi-hc") {
    if (psi_path.empty()) throw InvalidInstance("--objective chi-hc needs --psi");
    return PpObjective::chi_hardcore(io::parse_psi(inputs.json(psi_path)));
  }
  throw InvalidInstance("--objective: unknown objective \"" + name + "\"");
}

Json pp_realization_json(const PpRealization& result, Json report) {
  report["method"] = result.method;
  if (result.verdict == Verdict::kFeasible && result.mixture)
    report["mixture"] = io::config_mixture_json(*result.mixture);
  if (result.verdict == Verdict::kInfeasible && result.certificate)
    report["certificate"] = io::pp_certificate_json(*result.certificate);
  report["objective"] = result.objective ? io::extended_json(*result.objective) : Json(nullptr);
  report["dual_objective"] =
      result.dual_objective ? Json(format_rational(*result.dual_objective)) : Json(nullptr);
  report["residual"] = format_rational(result.residual);
  report["rounds"] = result.rounds;
  report["note"] = result.note;
  return report;
}

Outcome run_realize_pp(const RealizePpArgs& args, Inputs& inputs) {
  Outcome outcome{header("realize-pp")};
  const CorrelationTarget target = io::parse_correlation_target(inputs.json(args.instance));
  const PpObjective objective = parse_objective(args.objective, args.psi, inputs);
  PpRealizeOptions options;
  options.max_exact = args.max_exact;
  options.tolerance = args.tolerance;
  const PpRealization result = realize_pp(target, objective, options);
  outcome.report["points"] = target.size();
  outcome.report["objective_kind"] = args.objective;
  outcome.report = pp_realization_json(result, std::move(outcome.report));
  set_status(outcome, status_of(result.verdict));
  return outcome;
}

struct ScreenArgs {
  std::string instance;
  int trials = 1000;
  std::uint64_t seed = 0;
};

constexpr std::size_t kListedViolations = 5;

Outcome run_screen_pp(const ScreenArgs& args, Inputs& inputs) {
  Outcome outcome{header("screen-pp")};
  const CorrelationTarget target = io::parse_correlation_target(inputs.json(args.instance));
  if (args.trials < 0) throw InvalidInstance("--trials must be non-negative");
  const PositivityReport screen = positivity_screen(target, args.trials, args.seed);
  auto& r = outcome.report;
  r["trials"] = screen.trials;
  r["seed"] = args.seed;
  r["violation_count"] = screen.violations.size();
  Json listed = Json::array();
  for (std::size_t k = 0; k < std::min(kListedViolations, screen.violations.size()); ++k) {
    const auto& v = screen.violations[k];
    Json entry = Json::object();
    entry["trial"] = v.trial;
    entry["phi"] = format_rational(v.phi);
    entry["infimum"] = format_rational(v.infimum);
    entry["argmin"] = Json(v.argmin.multiplicity);
    entry["h"] = io::matrix_json(v.h);
    listed.push_back(std::move(entry));
  }
  r["violations"] = listed;
  r["note"] = "randomised necessary-condition screen; a pass does not prove realisability";
  set_status(outcome, screen.violations.empty() ? "pass" : "fail");
  return outcome;
}

struct RegularityArgs {
  std::string instance;
  std::string check;
  std::string psi;
  std::string r;
  std::string beta;
  std::string threshold = "1";
  std::string radius;
};

// Without a bound the check asks only for finiteness.
std::string bound_status(Outcome& outcome, const Enclosure& value, const std::string& bound) {
  outcome.report["value"] = io::enclosure_json(value);
  if (bound.empty()) {
    outcome.report["bound"] = nullptr;
    if (!value.upper.is_infinite()) return "pass";
    return value.lower.is_infinite() ? "fail" : "indeterminate";
  }
  const Rational r = flag_rational(bound, "--r");
  outcome.report["bound"] = format_rational(r);
  return to_string(compare_to_bound(value, r));
}

Outcome run_regularity(const RegularityArgs& args, Inputs& inputs) {
  Outcome outcome{header("regularity")};
  outcome.report["check"] = args.check;
  const Json instance = inputs.json(args.instance);
  auto need_psi = [&]() {
    if (args.psi.empty()) throw InvalidInstance("--check " + args.check + " needs --psi");
    return io::parse_psi(inputs.json(args.psi));
  };
  if (args.check == "chi") {
    const AtomicMeasure2D rho = io::parse_measure(instance);
    const PsiFunction psi = need_psi();
    set_status(outcome, bound_status(outcome, Enclosure::exactly(chi_hc_integral(rho, psi)), args.r));
  } else if (args.check == "packing") {
    const AtomicMeasure2D rho = io::parse_measure(instance);
    if (rho.is_euclidean()) throw InvalidInstance("--check packing needs a finite-space measure");
    const Rational value = packing_integral(rho, *rho.space());
    set_status(outcome, bound_status(outcome, Enclosure::exactly(ExtendedRational(value)), args.r));
  } else if (args.check == "psi") {
    const FiniteMetricSpace space = io::parse_space(instance);
    const PsiFunction psi = need_psi();
    const Rational threshold = flag_rational(args.threshold, "--threshold");
    const PsiAdmissibility report = psi_admissibility(psi, space, threshold);
    Json profile = Json::array();
    for (const auto& entry : report.profile) {
      Json row = Json::object();
      row["t"] = format_rational(entry.t);
      row["psi"] = io::extended_json(entry.psi);
      row["packing"] = entry.packing;
      row["ratio"] = io::extended_json(entry.ratio);
      profile.push_back(std::move(row));
    }
    outcome.report["threshold"] = format_rational(threshold);
    outcome.report["profile"] = profile;
    outcome.report["ratio_grows"] = report.ratio_grows;
    set_status(outcome, report.pass ? "pass" : "fail");
  } else if (args.check == "shells") {
    const AtomicMeasure2D rho = io::parse_measure(instance);
    if (args.beta.empty()) throw InvalidInstance("--check shells needs --beta");
    const Json beta_json = inputs.json(args.beta);
    const std::vector<Rational> beta =
        io::parse_rational_list(io::field(beta_json, "beta", ""), "/beta");
    std::vector<Rational> radii;
    if (instance.contains("radii")) {
      radii = io::parse_rational_list(instance["radii"], "/radii");
    } else {
      radii = io::parse_rational_list(io::field(beta_json, "radii", ""), "/radii");
    }
    const ShellSeries series = shell_series(rho, radii, beta);
    Json r_values = Json::array();
    for (const auto& value : series.r) r_values.push_back(io::enclosure_json(value));
    outcome.report["r"] = r_values;
    outcome.report["infinite"] = series.infinite;
    set_status(outcome, bound_status(outcome, series.value, args.r));
  } else if (args.check == "reduced") {
    int dimension = 0;
    const std::vector<PointAtom> rho_bar = io::parse_point_measure(instance, dimension);
    Rational radius;
    if (!args.radius.empty()) {
      radius = flag_rational(args.radius, "--radius");
    } else {
      radius = io::rational_at(io::field(instance, "radius", ""), "/radius");
    }
    outcome.report["radius"] = format_rational(radius);
    set_status(outcome,
               bound_status(outcome, reduced_measure_check(rho_bar, radius, dimension), args.r));
  } else if (args.check == "split") {
    const CorrelationTarget target = io::parse_correlation_target(instance);
    const PsiFunction psi = need_psi();
    if (args.r.empty()) throw InvalidInstance("--check split needs --r");
    const Rational r = flag_rational(args.r, "--r");
    const SplitCheck split = hardcore_split_check(target, psi, r);
    outcome.report["value"] = io::extended_json(split.integral);
    outcome.report["bound"] = format_rational(r);
    outcome.report["integral_ok"] = split.integral_ok;
    if (!split.realization) {
      set_status(outcome, "fail");
      return outcome;
    }
    outcome.report = pp_realization_json(*split.realization, std::move(outcome.report));
    set_status(outcome, status_of(split.verdict));
  } else {
    throw InvalidInstance("--check: unknown check \"" + args.check + "\"");
  }
  return outcome;
}

struct ContactCheckArgs {
  std::string tau1;
  std::string tau2;
  std::string l;
  std::string l_squared;
};

Json violation_json(const ContactViolation& v) {
  Json node = Json::object();
  node["r"] = v.r.format();
  node["r_approx"] = v.r.approx();
  node["side"] = to_string(v.side);
  node["lhs"] = format_rational(v.lhs);
  node["rhs"] = format_rational(v.rhs);
  return node;
}

// Squared reference distance from --l or --l-squared.
std::optional<Rational> reference_distance_squared(const std::string& l, const std::string& l2) {
  if (!l.empty() && !l2.empty()) throw InvalidInstance("give either --l or --l-squared, not both");
  if (!l.empty()) {
    const Rational value = flag_rational(l, "--l");
    if (value < 0) throw InvalidInstance("--l must be non-negative");
    return value * value;
  }
  if (!l2.empty()) {
    const Rational value = flag_rational(l2, "--l-squared");
    if (value < 0) throw InvalidInstance("--l-squared must be non-negative");
    return value;
  }
  return std::nullopt;
}

Outcome run_contact_check(const ContactCheckArgs& args, Inputs& inputs) {
  Outcome outcome{header("contact check")};
  const StepCdf tau1 = io::parse_step_cdf(inputs.json(args.tau1));
  const auto l2 = reference_distance_squared(args.l, args.l_squared);
  if (args.tau2.empty()) {
    if (l2) throw InvalidInstance("a reference distance needs --tau2");
    outcome.report["note"] = "single reference point: every valid step cdf is realisable";
    outcome.report["violation"] = nullptr;
    set_status(outcome, "pass");
    return outcome;
  }
  const StepCdf tau2 = io::parse_step_cdf(inputs.json(args.tau2));
  if (!l2) throw InvalidInstance("two reference points need --l or --l-squared");
  outcome.report["l_squared"] = format_rational(*l2);
  const auto violation = check_two_point_squared(tau1, tau2, *l2);
  outcome.report["violation"] = violation ? violation_json(*violation) : Json(nullptr);
  set_status(outcome, violation ? "fail" : "pass");
  return outcome;
}

struct ContactSimulateArgs {
  std::string tau1;
  std::string tau2;
  std::string x1;
  std::string x2;
  long samples = 100000;
  std::uint64_t seed = 0;
  double alpha = 0.001;
};

Outcome run_contact_simulate(const ContactSimulateArgs& args, Inputs& inputs) {
  Outcome outcome{header("contact simulate")};
  const StepCdf tau1 = io::parse_step_cdf(inputs.json(args.tau1));
  const StepCdf tau2 = io::parse_step_cdf(inputs.json(args.tau2));
  const VectorQ x1 = flag_point(args.x1, "--x1");
  const VectorQ x2 = flag_point(args.x2, "--x2");
  if (x1.size() != x2.size()) throw InvalidInstance("--x1 and --x2 differ in dimension");
  if (args.samples <= 0) throw InvalidInstance("--samples must be positive");
  if (!(args.alpha > 0 && args.alpha < 1)) throw InvalidInstance("--alpha must lie in (0, 1)");
  auto& r = outcome.report;
  r["samples"] = args.samples;
  r["seed"] = args.seed;
  MonteCarloReport mc;
  try {
    mc = monte_carlo_contact(tau1, tau2, x1, x2, args.samples, args.seed);
  } catch (const Infeasible& e) {
    r["note"] = e.what();
    set_status(outcome, "fail");
    return outcome;
  }
  // Two-sided DKW bound for both cdfs jointly (union bound over the pair).
  const double bound =
      std::sqrt(std::log(4.0 / args.alpha) / (2.0 * static_cast<double>(args.samples)));
  r["exact_constructions"] = mc.exact;
  r["empty_sets"] = mc.empty_sets;
  Json points = Json::array();
  for (const auto& p : mc.points) {
    Json row = Json::object();
    row["r"] = format_rational(p.r);
    row["tau1"] = format_rational(p.tau1);
    row["tau2"] = format_rational(p.tau2);
    row["empirical1"] = p.empirical1;
    row["empirical2"] = p.empirical2;
    points.push_back(std::move(row));
  }
  r["points"] = points;
  r["deviation1"] = mc.deviation1;
  r["deviation2"] = mc.deviation2;
  r["max_deviation"] = mc.max_deviation;
  r["dkw_bound"] = bound;
  r["alpha"] = args.alpha;
  set_status(outcome, mc.max_deviation <= bound ? "pass" : "fail");
  return outcome;
}

struct VerifyArgs {
  std::string instance;
  std::string certificate;
};

Outcome run_verify_cert(const VerifyArgs& args, Inputs& inputs) {
  Outcome outcome{header("verify-cert")};
  const Json instance = inputs.json(args.instance);
  const Json cert_json = inputs.json(args.certificate);
  CertificateCheck check;
  if (instance.is_object() && instance.contains("p")) {
    const TwoPointTarget target = io::parse_two_point_target(instance);
    check = verify_set_certificate(target, io::parse_set_certificate(cert_json, target.size()));
    outcome.report["kind"] = "set";
  } else {
    const CorrelationTarget target = io::parse_correlation_target(instance);
    check = verify_pp_certificate(target, io::parse_pp_certificate(cert_json, target.size()));
    outcome.report["kind"] = "pp";
  }
  auto& r = outcome.report;
  r["sound"] = check.sound;
  r["normalized"] = check.normalized;
  r["minimum"] = format_rational(check.minimum);
  r["argmin"] = Json(check.argmin);
  r["pairing"] = format_rational(check.pairing);
  r["problems"] = Json(check.problems);
  r["message"] = check.valid() ? "certificate valid" : "certificate invalid";
  set_status(outcome, check.valid() ? "pass" : "fail");
  return outcome;
}

struct SampleArgs {
  std::string report;
  long samples = 10;
  std::uint64_t seed = 0;
};

Outcome run_sample(const SampleArgs& args, Inputs& inputs) {
  Outcome outcome{header("sample")};
  const Json source = inputs.json(args.report);
  if (!source.is_object() || !source.contains("mixture"))
    throw InvalidInstance("/mixture: report carries no mixture");
  if (args.samples <= 0) throw InvalidInstance("--samples must be positive");
  const int points = io::integer_at(io::field(source, "points", ""), "/points");
  const Json& list = io::array_at(source["mixture"], "/mixture");
  const bool subsets = !list.empty() && list[0].is_object() && list[0].contains("subset");
  std::vector<Json> outcomes;
  std::vector<Rational> weights;
  if (subsets) {
    const SubsetMixture mixture = io::parse_subset_mixture(list, points);
    for (const auto& atom : mixture.atoms) {
      outcomes.push_back(Json(atom.subset.indices()));
      weights.push_back(atom.weight);
    }
  } else {
    const ConfigMixture mixture = io::parse_config_mixture(list, points);
    for (const auto& atom : mixture.atoms) {
      outcomes.push_back(Json(atom.config.multiplicity));
      weights.push_back(atom.weight);
    }
  }
  Rational total(0);
  for (const auto& w : weights) total += w;
  if (total != 1) throw InvalidInstance("/mixture: weights sum to " + format_rational(total) + ", not 1");
  // Exact inverse transform on a 53-bit uniform grid.
  std::mt19937_64 rng(args.seed);
  Json draws = Json::array();
  for (long s = 0; s < args.samples; ++s) {
    const Rational u = Rational(static_cast<std::int64_t>(rng() >> 11)) /
                       Rational(static_cast<std::int64_t>(1) << 53);
    Rational cumulative(0);
    std::size_t k = 0;
    for (; k + 1 < weights.size(); ++k) {
      cumulative += weights[k];
      if (u < cumulative) break;
    }
    draws.push_back(outcomes[k]);
  }
  outcome.report["kind"] = subsets ? "subset" : "configuration";
  outcome.report["samples"] = args.samples;
  outcome.report["seed"] = args.seed;
  outcome.report["draws"] = draws;
  set_status(outcome, "pass");
  return outcome;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"realkit: finite-carrier realisability of random sets and point processes"};
  app.name("realkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", REALKIT_VERSION);
  std::string out_path;
  std::function<Outcome(Inputs&)> action;
  std::string command;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "write the report here"); };

  PackingArgs packing;
  auto* packing_cmd = app.add_subcommand("packing", "maximum packing of a finite metric space");
  packing_cmd->add_option("instance", packing.instance)->required();
  packing_cmd->add_option("--t", packing.t, "distances must exceed t")->required();
  add_out(packing_cmd);
  packing_cmd->callback([&] { action = [&](Inputs& in) { return run_packing(packing, in); }; });

  GammaArgs gamma;
  auto* gamma_cmd = app.add_subcommand("gamma", "minimum number of close ordered pairs");
  gamma_cmd->add_option("instance", gamma.instance)->required();
  gamma_cmd->add_option("--n", gamma.n, "total mass")->required();
  gamma_cmd->add_option("--t", gamma.t)->required();
  gamma_cmd->add_option("--cap", gamma.cap, "largest mass searched exhaustively");
  add_out(gamma_cmd);
  gamma_cmd->callback([&] { action = [&](Inputs& in) { return run_gamma(gamma, in); }; });

  RealizeSetArgs set_args;
  auto* set_cmd = app.add_subcommand("realize-set", "realise a two-point covering function");
  set_cmd->add_option("instance", set_args.instance)->required();
  set_cmd->add_option("--max-exact", set_args.max_exact, "exact rational mode up to this size");
  set_cmd->add_option("--tol", set_args.tolerance, "pricing tolerance");
  set_cmd->add_option("--group", set_args.group, "permutation group to symmetrise under");
  add_out(set_cmd);
  set_cmd->callback([&] { action = [&](Inputs& in) { return run_realize_set(set_args, in); }; });

  RealizePpArgs pp_args;
  auto* pp_cmd = app.add_subcommand("realize-pp", "realise a correlation measure");
  pp_cmd->add_option("instance", pp_args.instance)->required();
  pp_cmd->add_option("--objective", pp_args.objective, "none, card2, card3, card4 or chi-hc")
      ->check(CLI::IsMember({"none", "card2", "card3", "card4", "chi-hc"}));
  pp_cmd->add_option("--psi", pp_args.psi, "psi step function for chi-hc");
  pp_cmd->add_option("--max-exact", pp_args.max_exact);
  pp_cmd->add_option("--tol", pp_args.tolerance);
  add_out(pp_cmd);
  pp_cmd->callback([&] { action = [&](Inputs& in) { return run_realize_pp(pp_args, in); }; });

  ScreenArgs screen;
  auto* screen_cmd = app.add_subcommand("screen-pp", "random positivity screen");
  screen_cmd->add_option("instance", screen.instance)->required();
  screen_cmd->add_option("--trials", screen.trials);
  screen_cmd->add_option("--seed", screen.seed)->required();
  add_out(screen_cmd);
  screen_cmd->callback([&] { action = [&](Inputs& in) { return run_screen_pp(screen, in); }; });

  RegularityArgs reg;
  auto* reg_cmd = app.add_subcommand("regularity", "integrability checks on atomic measures");
  reg_cmd->add_option("instance", reg.instance)->required();
  reg_cmd->add_option("--check", reg.check)
      ->required()
      ->check(CLI::IsMember({"chi", "packing", "psi", "shells", "reduced", "split"}));
  reg_cmd->add_option("--psi", reg.psi);
  reg_cmd->add_option("--r", reg.r, "bound on the computed value");
  reg_cmd->add_option("--beta", reg.beta);
  reg_cmd->add_option("--threshold", reg.threshold, "psi/packing ratio required at the smallest distance");
  reg_cmd->add_option("--radius", reg.radius, "ball radius for the reduced-measure check");
  add_out(reg_cmd);
  reg_cmd->callback([&] { action = [&](Inputs& in) { return run_regularity(reg, in); }; });

  auto* contact_cmd = app.add_subcommand("contact", "contact distribution functions");
  contact_cmd->require_subcommand(1);
  ContactCheckArgs check;
  auto* check_cmd = contact_cmd->add_subcommand("check", "two-point compatibility");
  check_cmd->add_option("--tau1", check.tau1)->required();
  check_cmd->add_option("--tau2", check.tau2);
  check_cmd->add_option("--l", check.l, "distance between the reference points");
  check_cmd->add_option("--l-squared", check.l_squared, "squared distance, for irrational l");
  add_out(check_cmd);
  check_cmd->callback([&] { action = [&](Inputs& in) { return run_contact_check(check, in); }; });
  ContactSimulateArgs sim;
  auto* sim_cmd = contact_cmd->add_subcommand("simulate", "Monte Carlo check of the construction");
  sim_cmd->add_option("--tau1", sim.tau1)->required();
  sim_cmd->add_option("--tau2", sim.tau2)->required();
  sim_cmd->add_option("--x1", sim.x1, "comma-separated coordinates")->required();
  sim_cmd->add_option("--x2", sim.x2, "comma-separated coordinates")->required();
  sim_cmd->add_option("--samples", sim.samples);
  sim_cmd->add_option("--seed", sim.seed)->required();
  sim_cmd->add_option("--alpha", sim.alpha, "DKW confidence level");
  add_out(sim_cmd);
  sim_cmd->callback([&] { action = [&](Inputs& in) { return run_contact_simulate(sim, in); }; });

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-cert", "re-verify an infeasibility certificate");
  verify_cmd->add_option("instance", verify.instance)->required();
  verify_cmd->add_option("certificate", verify.certificate, "certificate or report file")->required();
  add_out(verify_cmd);
  verify_cmd->callback([&] { action = [&](Inputs& in) { return run_verify_cert(verify, in); }; });

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "draw from the mixture of a feasible report");
  sample_cmd->add_option("report", sample.report)->required();
  sample_cmd->add_option("--samples", sample.samples);
  sample_cmd->add_option("--seed", sample.seed)->required();
  add_out(sample_cmd);
  sample_cmd->callback([&] { action = [&](Inputs& in) { return run_sample(sample, in); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  for (const auto* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (const auto* nested : sub->get_subcommands()) command += " " + nested->get_name();
  }

  Inputs inputs;
  Outcome outcome;
  try {
    outcome = action(inputs);
    outcome.report["input_digest"] = inputs.digest();
  } catch (const Error& e) {
    outcome.report = header(command);
    outcome.report["input_digest"] = inputs.digest();
    outcome.report["error"] = e.what();
    set_status(outcome, "invalid");
    err << "realkit: " << e.what() << "\n";
  }
  const std::string text = outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "realkit: cannot write " << out_path << "\n";
      return kExitInvalid;
    }
    file << text;
  }
  if (outcome.report.contains("message") && outcome.code != kExitOk)
    err << outcome.report["message"].get<std::string>() << "\n";
  return outcome.code;
}

}  // namespace realkit::cli
