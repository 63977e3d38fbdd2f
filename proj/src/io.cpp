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

#include "realkit/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "realkit/errors.hpp"

namespace realkit::io {

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw InvalidInstance((pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

std::string child(const std::string& pointer, std::size_t index) {
  return pointer + "/" + std::to_string(index);
}

std::string child(const std::string& pointer, const std::string& key) {
  return pointer + "/" + key;
}

// Point reference: integer index or label.
int point_at(const Json& node, const std::string& pointer, const FiniteMetricSpace& space) {
  if (node.is_string()) {
    const int index = space.index_of(node.get<std::string>());
    if (index < 0) fail(pointer, "unknown point label \"" + node.get<std::string>() + "\"");
    return index;
  }
  const int index = integer_at(node, pointer);
  if (index < 0 || index >= space.size()) fail(pointer, "point index out of range");
  return index;
}

std::vector<int> int_list(const Json& node, const std::string& pointer) {
  std::vector<int> values;
  const Json& list = array_at(node, pointer);
  for (std::size_t k = 0; k < list.size(); ++k) values.push_back(integer_at(list[k], child(pointer, k)));
  return values;
}

Json int_list_json(const std::vector<int>& values) {
  Json list = Json::array();
  for (int v : values) list.push_back(v);
  return list;
}

MatrixQ square_matrix_at(const Json& node, const std::string& pointer, int n) {
  const Json& rows = array_at(node, pointer);
  if (static_cast<int>(rows.size()) != n) fail(pointer, "expected " + std::to_string(n) + " rows");
  MatrixQ m(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string row_ptr = child(pointer, static_cast<std::size_t>(i));
    const Json& row = array_at(rows[static_cast<std::size_t>(i)], row_ptr);
    if (static_cast<int>(row.size()) != n) fail(row_ptr, "expected " + std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j)
      m(i, j) = rational_at(row[static_cast<std::size_t>(j)], child(row_ptr, static_cast<std::size_t>(j)));
  }
  return m;
}

// Converts InvalidInstance messages from domain constructors into schema
// errors rooted at `pointer` (those messages already carry relative paths).
template <typename F>
auto rooted(const std::string& pointer, F&& build) {
  try {
    return build();
  } catch (const InvalidInstance& e) {
    const std::string what = e.what();
    if (!what.empty() && what.front() == '/') throw InvalidInstance(pointer + what);
    throw InvalidInstance((pointer.empty() ? std::string("/") : pointer) + ": " + what);
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInstance("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInstance(path + ": malformed JSON (" + e.what() + ")");
  }
}

std::string digest(const std::vector<std::string>& contents) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const auto& content : contents) {
    const std::string prefix = std::to_string(content.size()) + ":";
    EVP_DigestUpdate(ctx, prefix.data(), prefix.size());
    EVP_DigestUpdate(ctx, content.data(), content.size());
  }
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, hash, &length);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex = "sha256:";
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[hash[k] >> 4]);
    hex.push_back(kHex[hash[k] & 15]);
  }
  return hex;
}

Rational rational_at(const Json& node, const std::string& pointer) {
  if (node.is_number_integer()) {
    return node.is_number_unsigned() ? Rational(node.get<std::uint64_t>())
                                     : Rational(node.get<std::int64_t>());
  }
  if (node.is_number_float()) fail(pointer, "floating-point numbers are not accepted; use a decimal string");
  if (!node.is_string()) fail(pointer, "expected a decimal string");
  try {
    return parse_rational(node.get<std::string>());
  } catch (const std::invalid_argument&) {
    fail(pointer, "\"" + node.get<std::string>() + "\" is not a decimal or fraction");
  }
}

ExtendedRational extended_at(const Json& node, const std::string& pointer) {
  if (node.is_string()) {
    try {
      return parse_extended(node.get<std::string>());
    } catch (const std::invalid_argument&) {
      fail(pointer, "\"" + node.get<std::string>() + "\" is not a decimal, fraction or \"inf\"");
    }
  }
  return ExtendedRational(rational_at(node, pointer));
}

int integer_at(const Json& node, const std::string& pointer) {
  if (!node.is_number_integer()) fail(pointer, "expected an integer");
  const auto value = node.get<std::int64_t>();
  if (value < -(1LL << 30) || value > (1LL << 30)) fail(pointer, "integer out of range");
  return static_cast<int>(value);
}

const Json& field(const Json& node, const std::string& key, const std::string& pointer) {
  if (!node.is_object()) fail(pointer, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) fail(child(pointer, key), "missing required field");
  return *it;
}

const Json& array_at(const Json& node, const std::string& pointer) {
  if (!node.is_array()) fail(pointer, "expected an array");
  return node;
}

VectorQ vector_at(const Json& node, const std::string& pointer) {
  const Json& list = array_at(node, pointer);
  VectorQ v(static_cast<Eigen::Index>(list.size()));
  for (std::size_t k = 0; k < list.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = rational_at(list[k], child(pointer, k));
  return v;
}

std::vector<Rational> parse_rational_list(const Json& node, const std::string& pointer) {
  const VectorQ v = vector_at(node, pointer);
  return std::vector<Rational>(v.begin(), v.end());
}

FiniteMetricSpace parse_space(const Json& root) {
  if (!root.is_object()) fail("", "expected an object");
  if (root.contains("n") && !root.contains("dist")) {
    const int n = integer_at(root["n"], "/n");
    if (n < 1) fail("/n", "must be positive");
    return FiniteMetricSpace::discrete(n);
  }
  const Json& dist = field(root, "dist", "");
  const int n = static_cast<int>(array_at(dist, "/dist").size());
  if (n < 1) fail("/dist", "must have at least one row");
  std::vector<std::string> labels;
  if (root.contains("labels")) {
    const Json& list = array_at(root["labels"], "/labels");
    if (static_cast<int>(list.size()) != n) fail("/labels", "expected " + std::to_string(n) + " labels");
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (!list[k].is_string()) fail(child("/labels", k), "expected a string");
      labels.push_back(list[k].get<std::string>());
    }
  } else {
    for (int k = 0; k < n; ++k) labels.push_back(std::to_string(k));
  }
  MatrixQ d = square_matrix_at(dist, "/dist", n);
  return rooted("/dist", [&] { return FiniteMetricSpace(std::move(labels), std::move(d)); });
}

TwoPointTarget parse_two_point_target(const Json& root) {
  const Json& p = field(root, "p", "");
  const int n = static_cast<int>(array_at(p, "/p").size());
  if (n < 1) fail("/p", "must have at least one row");
  MatrixQ m = square_matrix_at(p, "/p", n);
  return rooted("/p", [&] { return TwoPointTarget(std::move(m)); });
}

CorrelationTarget parse_correlation_target(const Json& root) {
  FiniteMetricSpace space = parse_space(root);
  const Json& rho = array_at(field(root, "rho", ""), "/rho");
  std::vector<CorrelationAtom> atoms;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const std::string ptr = child("/rho", k);
    const Json& entry = array_at(rho[k], ptr);
    if (entry.size() != 3) fail(ptr, "expected [i, j, weight]");
    atoms.push_back({point_at(entry[0], child(ptr, 0), space), point_at(entry[1], child(ptr, 1), space),
                     rational_at(entry[2], child(ptr, 2))});
    if (atoms.back().weight < 0) fail(child(ptr, 2), "weight must be non-negative");
  }
  std::optional<VectorQ> rho1;
  if (root.contains("rho1") && !root["rho1"].is_null()) rho1 = vector_at(root["rho1"], "/rho1");
  int cap = 0;
  if (root.contains("cap")) {
    cap = integer_at(root["cap"], "/cap");
  } else {
    fail("/cap", "missing required field");
  }
  bool simple = false;
  if (root.contains("simple")) {
    if (!root["simple"].is_boolean()) fail("/simple", "expected a boolean");
    simple = root["simple"].get<bool>();
  }
  std::optional<Rational> eps;
  if (root.contains("hardcore_eps") && !root["hardcore_eps"].is_null())
    eps = rational_at(root["hardcore_eps"], "/hardcore_eps");
  bool strict = false;
  if (root.contains("strict_hardcore")) {
    if (!root["strict_hardcore"].is_boolean()) fail("/strict_hardcore", "expected a boolean");
    strict = root["strict_hardcore"].get<bool>();
  }
  return rooted("", [&] {
    return CorrelationTarget(std::move(space), atoms, rho1, cap, simple, eps, strict);
  });
}

PsiFunction parse_psi(const Json& root) {
  const Json& steps = array_at(field(root, "steps", ""), "/steps");
  std::vector<PsiStep> parsed;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string ptr = child("/steps", k);
    const Json& entry = array_at(steps[k], ptr);
    if (entry.size() != 2) fail(ptr, "expected [t, value]");
    parsed.push_back({rational_at(entry[0], child(ptr, 0)), extended_at(entry[1], child(ptr, 1))});
  }
  try {
    return PsiFunction(std::move(parsed));
  } catch (const InvalidPsi& e) {
    throw InvalidPsi(std::string("/steps: ") + e.what());
  }
}

StepCdf parse_step_cdf(const Json& root) {
  const Json& jumps = array_at(field(root, "jumps", ""), "/jumps");
  std::vector<CdfJump> parsed;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const std::string ptr = child("/jumps", k);
    const Json& entry = array_at(jumps[k], ptr);
    if (entry.size() != 2) fail(ptr, "expected [R, value]");
    parsed.push_back({rational_at(entry[0], child(ptr, 0)), rational_at(entry[1], child(ptr, 1))});
  }
  return rooted("", [&] { return StepCdf(std::move(parsed)); });
}

std::vector<Permutation> parse_group(const Json& root) {
  const bool wrapped = root.is_object();
  const std::string base = wrapped ? "/group" : "";
  const Json& list = array_at(wrapped ? field(root, "group", "") : root, base);
  std::vector<Permutation> group;
  for (std::size_t k = 0; k < list.size(); ++k) group.push_back(int_list(list[k], child(base, k)));
  return group;
}

AtomicMeasure2D parse_measure(const Json& root) {
  if (root.is_object() && root.contains("dimension")) {
    const int d = integer_at(root["dimension"], "/dimension");
    if (d < 1) fail("/dimension", "must be positive");
    const Json& list = array_at(field(root, "atoms", ""), "/atoms");
    std::vector<AtomicMeasure2D::Atom> atoms;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string ptr = child("/atoms", k);
      const Json& entry = array_at(list[k], ptr);
      if (entry.size() != 3) fail(ptr, "expected [x, y, weight]");
      AtomicMeasure2D::Atom atom;
      atom.x = vector_at(entry[0], child(ptr, 0));
      atom.y = vector_at(entry[1], child(ptr, 1));
      atom.weight = rational_at(entry[2], child(ptr, 2));
      if (atom.x.size() != d) fail(child(ptr, 0), "expected " + std::to_string(d) + " coordinates");
      if (atom.y.size() != d) fail(child(ptr, 1), "expected " + std::to_string(d) + " coordinates");
      if (atom.weight < 0) fail(child(ptr, 2), "weight must be non-negative");
      atoms.push_back(std::move(atom));
    }
    return AtomicMeasure2D::euclidean(d, atoms);
  }
  FiniteMetricSpace space = parse_space(root);
  const Json& rho = array_at(field(root, "rho", ""), "/rho");
  std::vector<CorrelationAtom> atoms;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const std::string ptr = child("/rho", k);
    const Json& entry = array_at(rho[k], ptr);
    if (entry.size() != 3) fail(ptr, "expected [a, b, weight]");
    atoms.push_back({point_at(entry[0], child(ptr, 0), space), point_at(entry[1], child(ptr, 1), space),
                     rational_at(entry[2], child(ptr, 2))});
  }
  return AtomicMeasure2D::finite(space, atoms);
}

std::vector<PointAtom> parse_point_measure(const Json& root, int& dimension) {
  dimension = integer_at(field(root, "dimension", ""), "/dimension");
  if (dimension < 1) fail("/dimension", "must be positive");
  const Json& list = array_at(field(root, "rho_bar", ""), "/rho_bar");
  std::vector<PointAtom> atoms;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string ptr = child("/rho_bar", k);
    const Json& entry = array_at(list[k], ptr);
    if (entry.size() != 2) fail(ptr, "expected [y, weight]");
    PointAtom atom{vector_at(entry[0], child(ptr, 0)), rational_at(entry[1], child(ptr, 1))};
    if (atom.y.size() != dimension)
      fail(child(ptr, 0), "expected " + std::to_string(dimension) + " coordinates");
    if (atom.weight < 0) fail(child(ptr, 1), "weight must be non-negative");
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

Json rational_json(const Rational& value) { return format_rational(value); }

Json extended_json(const ExtendedRational& value) { return format_extended(value); }

Json enclosure_json(const Enclosure& value) {
  if (value.exact()) return extended_json(value.lower);
  Json node = Json::object();
  node["lower"] = extended_json(value.lower);
  node["upper"] = extended_json(value.upper);
  return node;
}

Json matrix_json(const MatrixQ& matrix) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back(format_rational(matrix(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_json(const VectorQ& vector) {
  Json list = Json::array();
  for (Eigen::Index k = 0; k < vector.size(); ++k) list.push_back(format_rational(vector(k)));
  return list;
}

Json subset_mixture_json(const SubsetMixture& mixture) {
  Json list = Json::array();
  for (const auto& atom : mixture.atoms) {
    Json entry = Json::object();
    entry["subset"] = int_list_json(atom.subset.indices());
    entry["weight"] = format_rational(atom.weight);
    list.push_back(std::move(entry));
  }
  return list;
}

SubsetMixture parse_subset_mixture(const Json& node, int points) {
  const Json& list = array_at(node, "/mixture");
  SubsetMixture mixture;
  mixture.points = points;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string ptr = child("/mixture", k);
    const std::vector<int> members = int_list(field(list[k], "subset", ptr), child(ptr, "subset"));
    for (int m : members)
      if (m < 0 || m >= points) fail(child(ptr, "subset"), "point index out of range");
    const Rational weight = rational_at(field(list[k], "weight", ptr), child(ptr, "weight"));
    if (weight < 0) fail(child(ptr, "weight"), "weight must be non-negative");
    mixture.atoms.push_back({Subset::of(members), weight});
  }
  return mixture;
}

Json config_mixture_json(const ConfigMixture& mixture) {
  Json list = Json::array();
  for (const auto& atom : mixture.atoms) {
    Json entry = Json::object();
    entry["config"] = int_list_json(atom.config.multiplicity);
    entry["weight"] = format_rational(atom.weight);
    list.push_back(std::move(entry));
  }
  return list;
}

ConfigMixture parse_config_mixture(const Json& node, int points) {
  const Json& list = array_at(node, "/mixture");
  ConfigMixture mixture;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string ptr = child("/mixture", k);
    std::vector<int> m = int_list(field(list[k], "config", ptr), child(ptr, "config"));
    if (static_cast<int>(m.size()) != points)
      fail(child(ptr, "config"), "expected " + std::to_string(points) + " multiplicities");
    for (int v : m)
      if (v < 0) fail(child(ptr, "config"), "multiplicities must be non-negative");
    const Rational weight = rational_at(field(list[k], "weight", ptr), child(ptr, "weight"));
    if (weight < 0) fail(child(ptr, "weight"), "weight must be non-negative");
    mixture.atoms.push_back({Configuration(std::move(m)), weight});
  }
  return mixture;
}

Json set_certificate_json(const InfeasibilityCertificate& certificate) {
  Json node = Json::object();
  node["kind"] = "set";
  node["c"] = format_rational(certificate.c);
  node["a"] = matrix_json(certificate.a);
  node["gap"] = format_rational(certificate.gap);
  std::vector<int> members;
  for (std::size_t k = 0; k < certificate.minimizer.size(); ++k)
    if (certificate.minimizer[k] != 0) members.push_back(static_cast<int>(k));
  node["minimizer"] = int_list_json(members);
  return node;
}

Json pp_certificate_json(const InfeasibilityCertificate& certificate) {
  Json node = Json::object();
  node["kind"] = "pp";
  node["c"] = format_rational(certificate.c);
  node["a"] = matrix_json(certificate.a);
  node["b"] = vector_json(certificate.b);
  node["gap"] = format_rational(certificate.gap);
  node["minimizer"] = int_list_json(certificate.minimizer);
  return node;
}

namespace {

// Certificates appear either bare or under "certificate" in a report.
const Json& certificate_root(const Json& root, std::string& base) {
  base.clear();
  if (root.is_object() && root.contains("certificate")) {
    base = "/certificate";
    if (root["certificate"].is_null()) fail(base, "report carries no certificate");
    return root["certificate"];
  }
  return root;
}

}  // namespace

InfeasibilityCertificate parse_set_certificate(const Json& root, int points) {
  std::string base;
  const Json& node = certificate_root(root, base);
  InfeasibilityCertificate certificate;
  certificate.c = rational_at(field(node, "c", base), child(base, "c"));
  certificate.a = square_matrix_at(field(node, "a", base), child(base, "a"), points);
  certificate.gap = rational_at(field(node, "gap", base), child(base, "gap"));
  certificate.minimizer.assign(static_cast<std::size_t>(points), 0);
  for (int m : int_list(field(node, "minimizer", base), child(base, "minimizer"))) {
    if (m < 0 || m >= points) fail(child(base, "minimizer"), "point index out of range");
    certificate.minimizer[static_cast<std::size_t>(m)] = 1;
  }
  if (node.contains("b") && !node["b"].is_null() && !node["b"].empty())
    fail(child(base, "b"), "set certificates carry no linear part");
  return certificate;
}

InfeasibilityCertificate parse_pp_certificate(const Json& root, int points) {
  std::string base;
  const Json& node = certificate_root(root, base);
  InfeasibilityCertificate certificate;
  certificate.c = rational_at(field(node, "c", base), child(base, "c"));
  certificate.a = square_matrix_at(field(node, "a", base), child(base, "a"), points);
  if (node.contains("b") && !node["b"].is_null()) {
    certificate.b = vector_at(node["b"], child(base, "b"));
    if (certificate.b.size() != 0 && certificate.b.size() != points)
      fail(child(base, "b"), "expected " + std::to_string(points) + " entries");
  }
  certificate.gap = rational_at(field(node, "gap", base), child(base, "gap"));
  certificate.minimizer = int_list(field(node, "minimizer", base), child(base, "minimizer"));
  return certificate;
}

}  // namespace realkit::io
