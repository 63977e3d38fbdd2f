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

// JSON instance parsing and report serialisation. Numbers are exchanged as
// decimal strings ("0.25") or fractions ("1/3"); integers may also appear as
// JSON integers. Floating-point JSON numbers are rejected. Every schema error
// names the JSON pointer of the offending field.

#ifndef REALKIT_IO_HPP_
#define REALKIT_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "realkit/contact.hpp"
#include "realkit/metric_space.hpp"
#include "realkit/pp_realizer.hpp"
#include "realkit/psi.hpp"
#include "realkit/regularity.hpp"
#include "realkit/set_realizer.hpp"

namespace realkit::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; throws InvalidInstance on I/O or syntax
/// errors.
Json read_json(const std::string& path);
std::string read_file(const std::string& path);

/// Hex SHA-256 of the given byte strings, each length-prefixed.
std::string digest(const std::vector<std::string>& contents);

Rational rational_at(const Json& node, const std::string& pointer);
ExtendedRational extended_at(const Json& node, const std::string& pointer);
int integer_at(const Json& node, const std::string& pointer);
const Json& field(const Json& node, const std::string& key, const std::string& pointer);
const Json& array_at(const Json& node, const std::string& pointer);
VectorQ vector_at(const Json& node, const std::string& pointer);

/// {"labels": [...], "dist": [[...]]} or {"n": k} for k points at mutual
/// distance one.
FiniteMetricSpace parse_space(const Json& root);
TwoPointTarget parse_two_point_target(const Json& root);
/// Space fields plus "rho" ([i, j, "w"] with indices or labels), optional
/// "rho1", "cap", "simple", "hardcore_eps", "strict_hardcore".
CorrelationTarget parse_correlation_target(const Json& root);
/// {"steps": [["t", "value" | "inf"], ...]}
PsiFunction parse_psi(const Json& root);
/// {"jumps": [["R", "value"], ...]}
StepCdf parse_step_cdf(const Json& root);
/// {"group": [[...], ...]} or a bare array of permutations.
std::vector<Permutation> parse_group(const Json& root);
/// Finite ("rho" atoms over a space, listed literally) or Euclidean
/// ({"dimension": d, "atoms": [[[x...], [y...], "w"], ...]}).
AtomicMeasure2D parse_measure(const Json& root);
/// {"dimension": d, "rho_bar": [[[y...], "w"], ...]}
std::vector<PointAtom> parse_point_measure(const Json& root, int& dimension);
std::vector<Rational> parse_rational_list(const Json& node, const std::string& pointer);

Json rational_json(const Rational& value);
Json extended_json(const ExtendedRational& value);
Json enclosure_json(const Enclosure& value);
Json matrix_json(const MatrixQ& matrix);
Json vector_json(const VectorQ& vector);

Json subset_mixture_json(const SubsetMixture& mixture);
SubsetMixture parse_subset_mixture(const Json& node, int points);
Json config_mixture_json(const ConfigMixture& mixture);
ConfigMixture parse_config_mixture(const Json& node, int points);

/// Set certificates store the minimizer as an index list, point-process
/// certificates as a multiplicity vector and carry the linear part "b".
Json set_certificate_json(const InfeasibilityCertificate& certificate);
Json pp_certificate_json(const InfeasibilityCertificate& certificate);
InfeasibilityCertificate parse_set_certificate(const Json& root, int points);
InfeasibilityCertificate parse_pp_certificate(const Json& root, int points);

}  // namespace realkit::io

#endif  // REALKIT_IO_HPP_
