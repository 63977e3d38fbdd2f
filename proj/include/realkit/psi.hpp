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

#ifndef REALKIT_PSI_HPP_
#define REALKIT_PSI_HPP_

#include <vector>

#include "realkit/rational.hpp"

namespace realkit {

struct PsiStep {
  Rational t;
  ExtendedRational value;
};

/// Non-increasing, right-continuous step function on [0, inf):
/// psi(t) = value_k on [t_k, t_{k+1}), value_last on [t_last, inf) and +inf
/// on [0, t_0). An infinite value on an initial interval encodes a hard core.
class PsiFunction {
 public:
  /// Throws InvalidPsi unless the breakpoints are non-negative and strictly
  /// increasing and the values are non-increasing.
  explicit PsiFunction(std::vector<PsiStep> steps);

  /// Constant psi(t) = value for all t >= 0.
  static PsiFunction constant(const Rational& value);

  ExtendedRational operator()(const Rational& t) const;
  const std::vector<PsiStep>& steps() const { return steps_; }

 private:
  std::vector<PsiStep> steps_;
};

}  // namespace realkit

#endif  // REALKIT_PSI_HPP_
