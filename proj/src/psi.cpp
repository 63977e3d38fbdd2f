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

#include "realkit/psi.hpp"

#include <string>

#include "realkit/errors.hpp"

namespace realkit {

PsiFunction::PsiFunction(std::vector<PsiStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw InvalidPsi("psi needs at least one breakpoint");
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const std::string where = "step " + std::to_string(k);
    if (steps_[k].t < 0) throw InvalidPsi(where + ": negative breakpoint");
    if (k == 0) continue;
    if (!(steps_[k - 1].t < steps_[k].t))
      throw InvalidPsi(where + ": breakpoints must be strictly increasing");
    if (steps_[k - 1].value < steps_[k].value)
      throw InvalidPsi(where + ": psi increases from " + format_extended(steps_[k - 1].value) +
                       " to " + format_extended(steps_[k].value));
  }
}

PsiFunction PsiFunction::constant(const Rational& value) {
  return PsiFunction({PsiStep{Rational(0), ExtendedRational(value)}});
}

ExtendedRational PsiFunction::operator()(const Rational& t) const {
  if (t < steps_.front().t) return ExtendedRational::infinity();
  // Last breakpoint <= t.
  std::size_t lo = 0, hi = steps_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (steps_[mid].t <= t)
      lo = mid;
    else
      hi = mid;
  }
  return steps_[lo].value;
}

}  // namespace realkit
