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

#ifndef REALKIT_ERRORS_HPP_
#define REALKIT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace realkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// An exact enumeration would exceed its configured size limit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class InvalidGroup : public Error {
 public:
  using Error::Error;
};

class InvalidPsi : public Error {
 public:
  using Error::Error;
};

class InvalidBeta : public Error {
 public:
  using Error::Error;
};

// The requested construction does not exist for the given data.
class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace realkit

#endif  // REALKIT_ERRORS_HPP_
