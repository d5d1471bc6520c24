// Copyright 2026 The condisc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONDISC_ERRORS_H_
#define CONDISC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace condisc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid index, zero-probability conditioning, or out-of-range parameter.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A table (utility, prior, policy, punishment family) is missing entries.
class TotalityError : public Error {
 public:
  using Error::Error;
};

// A policy was used with the wrong conditioning scope.
class ScopeError : public Error {
 public:
  using Error::Error;
};

// A device or program read a type that was never disclosed to it.
class InformationViolation : public Error {
 public:
  using Error::Error;
};

// A payoff vector does not match the policy that supposedly induces it.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace condisc

#endif  // CONDISC_ERRORS_H_
