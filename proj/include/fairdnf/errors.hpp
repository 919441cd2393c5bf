// Copyright 2026 The FairDNF Authors.
//
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

#pragma once

#include <stdexcept>
#include <string>

namespace fairdnf {

// Error hierarchy. Each leaf maps to a distinct CLI exit code (see tools/).

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing configuration: unknown columns, invalid parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: unparseable cells, empty tables.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside a solver (singular basis and the like).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Iteration or time budget exhausted without a usable answer.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an API precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// The model admits no solution under the requested fairness tolerances.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairdnf
