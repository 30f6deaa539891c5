// Copyright 2026 The lgtsim Authors
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
#include <utility>

#include <Eigen/Dense>

namespace lgtsim {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A dense construction would exceed the configured size guard.
class CapacityError : public Error {
  public:
    using Error::Error;
};

class LoweringError : public Error {
  public:
    using Error::Error;
};

/// The gate has no involutory generator, so the shift rule does not apply.
class UnsupportedGateError : public Error {
  public:
    using Error::Error;
};

/// Empty histogram after filtering. Distinct from a correlator value of 0.
class NoDataError : public Error {
  public:
    using Error::Error;
};

/// A search ran out of candidates (e.g. no depth up to l_max passed).
class ExhaustionError : public Error {
  public:
    using Error::Error;
};

class MissingArtifactError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Non-finite gradient or Hessian. Carries the last finite iterate.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string &what, Eigen::VectorXd last_good)
        : Error(what), last_good_(std::move(last_good)) {}
    const Eigen::VectorXd &last_good() const noexcept { return last_good_; }

  private:
    Eigen::VectorXd last_good_;
};

} // namespace lgtsim
