// Copyright 2026 The weakmeas Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace weakmeas {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (out-of-domain parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ImpossibleOutcome : public Error {
 public:
  using Error::Error;
};

class NonPositiveEpsilon : public Error {
 public:
  using Error::Error;
};

class OrthogonalPostSelection : public Error {
 public:
  using Error::Error;
};

class InadmissiblePostSelection : public Error {
 public:
  using Error::Error;
};

class StepOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Raised when a computation cannot produce a finite, accurate number.
/// The CLI maps every subclass to exit code 3.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegenerateRecord : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Configuration rejected; `field()` is a JSON-pointer style path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace weakmeas
