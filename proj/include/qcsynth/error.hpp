// Copyright 2026 The qcsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. Carries a 1-based line/column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Invalid argument or inconsistent object (bad gate operands, empty kind set).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Shapes that must agree do not (network vs. vocabulary, table sizes).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A specification that is not a valid reversible/unitary target.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Binary file with a wrong magic, version, or truncated payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A circuit reported as a solution does not reproduce its target.
/// Always an internal bug, never bad user input.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Training produced a NaN or infinite loss.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcsynth
