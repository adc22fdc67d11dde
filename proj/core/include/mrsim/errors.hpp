// Copyright 2026 The mrsim Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrsim {

/// Invalid physical parameter, gain, or specification value.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical/physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// API misuse (mismatched shapes, stale caches, incompatible logs).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite value produced during numeric evaluation.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t component)
      : std::runtime_error(what), component_(component) {}

  /// Index of the offending state/derivative component.
  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Experiment file problem; carries the source line when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")"
                                    : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mrsim
