// Copyright 2026 The rsfbl Authors
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

#ifndef RSFBL_ERROR_HPP
#define RSFBL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rsfbl {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value object failed its invariants.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested target rates cannot meet the rate-feasibility bounds.
class infeasible_target : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver did not behave (pivot limit, non-finite values).
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid scenario configuration. Carries the offending line
/// when one is known (0 otherwise).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace rsfbl

#endif  // RSFBL_ERROR_HPP
