// Copyright 2026 The Whichway Authors
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

#ifndef WHICHWAY_ERRORS_H_
#define WHICHWAY_ERRORS_H_

#include <stdexcept>
#include <string>

namespace whichway {

/// Malformed or inconsistent configuration text. `line` is 1-based, 0 when the
/// problem is not tied to a single line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The numerics cannot produce a trustworthy answer (undersampled phase,
/// band too narrow, a metric that cannot be located on the computed map).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric could not be evaluated on the given data (no fringe extremum,
/// unresolved lobes, zero-power map).
class AnalysisError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace whichway

#endif  // WHICHWAY_ERRORS_H_
