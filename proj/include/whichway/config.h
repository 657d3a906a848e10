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

#ifndef WHICHWAY_CONFIG_H_
#define WHICHWAY_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "whichway/elements.h"
#include "whichway/errors.h"
#include "whichway/scenarios.h"

namespace whichway {

/// A fully resolved run configuration. Every key has a default, so an empty
/// file yields the reference bench.
struct ExperimentConfig {
  ExperimentGeometry geometry;
  Numerics numerics;
  std::uint64_t seed = 1;
  std::int64_t photons_n = 1000000;
  std::string output_dir = "out";
  double preview_gamma = 0.5;

  /// Throws ConfigError when the combination is inconsistent.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored; lists are comma-separated. Unknown keys, duplicate keys, bad
/// values and invariant violations raise ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file. I/O failures raise std::runtime_error.
ExperimentConfig load_config(const std::string& path);

/// Every key, in a fixed order, with shortest round-trip numbers, so that
/// parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& config);

/// Shortest decimal that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace whichway

#endif  // WHICHWAY_CONFIG_H_
