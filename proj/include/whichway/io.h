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

#ifndef WHICHWAY_IO_H_
#define WHICHWAY_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "whichway/config.h"
#include "whichway/metrics.h"
#include "whichway/propagation.h"
#include "whichway/scenarios.h"

namespace whichway {

/// Second header line of an AFGRID1 file: `nx ny dx dy wavelength z`.
std::string grid_header(const IntensityMap& map);

/// Raw float64 dump: `AFGRID1\n`, the header line, then nx*ny little-endian
/// doubles, row-major. Throws std::runtime_error on I/O failure.
void write_grid(const IntensityMap& map, const std::filesystem::path& path);
IntensityMap read_grid(const std::filesystem::path& path);

/// 16-bit binary PGM (P5, maxval 65535). Pixel = round(65535 (v/max)^gamma);
/// an all-zero map gives an all-zero image. Row 0 of the image is the top
/// (largest y) row of the map.
void write_preview(const IntensityMap& map, const std::filesystem::path& path,
                   double gamma = 0.5);

struct Pgm {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<std::uint16_t> pixels;  // row-major, top row first
};
Pgm read_pgm(const std::filesystem::path& path);

/// Everything one CLI invocation produces.
struct RunOutputs {
  std::string command;  // subcommand and its own options, as typed
  ExperimentConfig config;
  std::vector<ScenarioReport> scenarios;
  std::optional<Fig4Report> fig4;
  std::optional<SweepReport> sweep;
  std::optional<PhotonSummary> photons;
  std::vector<std::pair<std::string, SamplingDiagnostics>> sampling;
  std::string timestamp;  // the only line allowed to differ between reruns
  bool write_grids = true;
};

std::string sha256_hex(std::string_view data);

std::string metrics_csv(const RunOutputs& run);
std::string profile_csv(const Profile& profile);
std::string sweep_csv(const SweepReport& sweep);
std::string manifest_text(const RunOutputs& run);

/// Writes metrics.csv, profile_<scenario>.csv, sweep.csv (when a sweep ran),
/// photons_<plane>.csv (when photons ran), grid_<scenario>_<plane>.afgrid and
/// .pgm for every map, and manifest.txt. Creates `dir` if needed.
void write_reports(const RunOutputs& run, const std::filesystem::path& dir);

}  // namespace whichway

#endif  // WHICHWAY_IO_H_
