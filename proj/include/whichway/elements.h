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

#ifndef WHICHWAY_ELEMENTS_H_
#define WHICHWAY_ELEMENTS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whichway/field.h"
#include "whichway/kernels.h"
#include "whichway/propagation.h"

namespace whichway {

/// Every physical constant of the bench, SI units. The origin is the
/// midpoint between the pinholes; pinhole 1 sits at +x, pinhole 2 at -x.
struct ExperimentGeometry {
  double wavelength = 650e-9;
  double focal_length = 0.20;
  double pinhole_diameter = 250e-6;
  double pinhole_separation = 2e-3;  // center to center
  double selector_z = 13e-3;
  double selector_diameter = 3e-3;
  double as_z = 210e-3;
  double as_diameter = 500e-6;
  double sigma1_z = 0.20;
  double sigma2_z = 0.515;
  double wire_thickness = 10e-6;
  /// Wire x-positions at sigma1. Empty optional: place one wire on the dark
  /// fringe located on the computed pattern.
  std::optional<std::vector<double>> wire_positions;

  /// Throws std::invalid_argument on nonpositive lengths, sigma1 >= sigma2 or
  /// overlapping pinholes.
  void validate() const;
  double separation_in_wavelengths() const { return pinhole_separation / wavelength; }

  bool operator==(const ExperimentGeometry&) const = default;
};

enum class PinholeSet { kBoth, kFirstOnly, kSecondOnly };

std::string_view to_string(PinholeSet set);

struct ThinLens {
  double focal_length = 0.0;
};

struct CircularAperture {
  double center_x = 0.0;
  double center_y = 0.0;
  double diameter = 0.0;
};

struct DualPinhole {
  double separation = 0.0;
  double diameter = 0.0;
  PinholeSet open = PinholeSet::kBoth;
};

enum class WireOrientation { kVertical };

struct WireGrid {
  std::vector<double> positions;
  double thickness = 0.0;
  WireOrientation orientation = WireOrientation::kVertical;
};

using ElementSpec = std::variant<ThinLens, CircularAperture, DualPinhole, WireGrid>;

std::string describe(const ElementSpec& element);

// Transmittance masks. Edges are area weighted: each sample carries the
// fraction of its cell covered by the open region. In 1D mode a disk becomes
// the slit |x - cx| <= d/2.

std::vector<double> disk_transmittance(const GridSpec& grid, double cx, double cy,
                                       double diameter);
std::vector<double> dual_pinhole_transmittance(const GridSpec& grid,
                                               double separation, double diameter,
                                               PinholeSet open);
/// Per-column transmittance of opaque vertical strips |x - p| <= t/2.
std::vector<double> wire_column_transmittance(const GridSpec& grid,
                                              std::span<const double> positions,
                                              double thickness);

Field apply_thin_lens(Field field, double focal_length,
                      kernels::Backend backend = kernels::default_backend());
Field apply_circular_aperture(Field field, double cx, double cy, double diameter,
                              kernels::Backend backend = kernels::default_backend());
Field apply_dual_pinhole(Field field, double separation, double diameter,
                         PinholeSet open = PinholeSet::kBoth,
                         kernels::Backend backend = kernels::default_backend());
Field apply_wire_grid(Field field, std::span<const double> positions,
                      double thickness,
                      WireOrientation orientation = WireOrientation::kVertical,
                      kernels::Backend backend = kernels::default_backend());
Field apply_element(Field field, const ElementSpec& element,
                    kernels::Backend backend = kernels::default_backend());

/// Elements sharing a z value form one stage and are applied in insertion
/// order (the lens and the dual pinhole both sit at z = 0).
struct Stage {
  double z = 0.0;
  std::vector<ElementSpec> elements;
};

struct ObservationPlane {
  std::string name;
  double z = 0.0;
};

class OpticalTrain {
 public:
  OpticalTrain& add(double z, ElementSpec element);
  OpticalTrain& add_plane(std::string name, double z);

  const std::vector<Stage>& stages() const { return stages_; }
  const std::vector<ObservationPlane>& planes() const { return planes_; }
  std::optional<double> plane_z(std::string_view name) const;
  bool empty() const { return stages_.empty(); }

 private:
  std::vector<Stage> stages_;  // strictly increasing z
  std::vector<ObservationPlane> planes_;
};

struct TrainDiagnostics {
  std::vector<SamplingDiagnostics> hops;
  double guard_absorbed = 0.0;
  double band_rejected = 0.0;

  double min_admitted_fraction() const;
  void merge(const TrainDiagnostics& other);
};

struct TrainResult {
  Field field;
  TrainDiagnostics diagnostics;
};

enum class StopMode {
  kAfterElements,  // elements located at stop_at_z are applied
  kIncident,       // the field arriving at stop_at_z, before its elements
};

/// Propagates `input` (the field incident at input.z) through every stage with
/// input.z <= z <= stop_at_z in z order.
TrainResult run_train(Field input, const OpticalTrain& train, double stop_at_z,
                      const Propagator& propagator,
                      StopMode mode = StopMode::kAfterElements);

}  // namespace whichway

#endif  // WHICHWAY_ELEMENTS_H_
