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

#ifndef WHICHWAY_SCENARIOS_H_
#define WHICHWAY_SCENARIOS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whichway/elements.h"
#include "whichway/metrics.h"
#include "whichway/propagation.h"

namespace whichway {

enum class ScenarioId {
  kSigma1Interference,
  kSigma2Control,
  kFig4aP1ClosedControl,
  kFig4aP1ClosedWire,
  kFig4bP2ClosedControl,
  kFig4bP2ClosedWire,
  kFig4cBothOpenControl,
  kFig4cBothOpenWire,
  kDecompositionSigma1,
  kDecompositionSigma2,
  kWireSweep,
};

inline constexpr ScenarioId kAllScenarios[] = {
    ScenarioId::kSigma1Interference,   ScenarioId::kSigma2Control,
    ScenarioId::kFig4aP1ClosedControl, ScenarioId::kFig4aP1ClosedWire,
    ScenarioId::kFig4bP2ClosedControl, ScenarioId::kFig4bP2ClosedWire,
    ScenarioId::kFig4cBothOpenControl, ScenarioId::kFig4cBothOpenWire,
    ScenarioId::kDecompositionSigma1,  ScenarioId::kDecompositionSigma2,
    ScenarioId::kWireSweep,
};

std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> parse_scenario(std::string_view name);

/// Which pinholes transmit in the baseline runs and how: p1/p2 move the 3 mm
/// selector onto one beam, mask_p1/mask_p2 keep only that pinhole open in the
/// dual-pinhole mask.
enum class SelectorMode { kBoth, kP1, kP2, kMaskP1, kMaskP2 };
/// How the single-pinhole legs of the fig4 suite close a pinhole.
enum class ClosureMethod { kMask, kSelector };
enum class DimensionMode { k1D, k2D };
enum class Plane { kSigma1, kSigma2 };

std::string_view to_string(SelectorMode m);
std::string_view to_string(ClosureMethod m);
std::string_view to_string(DimensionMode m);
std::string_view to_string(Plane p);

struct Numerics {
  int grid_n = 4096;
  double grid_dx = 2.5e-6;
  DimensionMode dimension = DimensionMode::k2D;
  double guard_fraction = 0.10;
  double band_floor = 1e-3;
  SelectorMode selector_mode = SelectorMode::kBoth;
  ClosureMethod closure = ClosureMethod::kMask;
  int dark_fringe_side = +1;  // +1: dark fringe at +x, -1: at -x
  kernels::Backend backend = kernels::default_backend();

  GridSpec grid(double wavelength) const;
  PropagationOptions propagation() const;
  void validate() const;

  bool operator==(const Numerics&) const = default;
};

struct PlaneMap {
  std::string plane;
  IntensityMap map;
};

struct ScenarioReport {
  ScenarioId id = ScenarioId::kSigma1Interference;
  ExperimentGeometry geometry;  // wire_positions resolved
  Numerics numerics;
  std::vector<PlaneMap> maps;
  std::optional<Profile> profile;
  std::vector<VisibilityReport> visibility;  // central pairs, nearest first
  std::vector<double> dark_fringes;          // two minima nearest the axis
  std::optional<FluxReport> flux;
  std::optional<RoiPair> rois;
  std::optional<double> crosstalk;
  std::optional<double> lobe_width;  // second-moment radius of the lit channel
  std::optional<double> roi_power_fraction;  // ROI flux over total plane power
  std::optional<DecompositionReport> decomposition;
  std::vector<double> wire_positions;
  TrainDiagnostics diagnostics;
  std::vector<std::string> flags;
};

struct FluxPair {
  std::string label;
  FluxReport flux;
  double r_uncertainty = 0.0;  // percent
  double control_width = 0.0;  // second-moment radius of the lit channel
  double wire_width = 0.0;
};

struct Fig4Report {
  RoiPair rois;
  double plane_distance = 0.0;  // sigma2_z - sigma1_z
  std::vector<double> wire_positions;
  FluxPair p1_closed;
  FluxPair p2_closed;
  FluxPair both_open;
  /// Fraction of the both-open sigma1 power falling on the wire strips.
  double intercepted_fraction = 0.0;
  std::vector<ScenarioReport> runs;  // the six legs in suite order
  TrainDiagnostics diagnostics;
};

struct SweepReport {
  std::vector<double> x;
  std::vector<double> r_percent;
  std::vector<double> dark_fringes;
  RoiPair rois;
  TrainDiagnostics diagnostics;
};

/// Monte Carlo detections on one plane of the both-open bench. At sigma1 the
/// visibility is measured in bins of a quarter fringe period centred on the
/// nearest bright/dark pair, over the rows within the central window, and
/// compared with the expectation for the same bins. At sigma2 the counts per
/// which-way ROI are reported.
struct PhotonSummary {
  std::string plane;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double field_v = 0.0;  // visibility of the intensity profile
  BinnedVisibility expected;
  BinnedVisibility sampled;
  double hist_lo = 0.0;
  double hist_hi = 0.0;
  std::vector<std::size_t> hist_counts;  // 64 x bins over [hist_lo, hist_hi)
  std::vector<std::size_t> roi_counts;    // sigma2 only: 1', 2'
};

/// The optical bench for one (geometry, numerics) pair. Fields incident on
/// sigma1 are memoized per pinhole configuration; every result is a pure
/// function of the constructor arguments, and all members are safe to call
/// from several threads.
class Bench {
 public:
  Bench(ExperimentGeometry geometry, Numerics numerics,
        PlanCache* cache = &global_plan_cache());

  const ExperimentGeometry& geometry() const { return geometry_; }
  const Numerics& numerics() const { return numerics_; }
  const GridSpec& grid() const { return grid_; }
  const Propagator& propagator() const { return propagator_; }

  /// Selector x-center: on the axis for kBoth, otherwise on the chief ray of
  /// the pinhole to pass, (+-s/2)(1 - z_sel/f).
  double selector_center(PinholeSet open) const;

  OpticalTrain train(PinholeSet open, ClosureMethod method,
                     std::span<const double> wires,
                     bool include_aperture_stop = true) const;

  /// Plane wave at z = 0 before the lens.
  Field source() const;

  /// Field arriving at sigma1, before the wire.
  std::shared_ptr<const TrainResult> sigma1_incident(PinholeSet open,
                                                     ClosureMethod method) const;
  TrainResult sigma2(PinholeSet open, ClosureMethod method,
                     std::span<const double> wires) const;

  /// Central row band used for sigma1 profiles.
  Profile sigma1_profile(const IntensityMap& map) const;
  /// Half-width of the window searched for the central fringes.
  double central_half_window() const;

  /// Dark fringe nearest the axis on the requested side of the both-open
  /// sigma1 pattern.
  double dark_fringe_position() const;
  std::vector<double> dark_fringes() const;
  /// geometry.wire_positions, or the auto-located dark fringe.
  std::vector<double> wire_positions() const;

  /// Sum over sigma1 of I (1 - t_wire) dA over total sigma1 power.
  double intercepted_fraction(PinholeSet open, std::span<const double> wires) const;

  /// Sampling diagnostics of every free-space hop of the default train plus
  /// the direct sigma1 -> sigma2 distance; the required excursion of a hop
  /// is the chief-ray displacement (s/2)|dz|/f.
  std::vector<std::pair<std::string, SamplingDiagnostics>> sampling_report() const;

  ScenarioReport run(ScenarioId id) const;
  Fig4Report fig4() const;
  ScenarioReport decomposition(Plane plane) const;
  SweepReport sweep(double x_min, double x_max, int steps) const;

  void release_cache() const;

 private:
  PinholeSet baseline_set() const;
  ClosureMethod baseline_method() const;
  ScenarioReport sigma1_interference() const;
  ScenarioReport sigma2_control() const;
  ScenarioReport fig4_leg(ScenarioId id) const;

  ExperimentGeometry geometry_;
  Numerics numerics_;
  GridSpec grid_;
  Propagator propagator_;

  mutable std::mutex mutex_;
  mutable std::map<std::pair<PinholeSet, ClosureMethod>,
                   std::shared_ptr<const TrainResult>> incident_;
  mutable std::optional<std::vector<double>> dark_fringes_;
};

ScenarioReport run_scenario(const ExperimentGeometry& geometry,
                            const Numerics& numerics, ScenarioId id);
Fig4Report run_fig4_suite(const ExperimentGeometry& geometry, const Numerics& numerics);
/// Decomposition of the sigma1 or sigma2 pattern into the single-pinhole
/// intensities and the cross term; at sigma1 the report also carries the
/// visibility of the total pattern.
ScenarioReport run_decomposition(const ExperimentGeometry& geometry,
                                 const Numerics& numerics, Plane plane);
PhotonSummary run_photons(const Bench& bench, Plane plane, std::size_t n,
                          std::uint64_t seed);

SweepReport sweep_wire(const ExperimentGeometry& geometry, const Numerics& numerics,
                       double x_min, double x_max, int steps);

}  // namespace whichway

#endif  // WHICHWAY_SCENARIOS_H_
