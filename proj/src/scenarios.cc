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

#include "whichway/scenarios.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace whichway {

namespace {

constexpr const char* kSigma1 = "sigma1";
constexpr const char* kSigma2 = "sigma2";

struct LegSpec {
  PinholeSet open;
  bool wire;
};

LegSpec leg_spec(ScenarioId id) {
  switch (id) {
    case ScenarioId::kFig4aP1ClosedControl: return {PinholeSet::kSecondOnly, false};
    case ScenarioId::kFig4aP1ClosedWire: return {PinholeSet::kSecondOnly, true};
    case ScenarioId::kFig4bP2ClosedControl: return {PinholeSet::kFirstOnly, false};
    case ScenarioId::kFig4bP2ClosedWire: return {PinholeSet::kFirstOnly, true};
    case ScenarioId::kFig4cBothOpenControl: return {PinholeSet::kBoth, false};
    case ScenarioId::kFig4cBothOpenWire: return {PinholeSet::kBoth, true};
    default: throw std::invalid_argument("not a fig4 suite scenario");
  }
}

// Channel 1' (pinhole 1) lands at -x, channel 2' at +x.
int lit_half_plane(PinholeSet open) {
  switch (open) {
    case PinholeSet::kFirstOnly: return -1;
    case PinholeSet::kSecondOnly: return +1;
    case PinholeSet::kBoth: return 0;
  }
  return 0;
}

double roi_flux(const IntensityMap& map, const RoiPair& rois, double dr = 0.0) {
  ROI a = rois.first, b = rois.second;
  a.radius += dr;
  b.radius += dr;
  return flux_in_roi(map, a) + flux_in_roi(map, b);
}

void note_warnings(const TrainDiagnostics& d, std::vector<std::string>& flags) {
  for (const auto& h : d.hops) {
    if (h.has(kWarnExcursionTooLarge)) {
      flags.push_back("excursion_unsupported");
      return;
    }
  }
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::kSigma1Interference: return "Sigma1Interference";
    case ScenarioId::kSigma2Control: return "Sigma2Control";
    case ScenarioId::kFig4aP1ClosedControl: return "Fig4a_P1Closed_Control";
    case ScenarioId::kFig4aP1ClosedWire: return "Fig4a_P1Closed_Wire";
    case ScenarioId::kFig4bP2ClosedControl: return "Fig4b_P2Closed_Control";
    case ScenarioId::kFig4bP2ClosedWire: return "Fig4b_P2Closed_Wire";
    case ScenarioId::kFig4cBothOpenControl: return "Fig4c_BothOpen_Control";
    case ScenarioId::kFig4cBothOpenWire: return "Fig4c_BothOpen_Wire";
    case ScenarioId::kDecompositionSigma1: return "Decomposition_Sigma1";
    case ScenarioId::kDecompositionSigma2: return "Decomposition_Sigma2";
    case ScenarioId::kWireSweep: return "WireSweep";
  }
  return "?";
}

std::optional<ScenarioId> parse_scenario(std::string_view name) {
  for (ScenarioId id : kAllScenarios)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

std::string_view to_string(SelectorMode m) {
  switch (m) {
    case SelectorMode::kBoth: return "both";
    case SelectorMode::kP1: return "p1";
    case SelectorMode::kP2: return "p2";
    case SelectorMode::kMaskP1: return "mask_p1";
    case SelectorMode::kMaskP2: return "mask_p2";
  }
  return "?";
}

std::string_view to_string(ClosureMethod m) {
  return m == ClosureMethod::kMask ? "mask" : "selector";
}

std::string_view to_string(DimensionMode m) {
  return m == DimensionMode::k1D ? "1d" : "2d";
}

std::string_view to_string(Plane p) { return p == Plane::kSigma1 ? kSigma1 : kSigma2; }

GridSpec Numerics::grid(double wavelength) const {
  GridSpec g;
  g.nx = grid_n;
  g.ny = dimension == DimensionMode::k2D ? grid_n : 1;
  g.dx = grid_dx;
  g.dy = grid_dx;
  g.wavelength = wavelength;
  return g;
}

PropagationOptions Numerics::propagation() const {
  PropagationOptions o;
  o.guard_fraction = guard_fraction;
  o.band_floor = band_floor;
  o.backend = backend;
  return o;
}

void Numerics::validate() const {
  if (grid_n < 8) throw std::invalid_argument("grid_n must be >= 8");
  if (!(grid_dx > 0.0) || !std::isfinite(grid_dx))
    throw std::invalid_argument("grid_dx must be positive");
  if (guard_fraction < 0.0 || guard_fraction >= 1.0)
    throw std::invalid_argument("guard_band_fraction must lie in [0, 1)");
  if (band_floor < 0.0 || band_floor > 1.0)
    throw std::invalid_argument("band_floor must lie in [0, 1]");
  if (dark_fringe_side != 1 && dark_fringe_side != -1)
    throw std::invalid_argument("dark_fringe_side must be +1 or -1");
}

Bench::Bench(ExperimentGeometry geometry, Numerics numerics, PlanCache* cache)
    : geometry_(std::move(geometry)),
      numerics_(numerics),
      grid_(numerics_.grid(geometry_.wavelength)),
      propagator_(numerics_.propagation(), cache) {
  geometry_.validate();
  numerics_.validate();
  grid_.validate();
}

PinholeSet Bench::baseline_set() const {
  switch (numerics_.selector_mode) {
    case SelectorMode::kP1:
    case SelectorMode::kMaskP1: return PinholeSet::kFirstOnly;
    case SelectorMode::kP2:
    case SelectorMode::kMaskP2: return PinholeSet::kSecondOnly;
    case SelectorMode::kBoth: return PinholeSet::kBoth;
  }
  return PinholeSet::kBoth;
}

ClosureMethod Bench::baseline_method() const {
  const auto m = numerics_.selector_mode;
  return (m == SelectorMode::kP1 || m == SelectorMode::kP2) ? ClosureMethod::kSelector
                                                           : ClosureMethod::kMask;
}

double Bench::selector_center(PinholeSet open) const {
  const double chief = 0.5 * geometry_.pinhole_separation *
                       (1.0 - geometry_.selector_z / geometry_.focal_length);
  switch (open) {
    case PinholeSet::kFirstOnly: return chief;
    case PinholeSet::kSecondOnly: return -chief;
    case PinholeSet::kBoth: return 0.0;
  }
  return 0.0;
}

OpticalTrain Bench::train(PinholeSet open, ClosureMethod method,
                          std::span<const double> wires,
                          bool include_aperture_stop) const {
  const auto& g = geometry_;
  const bool by_mask = method == ClosureMethod::kMask;
  OpticalTrain t;
  t.add(0.0, ThinLens{g.focal_length});
  t.add(0.0, DualPinhole{g.pinhole_separation, g.pinhole_diameter,
                         by_mask ? open : PinholeSet::kBoth});
  t.add(g.selector_z, CircularAperture{selector_center(by_mask ? PinholeSet::kBoth : open),
                                       0.0, g.selector_diameter});
  if (include_aperture_stop) t.add(g.as_z, CircularAperture{0.0, 0.0, g.as_diameter});
  if (!wires.empty())
    t.add(g.sigma1_z, WireGrid{std::vector<double>(wires.begin(), wires.end()),
                               g.wire_thickness, WireOrientation::kVertical});
  t.add_plane(kSigma1, g.sigma1_z);
  t.add_plane(kSigma2, g.sigma2_z);
  return t;
}

Field Bench::source() const { return create_plane_wave(grid_, Complex{1.0, 0.0}); }

std::shared_ptr<const TrainResult> Bench::sigma1_incident(PinholeSet open,
                                                          ClosureMethod method) const {
  if (open == PinholeSet::kBoth) method = ClosureMethod::kMask;
  const auto key = std::make_pair(open, method);
  {
    std::lock_guard lock(mutex_);
    if (auto it = incident_.find(key); it != incident_.end()) return it->second;
  }
  auto result = std::make_shared<const TrainResult>(
      run_train(source(), train(open, method, {}), geometry_.sigma1_z, propagator_,
                StopMode::kIncident));
  std::lock_guard lock(mutex_);
  return incident_.try_emplace(key, std::move(result)).first->second;
}

TrainResult Bench::sigma2(PinholeSet open, ClosureMethod method,
                          std::span<const double> wires) const {
  const auto incident = sigma1_incident(open, method);
  TrainResult r = run_train(incident->field, train(open, method, wires),
                            geometry_.sigma2_z, propagator_);
  TrainDiagnostics d = incident->diagnostics;
  d.merge(r.diagnostics);
  r.diagnostics = std::move(d);
  return r;
}

Profile Bench::sigma1_profile(const IntensityMap& map) const {
  const double h = grid_.is_1d() ? 0.0 : 0.5 * grid_.dy;
  return extract_profile(map, -h, h);
}

double Bench::central_half_window() const {
  // A quarter of the single-pinhole Airy radius at sigma1.
  return 0.25 * 1.22 * geometry_.wavelength * geometry_.focal_length /
         geometry_.pinhole_diameter;
}

std::vector<double> Bench::dark_fringes() const {
  {
    std::lock_guard lock(mutex_);
    if (dark_fringes_) return *dark_fringes_;
  }
  const auto incident = sigma1_incident(PinholeSet::kBoth, ClosureMethod::kMask);
  auto minima = locate_fringe_minima(sigma1_profile(intensity(incident->field)), 0.0, 2);
  std::sort(minima.begin(), minima.end());
  std::lock_guard lock(mutex_);
  dark_fringes_ = minima;
  return minima;
}

double Bench::dark_fringe_position() const {
  const auto m = dark_fringes();
  return numerics_.dark_fringe_side > 0 ? m.back() : m.front();
}

std::vector<double> Bench::wire_positions() const {
  if (geometry_.wire_positions) return *geometry_.wire_positions;
  return {dark_fringe_position()};
}

double Bench::intercepted_fraction(PinholeSet open, std::span<const double> wires) const {
  const auto incident = sigma1_incident(open, ClosureMethod::kMask);
  const IntensityMap map = intensity(incident->field);
  const auto t = wires.empty()
                     ? std::vector<double>(static_cast<std::size_t>(grid_.nx), 1.0)
                     : wire_column_transmittance(grid_, wires, geometry_.wire_thickness);
  double blocked = 0.0, total = 0.0;
  for (int j = 0; j < grid_.ny; ++j) {
    for (int i = 0; i < grid_.nx; ++i) {
      const double v = map.at(i, j);
      total += v;
      blocked += v * (1.0 - t[i]);
    }
  }
  if (!(total > 0.0)) throw AnalysisError("intercepted_fraction: dark sigma1 plane");
  return blocked / total;
}

std::vector<std::pair<std::string, SamplingDiagnostics>> Bench::sampling_report() const {
  const auto& g = geometry_;
  const double slope = 0.5 * g.pinhole_separation / g.focal_length;
  std::vector<std::pair<std::string, SamplingDiagnostics>> out;
  const OpticalTrain t = train(PinholeSet::kBoth, ClosureMethod::kMask, wire_positions());
  std::vector<double> zs{0.0};
  for (const auto& s : t.stages()) zs.push_back(s.z);
  zs.push_back(g.sigma2_z);
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  for (std::size_t k = 1; k < zs.size(); ++k) {
    const double dz = zs[k] - zs[k - 1];
    std::ostringstream name;
    name << "hop " << zs[k - 1] << " -> " << zs[k] << " m";
    out.emplace_back(name.str(), check_sampling(grid_, dz, slope * dz));
  }
  const double d = g.sigma2_z - g.sigma1_z;
  out.emplace_back("sigma1 -> sigma2 (" + std::to_string(d) + " m)",
                   check_sampling(grid_, d, slope * d));
  return out;
}

ScenarioReport Bench::sigma1_interference() const {
  ScenarioReport r;
  r.id = ScenarioId::kSigma1Interference;
  const auto incident = sigma1_incident(baseline_set(), baseline_method());
  IntensityMap map = intensity(incident->field);
  r.diagnostics = incident->diagnostics;
  r.profile = sigma1_profile(map);
  try {
    r.visibility = central_visibilities(*r.profile, 0.0, 3, central_half_window());
  } catch (const AnalysisError&) {
    r.flags.push_back("no_fringes");
  }
  try {
    r.dark_fringes = locate_fringe_minima(*r.profile, 0.0, 2);
    std::sort(r.dark_fringes.begin(), r.dark_fringes.end());
  } catch (const AnalysisError&) {
  }
  r.maps.push_back({kSigma1, std::move(map)});
  return r;
}

ScenarioReport Bench::sigma2_control() const {
  ScenarioReport r;
  r.id = ScenarioId::kSigma2Control;
  TrainResult run = sigma2(baseline_set(), baseline_method(), {});
  IntensityMap map = intensity(run.field);
  r.diagnostics = run.diagnostics;

  IntensityMap both_map = baseline_set() == PinholeSet::kBoth
                              ? map
                              : intensity(sigma2(PinholeSet::kBoth, ClosureMethod::kMask, {}).field);
  const RoiPair rois = detect_rois(both_map);
  r.rois = rois;
  const double phi = roi_flux(map, rois);
  r.flux = reduction_r(phi, phi);
  r.roi_power_fraction = phi / total_power(map);

  const IntensityMap only1 = intensity(sigma2(PinholeSet::kFirstOnly, ClosureMethod::kMask, {}).field);
  const IntensityMap only2 = intensity(sigma2(PinholeSet::kSecondOnly, ClosureMethod::kMask, {}).field);
  r.crosstalk = std::max(crosstalk(only1, rois.first, rois.second),
                         crosstalk(only2, rois.second, rois.first));
  note_warnings(r.diagnostics, r.flags);
  r.maps.push_back({kSigma2, std::move(map)});
  return r;
}

ScenarioReport Bench::fig4_leg(ScenarioId id) const {
  const LegSpec leg = leg_spec(id);
  const auto method = numerics_.closure;
  const auto wires = wire_positions();
  const IntensityMap ctrl_both = intensity(sigma2(PinholeSet::kBoth, method, {}).field);
  const RoiPair rois = detect_rois(ctrl_both);

  ScenarioReport r;
  r.id = id;
  r.rois = rois;
  const IntensityMap control =
      leg.open == PinholeSet::kBoth ? ctrl_both : intensity(sigma2(leg.open, method, {}).field);
  const double phi_c = roi_flux(control, rois);
  TrainResult run = sigma2(leg.open, method, leg.wire ? std::span<const double>(wires)
                                                      : std::span<const double>());
  IntensityMap map = intensity(run.field);
  r.diagnostics = run.diagnostics;
  if (leg.wire) r.wire_positions = wires;
  r.flux = reduction_r(phi_c, roi_flux(map, rois));
  if (r.flux->flux_gain) r.flags.push_back("flux_gain");
  r.roi_power_fraction = roi_flux(map, rois) / total_power(map);
  const int half = lit_half_plane(leg.open);
  if (half != 0) {
    r.lobe_width = second_moment_radius(map, half);
    const ROI& source = half < 0 ? rois.first : rois.second;
    const ROI& other = half < 0 ? rois.second : rois.first;
    r.crosstalk = crosstalk(map, source, other);
  }
  note_warnings(r.diagnostics, r.flags);
  r.maps.push_back({kSigma2, std::move(map)});
  return r;
}

Fig4Report Bench::fig4() const {
  const auto method = numerics_.closure;
  const auto wires = wire_positions();
  Fig4Report rep;
  rep.plane_distance = geometry_.sigma2_z - geometry_.sigma1_z;
  rep.wire_positions = wires;

  struct Leg {
    ScenarioId id;
    PinholeSet open;
    bool wire;
    TrainResult run;
    IntensityMap map;
  };
  std::vector<Leg> legs;
  for (ScenarioId id : {ScenarioId::kFig4aP1ClosedControl, ScenarioId::kFig4aP1ClosedWire,
                        ScenarioId::kFig4bP2ClosedControl, ScenarioId::kFig4bP2ClosedWire,
                        ScenarioId::kFig4cBothOpenControl, ScenarioId::kFig4cBothOpenWire}) {
    const LegSpec spec = leg_spec(id);
    TrainResult run = sigma2(spec.open, method,
                             spec.wire ? std::span<const double>(wires)
                                       : std::span<const double>());
    IntensityMap map = intensity(run.field);
    run.field = Field{};  // the map is all that is kept
    legs.push_back(Leg{id, spec.open, spec.wire, std::move(run), std::move(map)});
  }
  const IntensityMap& ctrl_both = legs[4].map;
  rep.rois = detect_rois(ctrl_both);
  const double pitch = grid_.dx;

  auto make_pair = [&](const char* label, const Leg& c, const Leg& w) {
    FluxPair p;
    p.label = label;
    p.flux = reduction_r(roi_flux(c.map, rep.rois), roi_flux(w.map, rep.rois));
    double lo = p.flux.r_percent, hi = p.flux.r_percent;
    for (double dr : {-pitch, pitch}) {
      const double rr =
          reduction_r(roi_flux(c.map, rep.rois, dr), roi_flux(w.map, rep.rois, dr)).r_percent;
      lo = std::min(lo, rr);
      hi = std::max(hi, rr);
    }
    const double guard = std::abs(c.run.diagnostics.guard_absorbed) +
                         std::abs(w.run.diagnostics.guard_absorbed);
    p.r_uncertainty = 0.5 * (hi - lo) + 100.0 * guard / p.flux.phi_control;
    const int half = lit_half_plane(c.open);
    if (half != 0) {
      p.control_width = second_moment_radius(c.map, half);
      p.wire_width = second_moment_radius(w.map, half);
    }
    return p;
  };
  rep.p1_closed = make_pair("Fig4a_P1Closed", legs[0], legs[1]);
  rep.p2_closed = make_pair("Fig4b_P2Closed", legs[2], legs[3]);
  rep.both_open = make_pair("Fig4c_BothOpen", legs[4], legs[5]);
  rep.intercepted_fraction = intercepted_fraction(PinholeSet::kBoth, wires);

  for (auto& leg : legs) {
    ScenarioReport r;
    r.id = leg.id;
    r.rois = rep.rois;
    const FluxPair& pair = leg.open == PinholeSet::kSecondOnly ? rep.p1_closed
                           : leg.open == PinholeSet::kFirstOnly ? rep.p2_closed
                                                                : rep.both_open;
    r.flux = leg.wire ? pair.flux : reduction_r(pair.flux.phi_control, pair.flux.phi_control);
    if (r.flux->flux_gain) r.flags.push_back("flux_gain");
    if (leg.wire) r.wire_positions = wires;
    r.roi_power_fraction = roi_flux(leg.map, rep.rois) / total_power(leg.map);
    const int half = lit_half_plane(leg.open);
    if (half != 0) {
      r.lobe_width = leg.wire ? pair.wire_width : pair.control_width;
      const ROI& source = half < 0 ? rep.rois.first : rep.rois.second;
      const ROI& other = half < 0 ? rep.rois.second : rep.rois.first;
      r.crosstalk = crosstalk(leg.map, source, other);
    }
    r.diagnostics = leg.run.diagnostics;
    rep.diagnostics.merge(leg.run.diagnostics);
    note_warnings(r.diagnostics, r.flags);
    r.maps.push_back({kSigma2, std::move(leg.map)});
    rep.runs.push_back(std::move(r));
  }
  return rep;
}

ScenarioReport Bench::decomposition(Plane plane) const {
  ScenarioReport r;
  r.id = plane == Plane::kSigma1 ? ScenarioId::kDecompositionSigma1
                                 : ScenarioId::kDecompositionSigma2;
  Field f1, f2;
  if (plane == Plane::kSigma1) {
    const auto a = sigma1_incident(PinholeSet::kFirstOnly, ClosureMethod::kMask);
    const auto b = sigma1_incident(PinholeSet::kSecondOnly, ClosureMethod::kMask);
    r.diagnostics = a->diagnostics;
    r.diagnostics.merge(b->diagnostics);
    r.decomposition = decompose(a->field, b->field);
  } else {
    TrainResult a = sigma2(PinholeSet::kFirstOnly, ClosureMethod::kMask, {});
    TrainResult b = sigma2(PinholeSet::kSecondOnly, ClosureMethod::kMask, {});
    r.diagnostics = a.diagnostics;
    r.diagnostics.merge(b.diagnostics);
    r.decomposition = decompose(a.field, b.field);
  }
  if (plane == Plane::kSigma1) {
    r.profile = sigma1_profile(r.decomposition->p_total);
    try {
      r.visibility = central_visibilities(*r.profile, 0.0, 3, central_half_window());
    } catch (const AnalysisError&) {
      r.flags.push_back("no_fringes");
    }
  } else {
    r.profile = extract_profile(r.decomposition->p_total, -0.5 * grid_.dy, 0.5 * grid_.dy);
  }
  r.maps.push_back({std::string(to_string(plane)), r.decomposition->p_total});
  return r;
}

SweepReport Bench::sweep(double x_min, double x_max, int steps) const {
  if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
  if (!(x_max > x_min)) throw std::invalid_argument("sweep: x_max must exceed x_min");
  if (x_min < grid_.x_lo() || x_max > grid_.x_hi())
    throw std::invalid_argument("sweep: range leaves the grid window");
  SweepReport rep;
  rep.dark_fringes = dark_fringes();
  TrainResult ctrl = sigma2(PinholeSet::kBoth, ClosureMethod::kMask, {});
  const IntensityMap control = intensity(ctrl.field);
  rep.diagnostics = ctrl.diagnostics;
  rep.rois = detect_rois(control);
  const double phi_c = roi_flux(control, rep.rois);
  for (int k = 0; k < steps; ++k) {
    const double x = x_min + (x_max - x_min) * k / (steps - 1);
    const double pos[] = {x};
    TrainResult run = sigma2(PinholeSet::kBoth, ClosureMethod::kMask, pos);
    rep.x.push_back(x);
    rep.r_percent.push_back(reduction_r(phi_c, roi_flux(intensity(run.field), rep.rois)).r_percent);
    rep.diagnostics.guard_absorbed += run.diagnostics.guard_absorbed;
    rep.diagnostics.band_rejected += run.diagnostics.band_rejected;
  }
  return rep;
}

ScenarioReport Bench::run(ScenarioId id) const {
  ScenarioReport r;
  switch (id) {
    case ScenarioId::kSigma1Interference: r = sigma1_interference(); break;
    case ScenarioId::kSigma2Control: r = sigma2_control(); break;
    case ScenarioId::kDecompositionSigma1: r = decomposition(Plane::kSigma1); break;
    case ScenarioId::kDecompositionSigma2: r = decomposition(Plane::kSigma2); break;
    case ScenarioId::kWireSweep: {
      // One fringe period either side of the axis, sampled at eighth periods.
      const auto minima = dark_fringes();
      const double half_period = 0.5 * (minima.back() - minima.front());
      const SweepReport s = sweep(-2.0 * half_period, 2.0 * half_period, 17);
      r.id = id;
      r.rois = s.rois;
      r.wire_positions = s.x;
      r.dark_fringes = s.dark_fringes;
      const auto it = std::min_element(s.r_percent.begin(), s.r_percent.end());
      const double phi_c = roi_flux(intensity(sigma2(PinholeSet::kBoth, ClosureMethod::kMask, {}).field), s.rois);
      r.flux = reduction_r(phi_c, phi_c * (1.0 - *it / 100.0));
      r.diagnostics = s.diagnostics;
      std::ostringstream f;
      f << "argmin_x=" << s.x[static_cast<std::size_t>(it - s.r_percent.begin())];
      r.flags.push_back(f.str());
      break;
    }
    default: r = fig4_leg(id); break;
  }
  r.geometry = geometry_;
  if (!r.geometry.wire_positions) r.geometry.wire_positions = wire_positions();
  r.numerics = numerics_;
  return r;
}

void Bench::release_cache() const {
  std::lock_guard lock(mutex_);
  incident_.clear();
}

ScenarioReport run_scenario(const ExperimentGeometry& geometry, const Numerics& numerics,
                            ScenarioId id) {
  return Bench(geometry, numerics).run(id);
}

Fig4Report run_fig4_suite(const ExperimentGeometry& geometry, const Numerics& numerics) {
  Bench bench(geometry, numerics);
  Fig4Report rep = bench.fig4();
  for (auto& r : rep.runs) {
    r.geometry = geometry;
    r.geometry.wire_positions = rep.wire_positions;
    r.numerics = numerics;
  }
  return rep;
}

ScenarioReport run_decomposition(const ExperimentGeometry& geometry,
                                 const Numerics& numerics, Plane plane) {
  return Bench(geometry, numerics).run(plane == Plane::kSigma1
                                           ? ScenarioId::kDecompositionSigma1
                                           : ScenarioId::kDecompositionSigma2);
}

PhotonSummary run_photons(const Bench& bench, Plane plane, std::size_t n,
                          std::uint64_t seed) {
  constexpr int kBins = 64;
  const GridSpec& g = bench.grid();
  PhotonSummary out;
  out.plane = std::string(to_string(plane));
  out.seed = seed;
  out.n = n;
  if (plane == Plane::kSigma1) {
    const auto incident = bench.sigma1_incident(PinholeSet::kBoth, ClosureMethod::kMask);
    const IntensityMap map = intensity(incident->field);
    const double w = bench.central_half_window();
    const auto vis = central_visibilities(bench.sigma1_profile(map), 0.0, 1, w);
    const VisibilityReport& v = vis.front();
    out.field_v = v.v;
    const double y_lo = g.is_1d() ? 0.0 : -w;
    const double y_hi = g.is_1d() ? 0.0 : w;
    const double bin = 0.25 * v.fringe_period;
    const PhotonEvents events = sample_photons(map, n, seed);
    out.expected = expected_binned_visibility(map, n, v.x_max, v.x_min, bin, y_lo, y_hi);
    out.sampled = histogram_visibility(events, v.x_max, v.x_min, bin, y_lo, y_hi);
    out.sampled.standard_error = out.expected.standard_error;
    out.hist_lo = -4.0 * w;
    out.hist_hi = 4.0 * w;
    out.hist_counts = histogram_x(events, out.hist_lo, out.hist_hi, kBins);
  } else {
    const IntensityMap map =
        intensity(bench.sigma2(PinholeSet::kBoth, ClosureMethod::kMask, {}).field);
    const RoiPair rois = detect_rois(map);
    const ROI both[] = {rois.first, rois.second};
    const PhotonEvents events = sample_photons(map, n, seed, both);
    out.roi_counts = events.roi_counts;
    const double reach = std::abs(rois.second.cx) + 2.0 * rois.second.radius;
    out.hist_lo = -reach;
    out.hist_hi = reach;
    out.hist_counts = histogram_x(events, out.hist_lo, out.hist_hi, kBins);
  }
  return out;
}

SweepReport sweep_wire(const ExperimentGeometry& geometry, const Numerics& numerics,
                       double x_min, double x_max, int steps) {
  return Bench(geometry, numerics).sweep(x_min, x_max, steps);
}

}  // namespace whichway
