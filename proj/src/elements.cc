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

#include "whichway/elements.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace whichway {

namespace {

double interval_overlap(double a_lo, double a_hi, double b_lo, double b_hi) {
  return std::max(0.0, std::min(a_hi, b_hi) - std::max(a_lo, b_lo));
}

// Fraction of the cell [px +- hx] x [py +- hy] inside the disk, integrated
// exactly along y and with a 32-point midpoint rule along x.
double disk_cell_coverage(double px, double py, double hx, double hy, double cx,
                          double cy, double r) {
  constexpr int kSub = 32;
  const double step = 2.0 * hx / kSub;
  double acc = 0.0;
  for (int s = 0; s < kSub; ++s) {
    const double u = px - hx + (s + 0.5) * step - cx;
    if (std::abs(u) >= r) continue;
    const double h = std::sqrt(r * r - u * u);
    acc += interval_overlap(cy - h, cy + h, py - hy, py + hy);
  }
  return acc / (kSub * 2.0 * hy);
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(what) + " must be positive");
}

bool disk_touches_window(const GridSpec& g, double cx, double cy, double r) {
  const double nx = std::clamp(cx, g.x_lo(), g.x_hi());
  if (g.is_1d()) return std::abs(cx - nx) < r;
  const double ny = std::clamp(cy, g.y_lo(), g.y_hi());
  return std::hypot(cx - nx, cy - ny) < r;
}

bool disk_inside_window(const GridSpec& g, double cx, double cy, double r) {
  if (cx - r < g.x_lo() || cx + r > g.x_hi()) return false;
  if (g.is_1d()) return true;
  return cy - r >= g.y_lo() && cy + r <= g.y_hi();
}

void accumulate_disk(const GridSpec& g, double cx, double cy, double r,
                     std::vector<double>& t) {
  const double hx = 0.5 * g.dx;
  if (g.is_1d()) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      t[i] += interval_overlap(x - hx, x + hx, cx - r, cx + r) / g.dx;
    }
    return;
  }
  const double hy = 0.5 * g.dy;
  const double diag = std::hypot(hx, hy);
  const int i_lo = std::max(0, g.index_x(cx - r) - 2);
  const int i_hi = std::min(g.nx - 1, g.index_x(cx + r) + 2);
  const int j_lo = std::max(0, g.index_y(cy - r) - 2);
  const int j_hi = std::min(g.ny - 1, g.index_y(cy + r) + 2);
  kernels::for_each_row(
      j_hi - j_lo + 1,
      [&](int row) {
        const int j = j_lo + row;
        const double y = g.y(j);
        double* out = t.data() + static_cast<std::size_t>(j) * g.nx;
        for (int i = i_lo; i <= i_hi; ++i) {
          const double x = g.x(i);
          const double d = std::hypot(x - cx, y - cy);
          if (d >= r + diag) continue;
          out[i] += d <= r - diag ? 1.0 : disk_cell_coverage(x, y, hx, hy, cx, cy, r);
        }
      },
      kernels::default_backend());
}

void multiply_rows_by_columns(Field& field, const std::vector<double>& column_t,
                              kernels::Backend backend) {
  const int nx = field.grid.nx;
  Complex* data = field.samples.data();
  kernels::for_each_row(
      field.grid.ny,
      [&](int j) {
        Complex* row = data + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i)
          if (column_t[i] != 1.0) row[i] *= column_t[i];
      },
      backend);
}

}  // namespace

void ExperimentGeometry::validate() const {
  require_positive(wavelength, "wavelength");
  require_positive(focal_length, "focal_length");
  require_positive(pinhole_diameter, "pinhole_diameter");
  require_positive(pinhole_separation, "pinhole_separation");
  require_positive(selector_z, "selector_z");
  require_positive(selector_diameter, "selector_diameter");
  require_positive(as_z, "as_z");
  require_positive(as_diameter, "as_diameter");
  require_positive(sigma1_z, "sigma1_z");
  require_positive(sigma2_z, "sigma2_z");
  require_positive(wire_thickness, "wire_thickness");
  if (!(sigma1_z < sigma2_z))
    throw std::invalid_argument("sigma1_z must be smaller than sigma2_z");
  if (!(pinhole_separation > pinhole_diameter))
    throw std::invalid_argument("pinhole_separation must exceed pinhole_diameter");
  if (wire_positions) {
    for (double p : *wire_positions)
      if (!std::isfinite(p)) throw std::invalid_argument("wire position not finite");
  }
}

std::string_view to_string(PinholeSet set) {
  switch (set) {
    case PinholeSet::kBoth: return "both";
    case PinholeSet::kFirstOnly: return "p1";
    case PinholeSet::kSecondOnly: return "p2";
  }
  return "?";
}

std::string describe(const ElementSpec& element) {
  std::ostringstream s;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ThinLens>) {
          s << "thin lens f=" << e.focal_length;
        } else if constexpr (std::is_same_v<T, CircularAperture>) {
          s << "circular aperture d=" << e.diameter << " at (" << e.center_x
            << ", " << e.center_y << ")";
        } else if constexpr (std::is_same_v<T, DualPinhole>) {
          s << "dual pinhole s=" << e.separation << " d=" << e.diameter
            << " open=" << to_string(e.open);
        } else {
          s << "wire grid t=" << e.thickness << " n=" << e.positions.size();
        }
      },
      element);
  return s.str();
}

std::vector<double> disk_transmittance(const GridSpec& grid, double cx, double cy,
                                       double diameter) {
  grid.validate();
  require_positive(diameter, "aperture diameter");
  std::vector<double> t(grid.size(), 0.0);
  accumulate_disk(grid, cx, cy, 0.5 * diameter, t);
  for (double& v : t) v = std::min(v, 1.0);
  return t;
}

std::vector<double> dual_pinhole_transmittance(const GridSpec& grid,
                                               double separation, double diameter,
                                               PinholeSet open) {
  grid.validate();
  require_positive(diameter, "pinhole diameter");
  if (!(separation > diameter))
    throw std::invalid_argument("dual pinhole: pinholes overlap (separation <= diameter)");
  const double r = 0.5 * diameter;
  const double half = 0.5 * separation;
  if (!disk_inside_window(grid, half, 0.0, r) || !disk_inside_window(grid, -half, 0.0, r))
    throw std::invalid_argument("dual pinhole: pinholes clipped by the grid window");
  std::vector<double> t(grid.size(), 0.0);
  if (open != PinholeSet::kSecondOnly) accumulate_disk(grid, half, 0.0, r, t);
  if (open != PinholeSet::kFirstOnly) accumulate_disk(grid, -half, 0.0, r, t);
  for (double& v : t) v = std::min(v, 1.0);
  return t;
}

std::vector<double> wire_column_transmittance(const GridSpec& grid,
                                              std::span<const double> positions,
                                              double thickness) {
  grid.validate();
  require_positive(thickness, "wire thickness");
  std::vector<double> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k] - sorted[k - 1] < thickness)
      throw std::invalid_argument("wire grid: wires overlap");
  }
  std::vector<double> t(static_cast<std::size_t>(grid.nx), 1.0);
  const double hx = 0.5 * grid.dx;
  const double ht = 0.5 * thickness;
  for (double p : sorted) {
    if (p + ht <= grid.x_lo() || p - ht >= grid.x_hi())
      throw std::invalid_argument("wire grid: wire lies outside the grid window");
    const int i_lo = std::max(0, grid.index_x(p - ht) - 1);
    const int i_hi = std::min(grid.nx - 1, grid.index_x(p + ht) + 1);
    for (int i = i_lo; i <= i_hi; ++i) {
      const double x = grid.x(i);
      t[i] -= interval_overlap(x - hx, x + hx, p - ht, p + ht) / grid.dx;
    }
  }
  for (double& v : t) v = std::clamp(v, 0.0, 1.0);
  return t;
}

Field apply_thin_lens(Field field, double focal_length, kernels::Backend backend) {
  const GridSpec& g = field.grid;
  g.validate();
  if (focal_length == 0.0 || !std::isfinite(focal_length))
    throw std::invalid_argument("thin lens: focal length must be finite and nonzero");
  // Largest phase step between neighbouring samples sits at the window edge.
  const double pi = std::numbers::pi;
  const double step_x = 2.0 * pi * (g.nx / 2) * g.dx * g.dx /
                        (g.wavelength * std::abs(focal_length));
  const double step_y = g.is_1d() ? 0.0
                                  : 2.0 * pi * (g.ny / 2) * g.dy * g.dy /
                                        (g.wavelength * std::abs(focal_length));
  if (step_x > pi || step_y > pi) {
    std::ostringstream s;
    s << "thin lens f=" << focal_length << " is undersampled at the grid edge: "
      << "phase step " << std::max(step_x, step_y) << " rad exceeds pi";
    throw NumericalError(s.str());
  }
  const double k = pi / (g.wavelength * focal_length);
  Complex* data = field.samples.data();
  kernels::for_each_row(
      g.ny,
      [&](int j) {
        const double y = g.y(j);
        Complex* row = data + static_cast<std::size_t>(j) * g.nx;
        for (int i = 0; i < g.nx; ++i) {
          const double x = g.x(i);
          row[i] *= std::polar(1.0, -k * (x * x + y * y));
        }
      },
      backend);
  return field;
}

Field apply_circular_aperture(Field field, double cx, double cy, double diameter,
                              kernels::Backend backend) {
  require_positive(diameter, "aperture diameter");
  if (!disk_touches_window(field.grid, cx, cy, 0.5 * diameter))
    throw std::invalid_argument("circular aperture lies entirely outside the grid window");
  const auto t = disk_transmittance(field.grid, cx, cy, diameter);
  kernels::multiply(field.samples, std::span<const double>(t), backend);
  return field;
}

Field apply_dual_pinhole(Field field, double separation, double diameter,
                         PinholeSet open, kernels::Backend backend) {
  const auto t = dual_pinhole_transmittance(field.grid, separation, diameter, open);
  kernels::multiply(field.samples, std::span<const double>(t), backend);
  return field;
}

Field apply_wire_grid(Field field, std::span<const double> positions,
                      double thickness, WireOrientation orientation,
                      kernels::Backend backend) {
  if (orientation != WireOrientation::kVertical)
    throw std::invalid_argument("wire grid: only vertical wires are supported");
  if (positions.empty()) {
    require_positive(thickness, "wire thickness");
    return field;
  }
  const auto t = wire_column_transmittance(field.grid, positions, thickness);
  multiply_rows_by_columns(field, t, backend);
  return field;
}

Field apply_element(Field field, const ElementSpec& element, kernels::Backend backend) {
  return std::visit(
      [&](const auto& e) -> Field {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ThinLens>) {
          return apply_thin_lens(std::move(field), e.focal_length, backend);
        } else if constexpr (std::is_same_v<T, CircularAperture>) {
          return apply_circular_aperture(std::move(field), e.center_x, e.center_y,
                                         e.diameter, backend);
        } else if constexpr (std::is_same_v<T, DualPinhole>) {
          return apply_dual_pinhole(std::move(field), e.separation, e.diameter,
                                    e.open, backend);
        } else {
          return apply_wire_grid(std::move(field), e.positions, e.thickness,
                                 e.orientation, backend);
        }
      },
      element);
}

OpticalTrain& OpticalTrain::add(double z, ElementSpec element) {
  if (!std::isfinite(z)) throw std::invalid_argument("element z must be finite");
  auto it = std::lower_bound(stages_.begin(), stages_.end(), z,
                             [](const Stage& s, double v) { return s.z < v; });
  if (it != stages_.end() && it->z == z) {
    it->elements.push_back(std::move(element));
  } else {
    stages_.insert(it, Stage{z, {std::move(element)}});
  }
  return *this;
}

OpticalTrain& OpticalTrain::add_plane(std::string name, double z) {
  if (plane_z(name)) throw std::invalid_argument("duplicate observation plane " + name);
  auto it = std::upper_bound(planes_.begin(), planes_.end(), z,
                             [](double v, const ObservationPlane& p) { return v < p.z; });
  planes_.insert(it, ObservationPlane{std::move(name), z});
  return *this;
}

std::optional<double> OpticalTrain::plane_z(std::string_view name) const {
  for (const auto& p : planes_)
    if (p.name == name) return p.z;
  return std::nullopt;
}

double TrainDiagnostics::min_admitted_fraction() const {
  double m = 1.0;
  for (const auto& h : hops) m = std::min(m, h.admitted_band_fraction);
  return m;
}

void TrainDiagnostics::merge(const TrainDiagnostics& other) {
  hops.insert(hops.end(), other.hops.begin(), other.hops.end());
  guard_absorbed += other.guard_absorbed;
  band_rejected += other.band_rejected;
}

TrainResult run_train(Field input, const OpticalTrain& train, double stop_at_z,
                      const Propagator& propagator, StopMode mode) {
  if (!std::isfinite(stop_at_z) || stop_at_z < input.z)
    throw std::invalid_argument("run_train: stop_at_z must not precede the input plane");
  const auto backend = propagator.options().backend;
  TrainResult result{std::move(input), {}};
  const double start = result.field.z;

  auto hop_to = [&](double z) {
    if (z <= result.field.z) return;
    Propagated p = propagator.run(std::move(result.field), z - result.field.z);
    result.diagnostics.hops.push_back(p.diagnostics);
    result.diagnostics.guard_absorbed += p.losses.guard_absorbed;
    result.diagnostics.band_rejected += p.losses.band_rejected;
    result.field = std::move(p.field);
    result.field.z = z;
  };

  for (const Stage& stage : train.stages()) {
    if (stage.z < start) continue;
    if (stage.z > stop_at_z) break;
    hop_to(stage.z);
    if (stage.z == stop_at_z && mode == StopMode::kIncident) break;
    for (const ElementSpec& e : stage.elements)
      result.field = apply_element(std::move(result.field), e, backend);
  }
  hop_to(stop_at_z);
  return result;
}

}  // namespace whichway
