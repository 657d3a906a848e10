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

#ifndef WHICHWAY_FIELD_H_
#define WHICHWAY_FIELD_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace whichway {

using Complex = std::complex<double>;

/// Uniform transverse sampling grid. `ny == 1` selects the 1D (slit) mode.
///
/// Sample i sits at x_i = (i - nx/2) * dx with integer division, so for even
/// sizes the optical axis coincides with sample nx/2 and the grid is mirror
/// symmetric about it (sample 0 is the only one without a partner).
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double wavelength = 0.0;

  bool is_1d() const { return ny == 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  double x(int i) const { return static_cast<double>(i - nx / 2) * dx; }
  double y(int j) const {
    return is_1d() ? 0.0 : static_cast<double>(j - ny / 2) * dy;
  }
  int index_x(double xc) const;
  int index_y(double yc) const;
  /// Area weight of one sample (dx in 1D mode).
  double cell_area() const { return is_1d() ? dx : dx * dy; }
  double width() const { return nx * dx; }
  double height() const { return is_1d() ? 0.0 : ny * dy; }
  /// Outer edges of the sampled window.
  double x_lo() const { return x(0) - 0.5 * dx; }
  double x_hi() const { return x(nx - 1) + 0.5 * dx; }
  double y_lo() const { return is_1d() ? 0.0 : y(0) - 0.5 * dy; }
  double y_hi() const { return is_1d() ? 0.0 : y(ny - 1) + 0.5 * dy; }

  /// Throws std::invalid_argument on nonpositive sizes, pitches or wavelength.
  void validate() const;

  bool operator==(const GridSpec&) const = default;
};

/// Complex scalar amplitude at axial position z, row-major (y-major) samples.
struct Field {
  GridSpec grid;
  double z = 0.0;
  std::vector<Complex> samples;

  Complex at(int i, int j) const {
    return samples[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

/// Linear intensity |u|^2 in arbitrary units.
struct IntensityMap {
  GridSpec grid;
  double z = 0.0;
  std::vector<double> values;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(j) * grid.nx + i];
  }
};

/// Checks grid validity, sample count and finiteness.
void validate(const Field& field);
void validate(const IntensityMap& map);

Field create_plane_wave(const GridSpec& grid, Complex amplitude);
Field make_field(const GridSpec& grid, double z, std::vector<Complex> samples);

IntensityMap intensity(const Field& field);

/// Sum of |u|^2 times the cell area (dx in 1D mode).
double total_power(const Field& field);
double total_power(const IntensityMap& map);

Field scaled(Field field, Complex factor);
/// Coherent sum; grids and z must match.
Field add(const Field& a, const Field& b);

/// sqrt(sum |a-b|^2 / sum |b|^2).
double relative_l2_error(const Field& a, const Field& b);

}  // namespace whichway

#endif  // WHICHWAY_FIELD_H_
