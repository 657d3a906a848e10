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

#include "whichway/field.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "whichway/kernels.h"

namespace whichway {

int GridSpec::index_x(double xc) const {
  return static_cast<int>(std::lround(xc / dx)) + nx / 2;
}

int GridSpec::index_y(double yc) const {
  if (is_1d()) return 0;
  return static_cast<int>(std::lround(yc / dy)) + ny / 2;
}

void GridSpec::validate() const {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("grid: sample counts must be >= 1, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  if (!(dx > 0.0) || !std::isfinite(dx))
    throw std::invalid_argument("grid: dx must be positive");
  if (!is_1d() && (!(dy > 0.0) || !std::isfinite(dy)))
    throw std::invalid_argument("grid: dy must be positive");
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw std::invalid_argument("grid: wavelength must be positive");
}

void validate(const Field& field) {
  field.grid.validate();
  if (field.samples.size() != field.grid.size())
    throw std::invalid_argument("field: sample count does not match grid");
  if (!std::isfinite(field.z))
    throw std::invalid_argument("field: z must be finite");
  for (const Complex& v : field.samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("field: non-finite sample");
  }
}

void validate(const IntensityMap& map) {
  map.grid.validate();
  if (map.values.size() != map.grid.size())
    throw std::invalid_argument("intensity: value count does not match grid");
  for (double v : map.values) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("intensity: values must be finite and >= 0");
  }
}

Field create_plane_wave(const GridSpec& grid, Complex amplitude) {
  grid.validate();
  return Field{grid, 0.0, std::vector<Complex>(grid.size(), amplitude)};
}

Field make_field(const GridSpec& grid, double z, std::vector<Complex> samples) {
  Field f{grid, z, std::move(samples)};
  validate(f);
  return f;
}

IntensityMap intensity(const Field& field) {
  IntensityMap map{field.grid, field.z, std::vector<double>(field.samples.size())};
  kernels::modulus_squared(field.samples, map.values, kernels::default_backend());
  return map;
}

double total_power(const Field& field) {
  return kernels::sum_norm(field.samples, kernels::default_backend()) *
         field.grid.cell_area();
}

double total_power(const IntensityMap& map) {
  return kernels::sum(map.values, kernels::default_backend()) *
         map.grid.cell_area();
}

Field scaled(Field field, Complex factor) {
  kernels::scale(field.samples, factor, kernels::default_backend());
  return field;
}

Field add(const Field& a, const Field& b) {
  if (!(a.grid == b.grid) || a.z != b.z)
    throw std::invalid_argument("add: fields live on different grids or planes");
  Field out = a;
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += b.samples[i];
  return out;
}

double relative_l2_error(const Field& a, const Field& b) {
  if (a.samples.size() != b.samples.size())
    throw std::invalid_argument("relative_l2_error: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    num += std::norm(a.samples[i] - b.samples[i]);
    den += std::norm(b.samples[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

}  // namespace whichway
