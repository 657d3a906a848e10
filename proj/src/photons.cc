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

#include <algorithm>
#include <cmath>
#include <random>

#include "whichway/metrics.h"

#ifdef WHICHWAY_HAVE_OPENMP
#include <omp.h>
#endif

namespace whichway {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace {

// 53 random bits mapped onto [0, 1).
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PhotonEvents sample_photons(const IntensityMap& map, std::size_t n, std::uint64_t seed,
                            std::span<const ROI> rois) {
  if (n < 1) throw std::invalid_argument("sample_photons: n must be >= 1");
  const GridSpec& g = map.grid;
  std::vector<double> cumulative(map.values.size());
  double running = 0.0;
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    running += map.values[k];
    cumulative[k] = running;
  }
  if (!(running > 0.0)) throw AnalysisError("sample_photons: map has zero power");
  const double total = running;
  // Last cell with positive weight, used when rounding pushes u onto total.
  std::size_t last = map.values.size() - 1;
  while (map.values[last] <= 0.0) --last;

  PhotonEvents ev;
  ev.seed = seed;
  ev.n = n;
  ev.x.resize(n);
  ev.y.resize(n);
  const std::ptrdiff_t blocks =
      static_cast<std::ptrdiff_t>((n + kPhotonBlock - 1) / kPhotonBlock);

#ifdef WHICHWAY_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    const std::size_t begin = static_cast<std::size_t>(b) * kPhotonBlock;
    const std::size_t end = std::min(n, begin + kPhotonBlock);
    for (std::size_t e = begin; e < end; ++e) {
      const double u = unit(rng) * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      std::size_t cell = it == cumulative.end()
                             ? last
                             : static_cast<std::size_t>(it - cumulative.begin());
      const int i = static_cast<int>(cell % static_cast<std::size_t>(g.nx));
      const int j = static_cast<int>(cell / static_cast<std::size_t>(g.nx));
      const double jx = unit(rng) - 0.5;
      const double jy = unit(rng) - 0.5;
      ev.x[e] = g.x(i) + jx * g.dx;
      ev.y[e] = g.is_1d() ? 0.0 : g.y(j) + jy * g.dy;
    }
  }
  if (!rois.empty()) ev.roi_counts = count_in_rois(ev, rois);
  return ev;
}

std::vector<std::size_t> count_in_rois(const PhotonEvents& events,
                                       std::span<const ROI> rois) {
  std::vector<std::size_t> counts(rois.size(), 0);
  for (std::size_t e = 0; e < events.x.size(); ++e) {
    for (std::size_t r = 0; r < rois.size(); ++r) {
      const double dx = events.x[e] - rois[r].cx;
      const double dy = events.y[e] - rois[r].cy;
      if (dx * dx + dy * dy <= rois[r].radius * rois[r].radius) {
        ++counts[r];
        break;
      }
    }
  }
  return counts;
}

namespace {

BinnedVisibility finish(double n_max, double n_min) {
  BinnedVisibility b;
  b.n_max = n_max;
  b.n_min = n_min;
  const double s = n_max + n_min;
  if (!(s > 0.0)) throw AnalysisError("binned visibility: both bins are empty");
  b.v = (n_max - n_min) / s;
  const double dv_dmax = 2.0 * n_min / (s * s);
  const double dv_dmin = -2.0 * n_max / (s * s);
  b.standard_error = std::sqrt(dv_dmax * dv_dmax * n_max + dv_dmin * dv_dmin * n_min);
  return b;
}

}  // namespace

BinnedVisibility histogram_visibility(const PhotonEvents& events, double x_max,
                                      double x_min, double bin_width, double y_lo,
                                      double y_hi) {
  const double h = 0.5 * bin_width;
  double n_max = 0.0, n_min = 0.0;
  for (std::size_t e = 0; e < events.x.size(); ++e) {
    const double y = events.y[e];
    if (y < y_lo || y > y_hi) continue;
    const double x = events.x[e];
    if (std::abs(x - x_max) < h) n_max += 1.0;
    if (std::abs(x - x_min) < h) n_min += 1.0;
  }
  return finish(n_max, n_min);
}

BinnedVisibility expected_binned_visibility(const IntensityMap& map, std::size_t n,
                                            double x_max, double x_min,
                                            double bin_width, double y_lo,
                                            double y_hi) {
  const GridSpec& g = map.grid;
  const double h = 0.5 * bin_width;
  auto overlap = [](double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
  };
  double total = 0.0, w_max = 0.0, w_min = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    const double fy = g.is_1d()
                          ? ((y_lo <= 0.0 && 0.0 <= y_hi) ? 1.0 : 0.0)
                          : overlap(y - 0.5 * g.dy, y + 0.5 * g.dy, y_lo, y_hi) / g.dy;
    for (int i = 0; i < g.nx; ++i) {
      const double v = map.at(i, j);
      total += v;
      if (fy == 0.0 || v == 0.0) continue;
      const double x = g.x(i);
      const double x0 = x - 0.5 * g.dx, x1 = x + 0.5 * g.dx;
      w_max += v * fy * overlap(x0, x1, x_max - h, x_max + h) / g.dx;
      w_min += v * fy * overlap(x0, x1, x_min - h, x_min + h) / g.dx;
    }
  }
  if (!(total > 0.0)) throw AnalysisError("expected_binned_visibility: zero-power map");
  const double scale = static_cast<double>(n) / total;
  return finish(w_max * scale, w_min * scale);
}

std::vector<std::size_t> histogram_x(const PhotonEvents& events, double x_lo,
                                     double x_hi, int bins) {
  if (bins < 1 || !(x_hi > x_lo)) throw std::invalid_argument("histogram_x: bad range");
  std::vector<std::size_t> h(static_cast<std::size_t>(bins), 0);
  const double w = (x_hi - x_lo) / bins;
  for (double x : events.x) {
    if (x < x_lo || x >= x_hi) continue;
    const int b = std::min(bins - 1, static_cast<int>((x - x_lo) / w));
    ++h[static_cast<std::size_t>(b)];
  }
  return h;
}

}  // namespace whichway
