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

#include "whichway/metrics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "whichway/kernels.h"

namespace whichway {

namespace {

bool in_half_plane(double x, int sign) {
  if (sign > 0) return x >= 0.0;
  if (sign < 0) return x < 0.0;
  return true;
}

// Vertex of the parabola through (i-1, a), (i, b), (i+1, c).
Extremum interpolate(const Profile& p, std::size_t i, bool is_max) {
  const double a = p.intensity[i - 1];
  const double b = p.intensity[i];
  const double c = p.intensity[i + 1];
  const double denom = a - 2.0 * b + c;
  double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
  delta = std::clamp(delta, -0.5, 0.5);
  const double pitch = p.x[i + 1] - p.x[i];
  const double value = std::max(0.0, b - 0.25 * (a - c) * delta);
  return Extremum{p.x[i] + delta * pitch, value, is_max};
}

}  // namespace

Profile extract_profile(const IntensityMap& map, double y_lo, double y_hi) {
  const GridSpec& g = map.grid;
  if (y_hi < y_lo) std::swap(y_lo, y_hi);
  std::vector<int> rows;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    if (y >= y_lo && y <= y_hi) rows.push_back(j);
  }
  if (rows.empty()) throw AnalysisError("extract_profile: band selects no rows");
  Profile p;
  p.x.resize(g.nx);
  p.intensity.assign(g.nx, 0.0);
  for (int i = 0; i < g.nx; ++i) p.x[i] = g.x(i);
  for (int j : rows)
    for (int i = 0; i < g.nx; ++i) p.intensity[i] += map.at(i, j);
  for (double& v : p.intensity) v /= static_cast<double>(rows.size());
  std::ostringstream d;
  d << "mean of " << rows.size() << " row(s), y in [" << g.y(rows.front()) << ", "
    << g.y(rows.back()) << "] m, z = " << map.z << " m";
  p.description = d.str();
  return p;
}

std::vector<Extremum> find_extrema(const Profile& p, double x_lo, double x_hi) {
  std::vector<Extremum> out;
  const std::size_t n = p.intensity.size();
  if (n < 3) return out;
  const auto& v = p.intensity;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (p.x[i] < x_lo || p.x[i] > x_hi) continue;
    if (v[i] > v[i - 1] && v[i] >= v[i + 1]) {
      out.push_back(interpolate(p, i, true));
    } else if (v[i] < v[i - 1] && v[i] <= v[i + 1]) {
      out.push_back(interpolate(p, i, false));
    }
  }
  return out;
}

double visibility(double i_max, double i_min) {
  const double s = i_max + i_min;
  if (!(s > 0.0)) throw AnalysisError("visibility: I_max + I_min must be positive");
  return (i_max - i_min) / s;
}

double fringe_period(const Profile& profile, double x_lo, double x_hi) {
  std::vector<double> minima;
  for (const auto& e : find_extrema(profile, x_lo, x_hi))
    if (!e.is_max) minima.push_back(e.x);
  if (minima.size() < 2) return 0.0;
  return (minima.back() - minima.front()) / static_cast<double>(minima.size() - 1);
}

VisibilityReport fringe_visibility(const Profile& profile, double x_lo, double x_hi) {
  // Extrema are searched slightly beyond the window so that the minimum
  // adjacent to a maximum near the edge is still found.
  const double pitch = profile.x.size() > 1 ? profile.x[1] - profile.x[0] : 0.0;
  const auto all = find_extrema(profile, -INFINITY, INFINITY);
  std::ptrdiff_t best = -1;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (!all[k].is_max || all[k].x < x_lo - pitch || all[k].x > x_hi + pitch) continue;
    if (best < 0 || all[k].value > all[static_cast<std::size_t>(best)].value)
      best = static_cast<std::ptrdiff_t>(k);
  }
  if (best < 0) throw AnalysisError("fringe_visibility: no maximum in window");
  const std::size_t b = static_cast<std::size_t>(best);
  const Extremum* partner = nullptr;
  if (b + 1 < all.size() && !all[b + 1].is_max) partner = &all[b + 1];
  else if (b > 0 && !all[b - 1].is_max) partner = &all[b - 1];
  if (partner == nullptr)
    throw AnalysisError("fringe_visibility: no minimum adjacent to the maximum");

  VisibilityReport r;
  r.i_max = all[b].value;
  r.i_min = std::min(partner->value, r.i_max);
  r.x_max = all[b].x;
  r.x_min = partner->x;
  r.v = visibility(r.i_max, r.i_min);
  r.fringe_period = fringe_period(profile, x_lo, x_hi);
  if (r.fringe_period == 0.0) r.fringe_period = 2.0 * std::abs(r.x_max - r.x_min);
  return r;
}

std::vector<VisibilityReport> central_visibilities(const Profile& profile,
                                                   double center, int pairs,
                                                   double half_window) {
  const auto ex = find_extrema(profile, center - half_window, center + half_window);
  struct Pair {
    std::size_t k;
    double distance;
  };
  std::vector<Pair> candidates;
  for (std::size_t k = 0; k + 1 < ex.size(); ++k) {
    if (ex[k].is_max == ex[k + 1].is_max) continue;
    candidates.push_back({k, std::abs(0.5 * (ex[k].x + ex[k + 1].x) - center)});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Pair& a, const Pair& b) { return a.distance < b.distance; });
  if (candidates.empty()) throw AnalysisError("central_visibilities: no extremum pair");
  const double period = fringe_period(profile, center - half_window, center + half_window);
  std::vector<VisibilityReport> out;
  for (std::size_t n = 0; n < candidates.size() && static_cast<int>(n) < pairs; ++n) {
    const Extremum& a = ex[candidates[n].k];
    const Extremum& b = ex[candidates[n].k + 1];
    const Extremum& mx = a.is_max ? a : b;
    const Extremum& mn = a.is_max ? b : a;
    VisibilityReport r;
    r.i_max = mx.value;
    r.i_min = std::min(mn.value, mx.value);
    r.x_max = mx.x;
    r.x_min = mn.x;
    r.v = visibility(r.i_max, r.i_min);
    r.fringe_period = period > 0.0 ? period : 2.0 * std::abs(mx.x - mn.x);
    out.push_back(r);
  }
  return out;
}

std::vector<double> locate_fringe_minima(const Profile& profile, double near, int count) {
  std::vector<double> minima;
  for (const auto& e : find_extrema(profile, -INFINITY, INFINITY))
    if (!e.is_max) minima.push_back(e.x);
  if (static_cast<int>(minima.size()) < count)
    throw AnalysisError("locate_fringe_minima: fewer minima than requested");
  std::stable_sort(minima.begin(), minima.end(), [near](double a, double b) {
    const double da = std::abs(a - near);
    const double db = std::abs(b - near);
    return da < db || (da == db && a < b);
  });
  minima.resize(static_cast<std::size_t>(count));
  return minima;
}

Point centroid(const IntensityMap& map, int half_plane) {
  const GridSpec& g = map.grid;
  double w = 0.0, sx = 0.0, sy = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      if (!in_half_plane(x, half_plane)) continue;
      const double v = map.at(i, j);
      w += v;
      sx += v * x;
      sy += v * y;
    }
  }
  if (!(w > 0.0)) throw AnalysisError("centroid: no intensity in the half-plane");
  return Point{sx / w, sy / w};
}

double second_moment_radius(const IntensityMap& map, int half_plane) {
  const Point c = centroid(map, half_plane);
  const GridSpec& g = map.grid;
  double w = 0.0, s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double dy = g.y(j) - c.y;
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      if (!in_half_plane(x, half_plane)) continue;
      const double v = map.at(i, j);
      const double dx = x - c.x;
      w += v;
      s += v * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(s / w);
}

RadialProfile radial_profile(const IntensityMap& map, Point center, double r_max,
                             int half_plane) {
  const GridSpec& g = map.grid;
  RadialProfile rp;
  rp.pitch = g.dx;
  const std::size_t bins = static_cast<std::size_t>(std::floor(r_max / g.dx + 0.5)) + 1;
  std::vector<double> sum(bins, 0.0);
  rp.count.assign(bins, 0);
  const double reach = r_max + g.dx;
  const int i_lo = std::max(0, g.index_x(center.x - reach));
  const int i_hi = std::min(g.nx - 1, g.index_x(center.x + reach));
  const int j_lo = g.is_1d() ? 0 : std::max(0, g.index_y(center.y - reach));
  const int j_hi = g.is_1d() ? 0 : std::min(g.ny - 1, g.index_y(center.y + reach));
  for (int j = j_lo; j <= j_hi; ++j) {
    const double dy = g.y(j) - center.y;
    for (int i = i_lo; i <= i_hi; ++i) {
      const double x = g.x(i);
      if (!in_half_plane(x, half_plane)) continue;
      const double dx = x - center.x;
      const double r = std::sqrt(dx * dx + dy * dy);
      const std::size_t k = static_cast<std::size_t>(std::floor(r / g.dx + 0.5));
      if (k >= bins) continue;
      sum[k] += map.at(i, j);
      ++rp.count[k];
    }
  }
  rp.mean.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k)
    if (rp.count[k] > 0) rp.mean[k] = sum[k] / static_cast<double>(rp.count[k]);
  // Interpolate over empty bins (only possible near r = 0 on a lattice).
  for (std::size_t k = 1; k < bins; ++k)
    if (rp.count[k] == 0) rp.mean[k] = rp.mean[k - 1];
  return rp;
}

double first_radial_minimum(const RadialProfile& rp) {
  constexpr std::size_t kLookahead = 3;
  const auto& p = rp.mean;
  double peak = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    peak = std::max(peak, p[k]);
    if (k == 0 || k + 1 >= p.size()) continue;
    if (!(p[k] < p[k - 1]) || p[k] > 0.5 * peak) continue;
    bool is_min = true;
    for (std::size_t m = k + 1; m <= std::min(p.size() - 1, k + kLookahead); ++m)
      if (p[m] < p[k]) is_min = false;
    if (!is_min) continue;
    if (p[k + 1] > p[k]) {
      const double a = p[k - 1], b = p[k], c = p[k + 1];
      const double denom = a - 2.0 * b + c;
      const double delta = denom != 0.0 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
      return (static_cast<double>(k) + delta) * rp.pitch;
    }
    return (static_cast<double>(k) - 0.5) * rp.pitch;
  }
  return -1.0;
}

RoiPair detect_rois(const IntensityMap& control) {
  const Point left = centroid(control, -1);
  const Point right = centroid(control, +1);
  const double separation = std::hypot(right.x - left.x, right.y - left.y);
  const double r_max = 0.5 * separation;
  auto radius_for = [&](Point c, int side, const char* label) {
    const auto rp = radial_profile(control, c, r_max, side);
    const double r = first_radial_minimum(rp);
    if (!(r > 0.0))
      throw AnalysisError(std::string("detect_rois: lobes not separated; no radial "
                                      "minimum for channel ") + label);
    return r;
  };
  RoiPair pair;
  pair.first = ROI{"1'", left.x, left.y, radius_for(left, -1, "1'")};
  pair.second = ROI{"2'", right.x, right.y, radius_for(right, +1, "2'")};
  return pair;
}

namespace {

template <typename Fn>
void for_each_in_roi(const IntensityMap& map, const ROI& roi, Fn&& fn) {
  const GridSpec& g = map.grid;
  const double r2 = roi.radius * roi.radius;
  const int i_lo = std::max(0, g.index_x(roi.cx - roi.radius) - 1);
  const int i_hi = std::min(g.nx - 1, g.index_x(roi.cx + roi.radius) + 1);
  const int j_lo = g.is_1d() ? 0 : std::max(0, g.index_y(roi.cy - roi.radius) - 1);
  const int j_hi = g.is_1d() ? 0 : std::min(g.ny - 1, g.index_y(roi.cy + roi.radius) + 1);
  for (int j = j_lo; j <= j_hi; ++j) {
    const double dy = g.is_1d() ? 0.0 : g.y(j) - roi.cy;
    for (int i = i_lo; i <= i_hi; ++i) {
      const double dx = g.x(i) - roi.cx;
      if (dx * dx + dy * dy <= r2) fn(map.at(i, j));
    }
  }
}

}  // namespace

double flux_in_roi(const IntensityMap& map, const ROI& roi) {
  double s = 0.0;
  for_each_in_roi(map, roi, [&](double v) { s += v; });
  return s * map.grid.cell_area();
}

double peak_in_roi(const IntensityMap& map, const ROI& roi) {
  double m = 0.0;
  for_each_in_roi(map, roi, [&](double v) { m = std::max(m, v); });
  return m;
}

FluxReport reduction_r(double phi_control, double phi_observed) {
  if (!(phi_control > 0.0) || !std::isfinite(phi_control))
    throw std::invalid_argument("reduction_r: phi_control must be positive");
  FluxReport r;
  r.phi_control = phi_control;
  r.phi_observed = phi_observed;
  r.r_percent = 100.0 * (phi_control - phi_observed) / phi_control;
  r.flux_gain = phi_observed > phi_control;
  return r;
}

double crosstalk(const IntensityMap& map, const ROI& source, const ROI& other) {
  const double d = std::hypot(source.cx - other.cx, source.cy - other.cy);
  if (d < source.radius + other.radius)
    throw std::invalid_argument("crosstalk: ROIs overlap");
  const double src = peak_in_roi(map, source);
  if (!(src > 0.0)) throw AnalysisError("crosstalk: source ROI is dark");
  return peak_in_roi(map, other) / src;
}

DecompositionReport decompose(const Field& f1, const Field& f2) {
  if (!(f1.grid == f2.grid) || f1.z != f2.z || f1.samples.size() != f2.samples.size())
    throw std::invalid_argument("decompose: fields live on different grids or planes");
  const std::size_t n = f1.samples.size();
  DecompositionReport r;
  r.p_total = IntensityMap{f1.grid, f1.z, std::vector<double>(n)};
  r.i1 = IntensityMap{f1.grid, f1.z, std::vector<double>(n)};
  r.i2 = IntensityMap{f1.grid, f1.z, std::vector<double>(n)};
  r.gamma.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = f1.samples[k];
    const Complex b = f2.samples[k];
    r.i1.values[k] = std::norm(a);
    r.i2.values[k] = std::norm(b);
    r.p_total.values[k] = std::norm(a + b);
    r.gamma[k] = 2.0 * (std::conj(a) * b).real();
  }
  const auto be = kernels::default_backend();
  std::vector<double> abs_gamma(n);
  for (std::size_t k = 0; k < n; ++k) abs_gamma[k] = std::abs(r.gamma[k]);
  const double total = kernels::sum(r.p_total.values, be);
  r.gamma_l1_fraction = total > 0.0 ? kernels::sum(abs_gamma, be) / total : 0.0;
  r.gamma_integral = kernels::sum(r.gamma, be) * f1.grid.cell_area();
  return r;
}

}  // namespace whichway
