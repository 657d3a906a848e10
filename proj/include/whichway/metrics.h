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

#ifndef WHICHWAY_METRICS_H_
#define WHICHWAY_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "whichway/errors.h"
#include "whichway/field.h"

namespace whichway {

/// Intensity along x, averaged over a band of rows.
struct Profile {
  std::vector<double> x;
  std::vector<double> intensity;
  std::string description;
};

/// Mean over rows whose y coordinate lies in [y_lo, y_hi]. In 1D mode the
/// band must contain y = 0. Throws AnalysisError when no row is selected.
Profile extract_profile(const IntensityMap& map, double y_lo, double y_hi);

/// Sub-sample extremum from 3-point quadratic interpolation.
struct Extremum {
  double x = 0.0;
  double value = 0.0;
  bool is_max = false;
};

/// Strict local extrema of the profile with x in [x_lo, x_hi], sorted by x.
std::vector<Extremum> find_extrema(const Profile& profile, double x_lo, double x_hi);

double visibility(double i_max, double i_min);

struct VisibilityReport {
  double v = 0.0;
  double i_max = 0.0;
  double i_min = 0.0;
  double x_max = 0.0;
  double x_min = 0.0;
  double fringe_period = 0.0;
};

/// I_max is the largest local maximum in [x_lo, x_hi]; I_min the next
/// extremum in +x (the previous one when the maximum is the last extremum).
VisibilityReport fringe_visibility(const Profile& profile, double x_lo, double x_hi);

/// Visibility of the `pairs` adjacent max/min pairs whose midpoints are
/// closest to `center`.
std::vector<VisibilityReport> central_visibilities(const Profile& profile,
                                                   double center, int pairs,
                                                   double half_window);

/// The `count` interpolated minima nearest to `near`, sorted by distance
/// (ties broken towards -x).
std::vector<double> locate_fringe_minima(const Profile& profile, double near, int count);

/// Mean spacing of consecutive minima in [x_lo, x_hi].
double fringe_period(const Profile& profile, double x_lo, double x_hi);

struct ROI {
  std::string label;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

/// Channel 1' (beam from pinhole 1, lands at -x) and channel 2' (+x).
struct RoiPair {
  ROI first;
  ROI second;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Intensity centroid over a half-plane: sign > 0 keeps x >= 0, sign < 0
/// keeps x < 0, sign == 0 keeps everything.
Point centroid(const IntensityMap& map, int half_plane);

/// sqrt(sum I r^2 / sum I) about the half-plane centroid.
double second_moment_radius(const IntensityMap& map, int half_plane);

struct RadialProfile {
  double pitch = 0.0;             // bin k is centered at radius k * pitch
  std::vector<double> mean;       // azimuthal mean intensity
  std::vector<std::size_t> count; // samples per bin
};

RadialProfile radial_profile(const IntensityMap& map, Point center, double r_max,
                             int half_plane = 0);

/// Radius of the first local minimum after the profile has fallen to half its
/// running maximum; negative when none is found. Strict minima are refined by
/// quadratic interpolation, a zero plateau reports the inner edge of its
/// first bin.
double first_radial_minimum(const RadialProfile& profile);

/// Per half-plane centroid plus first radial minimum. Throws AnalysisError
/// when a lobe has no minimum before half the centroid separation.
RoiPair detect_rois(const IntensityMap& control);

/// Sum of intensity times cell area over samples whose centers lie in the ROI.
double flux_in_roi(const IntensityMap& map, const ROI& roi);
double peak_in_roi(const IntensityMap& map, const ROI& roi);

struct FluxReport {
  double phi_control = 0.0;
  double phi_observed = 0.0;
  double r_percent = 0.0;
  bool flux_gain = false;  // phi_observed > phi_control
};

FluxReport reduction_r(double phi_control, double phi_observed);

/// Peak intensity inside `other` over peak inside `source`.
double crosstalk(const IntensityMap& map, const ROI& source, const ROI& other);

struct DecompositionReport {
  IntensityMap p_total;
  IntensityMap i1;
  IntensityMap i2;
  std::vector<double> gamma;  // 2 Re(conj(f1) f2), signed
  double gamma_l1_fraction = 0.0;
  double gamma_integral = 0.0;  // sum gamma * cell area
};

DecompositionReport decompose(const Field& f1, const Field& f2);

// Monte Carlo photon detection.

inline constexpr const char* kRngName = "mt19937_64 (splitmix64-derived per-block seeds)";
inline constexpr std::size_t kPhotonBlock = std::size_t{1} << 16;

/// SplitMix64 finalizer used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct PhotonEvents {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::size_t> roi_counts;
};

/// n i.i.d. detections from the normalized intensity: cell chosen by
/// cumulative-weight inversion, position jittered uniformly inside the cell.
/// Events are generated in blocks of kPhotonBlock, block b seeded with
/// derive_seed(seed, b), so the output does not depend on the thread count.
PhotonEvents sample_photons(const IntensityMap& map, std::size_t n, std::uint64_t seed,
                            std::span<const ROI> rois = {});

std::vector<std::size_t> count_in_rois(const PhotonEvents& events,
                                       std::span<const ROI> rois);

struct BinnedVisibility {
  double n_max = 0.0;
  double n_min = 0.0;
  double v = 0.0;
  double standard_error = 0.0;  // delta method with Poisson variances
};

/// Counts in the bins [x_max +- w/2] and [x_min +- w/2] (rows |y| band).
BinnedVisibility histogram_visibility(const PhotonEvents& events, double x_max,
                                      double x_min, double bin_width, double y_lo,
                                      double y_hi);
/// Expected counts for the same bins, integrating the map over cell overlaps.
BinnedVisibility expected_binned_visibility(const IntensityMap& map, std::size_t n,
                                            double x_max, double x_min,
                                            double bin_width, double y_lo,
                                            double y_hi);

/// Event counts per x bin over [x_lo, x_hi).
std::vector<std::size_t> histogram_x(const PhotonEvents& events, double x_lo,
                                     double x_hi, int bins);

}  // namespace whichway

#endif  // WHICHWAY_METRICS_H_
