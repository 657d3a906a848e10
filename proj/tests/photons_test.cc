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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "whichway/metrics.h"
#include "whichway/scenarios.h"

namespace whichway {
namespace {

// Upper 1% point of the chi-square distribution with 63 degrees of freedom.
constexpr double kChi2Critical63 = 92.01002361413214;

GridSpec square(int n, double d) {
  GridSpec g;
  g.nx = g.ny = n;
  g.dx = g.dy = d;
  g.wavelength = 650e-9;
  return g;
}

IntensityMap map_from(const GridSpec& g, auto&& fn) {
  IntensityMap m;
  m.grid = g;
  m.values.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      m.values[static_cast<std::size_t>(j) * g.nx + i] = fn(g.x(i), g.y(j));
  return m;
}

TEST(PhotonTest, SingleCellReceivesEverything) {
  const GridSpec g = square(16, 1.0);
  IntensityMap m = map_from(g, [](double, double) { return 0.0; });
  m.values[5 * 16 + 9] = 2.0;
  const PhotonEvents e = sample_photons(m, 10000, 3);
  ASSERT_EQ(e.x.size(), 10000u);
  for (std::size_t k = 0; k < e.n; ++k) {
    EXPECT_GE(e.x[k], g.x(9) - 0.5);
    EXPECT_LT(e.x[k], g.x(9) + 0.5);
    EXPECT_GE(e.y[k], g.y(5) - 0.5);
    EXPECT_LT(e.y[k], g.y(5) + 0.5);
  }
}

TEST(PhotonTest, UniformQuadrantsWithinFourSigma) {
  const GridSpec g = square(64, 1.0);
  const IntensityMap m = map_from(g, [](double, double) { return 1.0; });
  const std::size_t n = 1000000;
  const PhotonEvents e = sample_photons(m, n, 12345);
  std::size_t q[4] = {0, 0, 0, 0};
  const double cx = 0.5 * (g.x_lo() + g.x_hi()), cy = 0.5 * (g.y_lo() + g.y_hi());
  for (std::size_t k = 0; k < n; ++k) q[(e.x[k] >= cx) + 2 * (e.y[k] >= cy)] += 1;
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (std::size_t c : q) EXPECT_LT(std::abs(double(c) - n / 4.0), 4 * sigma);
}

TEST(PhotonTest, SameSeedIsBitIdenticalOtherSeedDiffers) {
  const GridSpec g = square(32, 1e-6);
  const IntensityMap m = map_from(g, [](double x, double y) { return 1e12 * (x * x + y * y) + 0.1; });
  const PhotonEvents a = sample_photons(m, 200000, 77);
  const PhotonEvents b = sample_photons(m, 200000, 77);
  const PhotonEvents c = sample_photons(m, 200000, 78);
  EXPECT_EQ(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)), 0);
  EXPECT_EQ(std::memcmp(a.y.data(), b.y.data(), a.y.size() * sizeof(double)), 0);
  EXPECT_NE(a.x, c.x);
}

TEST(PhotonTest, EventsInsideWindowAndRoiCountsBounded) {
  const GridSpec g = square(40, 2.0);
  const IntensityMap m = map_from(g, [](double x, double) { return 1.0 + x * x; });
  const ROI rois[] = {ROI{"1'", -20, 0, 10}, ROI{"2'", 20, 0, 10}};
  const PhotonEvents e = sample_photons(m, 50000, 9, rois);
  for (std::size_t k = 0; k < e.n; ++k) {
    EXPECT_GE(e.x[k], g.x_lo());
    EXPECT_LT(e.x[k], g.x_hi());
    EXPECT_GE(e.y[k], g.y_lo());
    EXPECT_LT(e.y[k], g.y_hi());
  }
  ASSERT_EQ(e.roi_counts.size(), 2u);
  EXPECT_LE(e.roi_counts[0] + e.roi_counts[1], e.n);
  EXPECT_EQ(e.roi_counts, count_in_rois(e, rois));
}

TEST(PhotonTest, RejectsDarkMapAndZeroCount) {
  const GridSpec g = square(8, 1.0);
  const IntensityMap dark = map_from(g, [](double, double) { return 0.0; });
  EXPECT_THROW(sample_photons(dark, 10, 1), AnalysisError);
  const IntensityMap lit = map_from(g, [](double, double) { return 1.0; });
  EXPECT_THROW(sample_photons(lit, 0, 1), std::invalid_argument);
}

TEST(PhotonTest, MarginalPassesChiSquare) {
  const GridSpec g = square(128, 1.0);
  const IntensityMap m = map_from(g, [](double x, double y) {
    return std::exp(-(x * x + y * y) / 900.0) * (1.2 + std::cos(x / 5.0));
  });
  const std::size_t n = 1000000;
  const PhotonEvents e = sample_photons(m, n, 2024);
  // Bins of two columns each, so the expected counts follow from the map.
  const int bins = 64;
  const auto counts = histogram_x(e, g.x_lo(), g.x_hi(), bins);
  std::vector<double> expected(bins, 0.0);
  double total = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      expected[i / 2] += m.at(i, j);
      total += m.at(i, j);
    }
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double ex = n * expected[b] / total;
    chi2 += (counts[b] - ex) * (counts[b] - ex) / ex;
  }
  EXPECT_LT(chi2, kChi2Critical63);
}

TEST(PhotonTest, FocalFringeVisibilityWithinShotNoise) {
  Numerics num;
  num.dimension = DimensionMode::k1D;
  num.grid_n = 16384;
  const Bench bench(ExperimentGeometry{}, num);
  const PhotonSummary s = run_photons(bench, Plane::kSigma1, 1000000, 99);
  EXPECT_GT(s.field_v, 0.98);
  EXPECT_GT(s.expected.standard_error, 0.0);
  EXPECT_LT(std::abs(s.sampled.v - s.expected.v), 3 * s.expected.standard_error)
      << "sampled " << s.sampled.v << " expected " << s.expected.v;
  EXPECT_EQ(s.hist_counts.size(), 64u);
}

}  // namespace
}  // namespace whichway
