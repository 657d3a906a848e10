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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "whichway/metrics.h"
#include "whichway/scenarios.h"

namespace whichway {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLambda = 650e-9;

GridSpec square(int n, double d) {
  GridSpec g;
  g.nx = g.ny = n;
  g.dx = g.dy = d;
  g.wavelength = kLambda;
  return g;
}

GridSpec line(int n, double d) {
  GridSpec g = square(n, d);
  g.ny = 1;
  return g;
}

Field uniform(const GridSpec& g) { return create_plane_wave(g, Complex{1.0, 0.0}); }

Field random_field(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<Complex> s(g.size());
  for (auto& c : s) c = {n(rng), n(rng)};
  return make_field(g, 0.0, std::move(s));
}

TEST(GeometryTest, DefaultsAreValidAndConsistent) {
  const ExperimentGeometry g;
  EXPECT_NO_THROW(g.validate());
  EXPECT_GT(g.separation_in_wavelengths(), 3000.0);
  EXPECT_EQ(g.pinhole_diameter, 250e-6);
  EXPECT_EQ(g.pinhole_separation, 2e-3);
}

TEST(GeometryTest, RejectsInconsistentValues) {
  ExperimentGeometry g;
  g.sigma2_z = 0.1;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.pinhole_diameter = 3e-3;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.wire_thickness = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(ThinLensTest, PurePhaseWithUnchangedAxisSample) {
  const GridSpec g = square(128, 5e-6);
  const Field in = random_field(g, 1);
  const Field out = apply_thin_lens(in, 0.2);
  const std::size_t axis = static_cast<std::size_t>(g.ny / 2) * g.nx + g.nx / 2;
  EXPECT_EQ(out.samples[axis], in.samples[axis]);
  for (std::size_t k = 0; k < in.samples.size(); ++k)
    EXPECT_NEAR(std::abs(out.samples[k]), std::abs(in.samples[k]), 1e-12);
}

TEST(ThinLensTest, RefusesUndersampledPhase) {
  EXPECT_THROW(apply_thin_lens(uniform(square(256, 50e-6)), 0.01), NumericalError);
}

TEST(ThinLensTest, FocalSpotIsAiry) {
  const GridSpec g = square(1024, 5e-6);
  const double f = 0.2, d = 500e-6;
  Field u = apply_thin_lens(uniform(g), f);
  u = apply_circular_aperture(std::move(u), 0.0, 0.0, d);
  const IntensityMap m = intensity(propagate(std::move(u), f));
  const double expected = 1.22 * kLambda * f / d;
  const double r1 = first_radial_minimum(radial_profile(m, Point{}, 2.0 * expected));
  EXPECT_NEAR(expected, 317e-6, 0.5e-6);
  EXPECT_LT(std::abs(r1 / expected - 1.0), 0.02) << "first zero at " << r1;
}

TEST(ApertureTest, HugeApertureIsIdentity) {
  const GridSpec g = square(64, 5e-6);
  const Field in = random_field(g, 2);
  EXPECT_EQ(apply_circular_aperture(in, 0, 0, 1.0).samples, in.samples);
}

// Edge cells carry their covered area fraction as amplitude transmittance.
double open_area(const Field& out) {
  double a = 0.0;
  for (const Complex& c : out.samples) a += c.real();
  return a * out.grid.dx * out.grid.dy;
}

TEST(ApertureTest, OpenAreaFollowsDiameter) {
  const GridSpec g = square(1024, 2.5e-6);
  for (double d : {0.25e-3, 1e-3, 2e-3}) {
    const Field out = apply_circular_aperture(uniform(g), 1e-4, -2e-4, d);
    const double area = kPi * d * d / 4.0;
    EXPECT_NEAR(open_area(out), area, 1e-3 * area) << "d=" << d;
    const double power_ratio = total_power(out) / total_power(uniform(g));
    EXPECT_LE(power_ratio, area / (g.width() * g.height()));
    EXPECT_GT(power_ratio, 0.98 * area / (g.width() * g.height()));
  }
}

TEST(ApertureTest, OutsideWindowIsAnError) {
  EXPECT_THROW(apply_circular_aperture(uniform(square(64, 5e-6)), 1.0, 0.0, 1e-3),
               std::invalid_argument);
}

TEST(ApertureTest, OffsetSelectorBlocksOtherPinhole) {
  const Bench bench(ExperimentGeometry{}, [] {
    Numerics n;
    n.grid_n = 1024;
    n.grid_dx = 5e-6;
    return n;
  }());
  const ExperimentGeometry& geo = bench.geometry();
  const GridSpec g = bench.grid();
  const Field out = apply_circular_aperture(uniform(g), bench.selector_center(PinholeSet::kFirstOnly),
                                            0.0, geo.selector_diameter);
  const auto p2 = disk_transmittance(g, -geo.pinhole_separation / 2, 0.0, geo.pinhole_diameter);
  const auto p1 = disk_transmittance(g, geo.pinhole_separation / 2, 0.0, geo.pinhole_diameter);
  double through2 = 0.0, through1 = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    through2 += p2[k] * std::norm(out.samples[k]);
    through1 += p1[k] * std::norm(out.samples[k]);
  }
  EXPECT_EQ(through2, 0.0);
  EXPECT_GT(through1, 0.0);
}

TEST(DualPinholeTest, TransmittanceAtCentersAndMidpoint) {
  const GridSpec g = square(1024, 2.5e-6);
  const auto t = dual_pinhole_transmittance(g, 2e-3, 250e-6, PinholeSet::kBoth);
  auto at = [&](double x, double y) {
    return t[static_cast<std::size_t>(g.index_y(y)) * g.nx + g.index_x(x)];
  };
  EXPECT_EQ(at(1e-3, 0.0), 1.0);
  EXPECT_EQ(at(-1e-3, 0.0), 1.0);
  EXPECT_EQ(at(0.0, 0.0), 0.0);
}

TEST(DualPinholeTest, BothOpenDoublesSinglePinholePower) {
  const GridSpec g = square(1024, 2.5e-6);
  const double both = total_power(apply_dual_pinhole(uniform(g), 2e-3, 250e-6));
  const double one = total_power(apply_dual_pinhole(uniform(g), 2e-3, 250e-6, PinholeSet::kFirstOnly));
  const double two = total_power(apply_dual_pinhole(uniform(g), 2e-3, 250e-6, PinholeSet::kSecondOnly));
  EXPECT_NEAR(both, 2.0 * one, 1e-12 * both);
  EXPECT_NEAR(one, two, 1e-12 * both);
}

TEST(WireGridTest, UniformFieldLosesWireArea) {
  const GridSpec g = square(512, 2.5e-6);
  const double t = 10e-6;
  for (double x : {0.0, 32.5e-6, -101.3e-6}) {
    const double pos[] = {x};
    const Field out = apply_wire_grid(uniform(g), pos, t);
    const double blocked = g.width() * g.height() - open_area(out);
    EXPECT_NEAR(blocked, t * g.height(), 1e-9 * t * g.height()) << "x=" << x;
    const double loss = 1.0 - total_power(out) / total_power(uniform(g));
    EXPECT_GE(loss, t / g.width() - 1e-12);
    EXPECT_LE(loss, (t + g.dx) / g.width());
  }
}

TEST(WireGridTest, WireInDarkRegionChangesNothing) {
  const GridSpec g = square(256, 2.5e-6);
  Field in = random_field(g, 3);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (std::abs(g.x(i) - 50e-6) < 20e-6) in.samples[static_cast<std::size_t>(j) * g.nx + i] = 0.0;
  const double pos[] = {50e-6};
  const Field out = apply_wire_grid(in, pos, 10e-6);
  const auto t = wire_column_transmittance(g, pos, 10e-6);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (t[i] == 1.0) {
        ASSERT_EQ(out.at(i, j), in.at(i, j));
      }
  EXPECT_NEAR(total_power(out), total_power(in), 1e-12 * total_power(in));
}

TEST(WireGridTest, EmptyListIsIdentity) {
  const Field in = random_field(square(32, 5e-6), 4);
  EXPECT_EQ(apply_wire_grid(in, {}, 10e-6).samples, in.samples);
}

TEST(WireGridTest, MultipleWiresBlockIndependently) {
  const GridSpec g = square(512, 2.5e-6);
  const double pos[] = {-97.5e-6, -32.5e-6, 32.5e-6, 97.5e-6};
  const Field out = apply_wire_grid(uniform(g), pos, 10e-6);
  const double blocked = g.width() * g.height() - open_area(out);
  EXPECT_NEAR(blocked, 4 * 10e-6 * g.height(), 1e-9 * g.height());
  const double overlapping[] = {0.0, 5e-6};
  EXPECT_THROW(apply_wire_grid(uniform(g), overlapping, 10e-6), std::invalid_argument);
}

TEST(MaskTest, TransmittanceBoundedAndIdempotentUpToEdges) {
  const GridSpec g = square(256, 2.5e-6);
  const auto disk = disk_transmittance(g, 13e-6, -7e-6, 200e-6);
  const double pos[] = {1.3e-6};
  const auto wire = wire_column_transmittance(g, pos, 10e-6);
  for (const auto* t : {&disk, &wire}) {
    for (double v : *t) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      EXPECT_LE(v * v, v);
    }
  }
  const Field in = uniform(g);
  const Field once = apply_circular_aperture(in, 13e-6, -7e-6, 200e-6);
  const Field twice = apply_circular_aperture(once, 13e-6, -7e-6, 200e-6);
  for (std::size_t k = 0; k < in.samples.size(); ++k) {
    if (disk[k] == 0.0 || disk[k] == 1.0)
      EXPECT_EQ(twice.samples[k], once.samples[k]);
    else
      EXPECT_LE(std::abs(twice.samples[k]), std::abs(once.samples[k]));
  }
}

TEST(MaskTest, OneDimensionalDiskIsSlit) {
  const GridSpec g = line(400, 1.0);
  const auto t = disk_transmittance(g, 0.0, 0.0, 10.0);
  double open = 0.0;
  for (double v : t) open += v;
  EXPECT_DOUBLE_EQ(open, 10.0);
}

OpticalTrain pinhole_train(const ExperimentGeometry& geo, PinholeSet open) {
  OpticalTrain t;
  t.add(0.0, ThinLens{geo.focal_length});
  t.add(0.0, DualPinhole{geo.pinhole_separation, geo.pinhole_diameter, open});
  t.add_plane("sigma1", geo.sigma1_z);
  t.add_plane("sigma2", geo.sigma2_z);
  return t;
}

TEST(TrainTest, EmptyTrainIsIdentity) {
  const Field in = random_field(square(32, 5e-6), 5);
  const TrainResult r = run_train(in, OpticalTrain{}, in.z, Propagator());
  EXPECT_EQ(r.field.samples, in.samples);
  EXPECT_TRUE(r.diagnostics.hops.empty());
}

TEST(TrainTest, StagesSortByZAndShareOrder) {
  OpticalTrain t;
  t.add(0.2, CircularAperture{0, 0, 1e-3});
  t.add(0.0, ThinLens{0.2});
  t.add(0.0, DualPinhole{2e-3, 250e-6, PinholeSet::kBoth});
  ASSERT_EQ(t.stages().size(), 2u);
  EXPECT_EQ(t.stages()[0].z, 0.0);
  ASSERT_EQ(t.stages()[0].elements.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<ThinLens>(t.stages()[0].elements[0]));
  EXPECT_TRUE(std::holds_alternative<DualPinhole>(t.stages()[0].elements[1]));
}

TEST(TrainTest, FringePeriodAtFocalPlane) {
  const ExperimentGeometry geo;
  const GridSpec g = line(16384, 2.5e-6);
  const TrainResult r =
      run_train(uniform(g), pinhole_train(geo, PinholeSet::kBoth), geo.sigma1_z, Propagator());
  EXPECT_DOUBLE_EQ(r.field.z, geo.sigma1_z);
  const Profile p = extract_profile(intensity(r.field), 0.0, 0.0);
  const double expected = kLambda * geo.focal_length / geo.pinhole_separation;
  EXPECT_LT(std::abs(fringe_period(p, -200e-6, 200e-6) / expected - 1.0), 0.02);
}

TEST(TrainTest, SinglePinholeBeamFollowsChiefRay) {
  const ExperimentGeometry geo;
  const GridSpec g = line(16384, 2.5e-6);
  for (PinholeSet open : {PinholeSet::kFirstOnly, PinholeSet::kSecondOnly}) {
    const TrainResult r =
        run_train(uniform(g), pinhole_train(geo, open), geo.sigma2_z, Propagator());
    const double x0 = (open == PinholeSet::kFirstOnly ? 0.5 : -0.5) * geo.pinhole_separation;
    const double expected = -x0 * (geo.sigma2_z - geo.focal_length) / geo.focal_length;
    const Point c = centroid(intensity(r.field), 0);
    EXPECT_LT(std::abs(c.x / expected - 1.0), 0.02) << "centroid " << c.x;
  }
}

TEST(TrainTest, TrainIsLinear) {
  const ExperimentGeometry geo;
  const GridSpec g = line(8192, 2.5e-6);
  OpticalTrain t = pinhole_train(geo, PinholeSet::kBoth);
  t.add(geo.selector_z, CircularAperture{0, 0, geo.selector_diameter});
  t.add(geo.as_z, CircularAperture{0, 0, geo.as_diameter});
  const Field u = random_field(g, 6), v = random_field(g, 7);
  const Complex a{0.3, -1.2}, b{-0.7, 0.4};
  const Propagator p;
  const Field lhs = run_train(add(scaled(u, a), scaled(v, b)), t, geo.sigma2_z, p).field;
  const Field rhs = add(scaled(run_train(u, t, geo.sigma2_z, p).field, a),
                        scaled(run_train(v, t, geo.sigma2_z, p).field, b));
  EXPECT_LT(relative_l2_error(lhs, rhs), 1e-9);
}

TEST(TrainTest, FocalPatternIsEvenInX) {
  const ExperimentGeometry geo;
  const GridSpec g = square(1024, 5e-6);
  const TrainResult r =
      run_train(uniform(g), pinhole_train(geo, PinholeSet::kBoth), geo.sigma1_z, Propagator());
  const IntensityMap m = intensity(r.field);
  double peak = 0.0, worst = 0.0;
  for (double v : m.values) peak = std::max(peak, v);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i)
      worst = std::max(worst, std::abs(m.at(i, j) - m.at(g.nx - i, j)));
  EXPECT_LT(worst / peak, 1e-6);
}

TEST(TrainTest, IncidentModeStopsBeforeElements) {
  const GridSpec g = line(1024, 5e-6);
  OpticalTrain t;
  t.add(0.1, CircularAperture{0, 0, 100e-6});
  const Field u = uniform(g);
  const TrainResult incident = run_train(u, t, 0.1, Propagator(), StopMode::kIncident);
  const TrainResult after = run_train(u, t, 0.1, Propagator());
  EXPECT_GT(total_power(incident.field), total_power(after.field));
  EXPECT_DOUBLE_EQ(incident.field.z, 0.1);
}

}  // namespace
}  // namespace whichway
