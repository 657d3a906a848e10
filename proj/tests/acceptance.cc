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

// Acceptance run at the reference numerics (2D, 4096 x 4096, 2.5 um pitch).
// Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "whichway/elements.h"
#include "whichway/metrics.h"
#include "whichway/propagation.h"
#include "whichway/scenarios.h"

namespace whichway {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of tolerance]");
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within(double measured, double target, double rel) {
  return std::abs(measured / target - 1.0) <= rel;
}

int failures = 0;

void report(int n, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("CRITERION %d %s: %s: %s (%.0f s)\n", n, o.pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

GridSpec square(int n, double d, double lambda) {
  GridSpec g;
  g.nx = g.ny = n;
  g.dx = g.dy = d;
  g.wavelength = lambda;
  return g;
}

Field gaussian(const GridSpec& g, double w0, double x0, double tilt) {
  Field f = create_plane_wave(g, Complex{});
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i) - x0, y = g.y(j);
      f.samples[static_cast<std::size_t>(j) * g.nx + i] = std::polar(
          std::exp(-(x * x + y * y) / (w0 * w0)), 2 * kPi * tilt * g.x(i) / g.wavelength);
    }
  return f;
}

double width_1e2(const Field& f) {
  double s0 = 0, s1 = 0, s2 = 0;
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      const double p = std::norm(f.at(i, j)), x = f.grid.x(i);
      s0 += p;
      s1 += p * x;
      s2 += p * x * x;
    }
  return 2.0 * std::sqrt(s2 / s0 - (s1 / s0) * (s1 / s0));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string drop_timestamp(std::string s) {
  const auto p = s.find("# timestamp = ");
  if (p != std::string::npos) s.erase(p, s.find('\n', p) - p);
  return s;
}

int run_acceptance() {
  const ExperimentGeometry geo;
  const Numerics num;
  const Bench bench(geo, num);
  const double lambda = geo.wavelength, f = geo.focal_length, s = geo.pinhole_separation;

  std::printf("reference numerics: %s, %d x %d, pitch %.3g m\n",
              std::string(to_string(num.dimension)).c_str(), num.grid_n, num.grid_n,
              num.grid_dx);

  const ScenarioReport sigma1 = bench.run(ScenarioId::kSigma1Interference);

  report(1, "sigma1 fringe geometry", [&] {
    Outcome o;
    const double period_ref = lambda * f / s;
    const double w = bench.central_half_window();
    const double period = fringe_period(*sigma1.profile, -w, w);
    o.check(within(period, period_ref, 0.02),
            fmt("period %.4f um vs %.4f um", period * 1e6, period_ref * 1e6));
    const double lo = sigma1.dark_fringes.at(0), hi = sigma1.dark_fringes.at(1);
    o.check(within(-lo, 0.5 * period_ref, 0.02) && within(hi, 0.5 * period_ref, 0.02),
            fmt("dark fringes %.4f / %.4f um vs +-%.4f um", lo * 1e6, hi * 1e6,
                0.5 * period_ref * 1e6));
    return o;
  });

  report(2, "central fringe visibility", [&] {
    Outcome o;
    for (std::size_t k = 0; k < sigma1.visibility.size(); ++k)
      o.check(sigma1.visibility[k].v >= 0.98,
              fmt("V[%.0f] = %.6f (>= 0.98)", double(k), sigma1.visibility[k].v));
    if (sigma1.visibility.empty()) o.check(false, "no central fringe pair found");
    return o;
  });

  report(3, "single-pinhole Airy first zero at sigma1, stop removed", [&] {
    Outcome o;
    const OpticalTrain train = bench.train(PinholeSet::kFirstOnly, ClosureMethod::kMask, {},
                                           /*include_aperture_stop=*/false);
    const TrainResult r = run_train(bench.source(), train, geo.sigma1_z,
                                    bench.propagator(), StopMode::kIncident);
    const IntensityMap m = intensity(r.field);
    const double ref = 1.22 * lambda * f / geo.pinhole_diameter;
    const double r1 = first_radial_minimum(radial_profile(m, centroid(m, 0), 2.0 * ref));
    o.check(within(r1, ref, 0.02), fmt("first zero %.2f um vs %.2f um", r1 * 1e6, ref * 1e6));
    return o;
  });

  report(4, "which-way lobe separation at sigma2", [&] {
    Outcome o;
    const ScenarioReport c = bench.run(ScenarioId::kSigma2Control);
    const double ref = 0.5 * s * (geo.sigma2_z - f) / f;
    const RoiPair& rois = *c.rois;
    o.check(within(-rois.first.cx, ref, 0.05) && within(rois.second.cx, ref, 0.05),
            fmt("lobe centers %.4f / %.4f mm vs +-%.4f mm", rois.first.cx * 1e3,
                rois.second.cx * 1e3, ref * 1e3));
    o.check(*c.crosstalk <= 1e-3,
            fmt("crosstalk %.3e (gate 1e-3, lossless target 1e-6)", *c.crosstalk));
    return o;
  });

  std::optional<Fig4Report> fig4;
  report(5, "single-pinhole wire loss", [&] {
    Outcome o;
    fig4 = bench.fig4();
    for (const FluxPair* p : {&fig4->p1_closed, &fig4->p2_closed}) {
      o.check(p->flux.r_percent >= 1.5 && p->flux.r_percent <= 2.7,
              p->label + fmt(" R = %.3f %% +- %.3f %% (1.5..2.7)", p->flux.r_percent,
                             p->r_uncertainty));
      const double growth = p->wire_width / p->control_width - 1.0;
      o.check(growth > 0.10, p->label + fmt(" width %.2f -> %.2f um (%+.1f %%, > 10 %%)",
                                            p->control_width * 1e6, p->wire_width * 1e6,
                                            100.0 * growth));
    }
    return o;
  });

  report(6, "both-open wire null", [&] {
    Outcome o;
    if (!fig4) fig4 = bench.fig4();
    const FluxPair& b = fig4->both_open;
    o.check(b.flux.r_percent <= 0.6,
            fmt("R = %.3f %% +- %.3f %% (<= 0.6)", b.flux.r_percent, b.r_uncertainty));
    o.check(fig4->intercepted_fraction <= b.flux.r_percent / 100.0 + 0.002,
            fmt("intercepted sigma1 fraction %.3e", fig4->intercepted_fraction));
    const double dark = bench.dark_fringe_position();
    const SweepReport sw = bench.sweep(std::min(0.0, dark), std::max(0.0, dark), 2);
    const double r_bright = dark > 0 ? sw.r_percent.front() : sw.r_percent.back();
    const double r_dark = dark > 0 ? sw.r_percent.back() : sw.r_percent.front();
    o.check(r_dark <= r_bright / 5.0,
            fmt("R(dark %.2f um) = %.3f %% vs R(bright) = %.3f %%", dark * 1e6, r_dark,
                r_bright));
    return o;
  });
  fig4.reset();

  report(7, "interference-term decomposition", [&] {
    Outcome o;
    const ScenarioReport d2 = bench.decomposition(Plane::kSigma2);
    o.check(d2.decomposition->gamma_l1_fraction < 0.01,
            fmt("sigma2 gamma_l1_fraction %.4e (< 0.01)", d2.decomposition->gamma_l1_fraction));
    const ScenarioReport d1 = bench.decomposition(Plane::kSigma1);
    o.check(d1.decomposition->gamma_l1_fraction > 0.5,
            fmt("sigma1 gamma_l1_fraction %.4f (> 0.5)", d1.decomposition->gamma_l1_fraction));
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      const GridSpec g = square(64, 5e-6, lambda);
      Field a = create_plane_wave(g, Complex{}), c = a;
      for (auto& v : a.samples) v = {nd(rng), nd(rng)};
      for (auto& v : c.samples) v = {nd(rng), nd(rng)};
      const DecompositionReport r = decompose(a, c);
      for (std::size_t k = 0; k < r.gamma.size(); ++k) {
        const double p = r.p_total.values[k];
        const double scale = std::max({p, r.i1.values[k], r.i2.values[k], 1e-300});
        worst = std::max(worst, std::abs(p - r.i1.values[k] - r.i2.values[k] - r.gamma[k]) /
                                    scale);
      }
    }
    o.check(worst <= 1e-12, fmt("pointwise identity residual %.2e (<= 1e-12)", worst));
    return o;
  });
  bench.release_cache();

  report(8, "propagator invariants and oracles", [&] {
    Outcome o;
    const GridSpec g = square(1024, 5e-6, lambda);
    const Field u = gaussian(g, 150e-6, 60e-6, 2e-3);
    const double comp =
        std::pow(relative_l2_error(propagate(propagate(u, 0.07), 0.11), propagate(u, 0.18)), 2);
    o.check(comp < 1e-9, fmt("composition %.2e (< 1e-9)", comp));
    const double rev = relative_l2_error(propagate(propagate(u, 0.15), -0.15), u);
    o.check(rev < 1e-9, fmt("reversibility %.2e (< 1e-9)", rev));
    const double p0 = total_power(u);
    const double unit = std::abs(total_power(propagate(u, 0.2)) - p0) / p0;
    o.check(unit < 1e-6, fmt("unitarity %.2e (< 1e-6)", unit));

    const double w0 = 200e-6, z = 0.2;
    const double zr = kPi * w0 * w0 / lambda;
    const double w_ref = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
    const double w = width_1e2(propagate(gaussian(square(1024, 5e-6, lambda), w0, 0, 0), z));
    o.check(within(w, w_ref, 1e-3), fmt("Gaussian w %.4f um vs %.4f um (1e-3)", w * 1e6,
                                        w_ref * 1e6));

    const GridSpec ga = square(2048, 5e-6, lambda);
    const double d = 100e-6, za = 0.3;
    const IntensityMap m = intensity(propagate(
        apply_circular_aperture(create_plane_wave(ga, Complex{1.0, 0.0}), 0, 0, d), za));
    const double ref = 1.22 * lambda * za / d;
    const double r1 = first_radial_minimum(radial_profile(m, Point{}, 2.0 * ref));
    o.check(within(r1, ref, 0.02),
            fmt("Airy first zero %.2f um vs %.2f um (2 %%)", r1 * 1e6, ref * 1e6));
    return o;
  });

  report(9, "Monte Carlo photons on the sigma1 pattern", [&] {
    Outcome o;
    const std::size_t n = 1000000;
    const PhotonSummary a = run_photons(bench, Plane::kSigma1, n, 2026);
    const double dev = std::abs(a.sampled.v - a.expected.v) / a.sampled.standard_error;
    o.check(dev <= 3.0, fmt("binned V %.5f vs expected %.5f: %.2f standard errors (<= 3)",
                            a.sampled.v, a.expected.v, dev));
    o.detail += fmt(" (field V %.5f)", a.field_v);
    const IntensityMap map = intensity(
        bench.sigma1_incident(PinholeSet::kBoth, ClosureMethod::kMask)->field);
    const PhotonEvents e1 = sample_photons(map, n, 99), e2 = sample_photons(map, n, 99);
    o.check(e1.x == e2.x && e1.y == e2.y, "same-seed events bit-identical");
    return o;
  });
  bench.release_cache();

  report(10, "byte-identical reruns", [&] {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "whichway_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "seed = 11\nphotons_n = 100000\n";
    const std::string out = (dir / "out").string();
    for (int pass = 0; pass < 2; ++pass) {
      for (const char* cmd : {"baseline", "photons --plane sigma1"}) {
        const std::string target = cmd[0] == 'b' ? out : out + "/photons";
        const std::string line = std::string(WHICHWAY_CLI) + " " + cmd + " --config " +
                                 (dir / "run.cfg").string() + " --out " + target +
                                 " > /dev/null 2>&1";
        const int st = std::system(line.c_str());
        if (!WIFEXITED(st) || WEXITSTATUS(st) != 0) {
          o.check(false, std::string("command failed: ") + cmd);
          return o;
        }
      }
      if (pass == 0) fs::copy(dir / "out", dir / "first", fs::copy_options::recursive);
    }
    int same = 0, differ = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "first")) {
      const fs::path name = fs::relative(entry.path(), dir / "first");
      const std::string ext = name.extension().string();
      const bool manifest = name.filename() == "manifest.txt";
      if (ext != ".csv" && ext != ".afgrid" && !manifest) continue;
      const std::string x = slurp(entry.path()), y = slurp(dir / "out" / name);
      const bool eq = manifest ? drop_timestamp(x) == drop_timestamp(y) : x == y;
      (eq ? same : differ)++;
      if (!eq) o.check(false, name.string() + " differs");
    }
    o.check(differ == 0 && same >= 8, fmt("%.0f CSV/AFGRID1/manifest files identical", same));
    fs::remove_all(dir);
    return o;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace whichway

int main() { return whichway::run_acceptance(); }
