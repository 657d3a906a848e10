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

// Command-line front end: runs one experiment family per subcommand and
// writes its reports.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "whichway/config.h"
#include "whichway/errors.h"
#include "whichway/io.h"
#include "whichway/scenarios.h"

namespace {

using namespace whichway;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string plane = "sigma1";
  double x_min = 0.0;
  double x_max = 0.0;
  int steps = 0;
  std::optional<std::int64_t> n;
  std::optional<std::uint64_t> seed;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.n) {
    if (*o.n < 1) throw ConfigError("--n must be >= 1");
    c.photons_n = *o.n;
  }
  return c;
}

Plane parse_plane(const std::string& s) {
  if (s == "sigma1") return Plane::kSigma1;
  if (s == "sigma2") return Plane::kSigma2;
  throw ConfigError("--plane must be sigma1 or sigma2, got '" + s + "'");
}

void print_scenario(const ScenarioReport& r) {
  std::cout << to_string(r.id) << '\n';
  for (std::size_t k = 0; k < r.visibility.size(); ++k) {
    const auto& v = r.visibility[k];
    std::cout << "  V[" << k << "] = " << format_double(v.v) << "  (x_max "
              << format_double(v.x_max) << " m, x_min " << format_double(v.x_min)
              << " m, period " << format_double(v.fringe_period) << " m)\n";
  }
  if (!r.dark_fringes.empty()) {
    std::cout << "  dark fringes:";
    for (double x : r.dark_fringes) std::cout << ' ' << format_double(x);
    std::cout << " m\n";
  }
  if (r.rois)
    std::cout << "  ROIs: 1' at (" << format_double(r.rois->first.cx) << ", "
              << format_double(r.rois->first.cy) << ") 2' at ("
              << format_double(r.rois->second.cx) << ", " << format_double(r.rois->second.cy)
              << ") radius " << format_double(r.rois->first.radius) << " m\n";
  if (r.flux)
    std::cout << "  Phi_C = " << format_double(r.flux->phi_control)
              << "  Phi_obs = " << format_double(r.flux->phi_observed)
              << "  R = " << format_double(r.flux->r_percent) << " %\n";
  if (r.crosstalk) std::cout << "  crosstalk = " << format_double(*r.crosstalk) << '\n';
  if (r.lobe_width) std::cout << "  lobe width = " << format_double(*r.lobe_width) << " m\n";
  if (r.decomposition)
    std::cout << "  gamma_l1_fraction = " << format_double(r.decomposition->gamma_l1_fraction)
              << '\n';
  for (const auto& f : r.flags) std::cout << "  flag: " << f << '\n';
}

int run_command(const std::string& name, const Options& o, const std::string& invocation) {
  const ExperimentConfig config = resolve_config(o);
  Bench bench(config.geometry, config.numerics);

  if (name == "check") {
    bool refused = false;
    for (const auto& [hop, d] : bench.sampling_report()) {
      std::cout << hop << ": admitted_band_fraction " << format_double(d.admitted_band_fraction)
                << ", max_beam_halfwidth_supported " << format_double(d.max_beam_halfwidth_supported)
                << " m";
      for (const auto& w : d.warnings()) std::cout << ", " << w;
      std::cout << '\n';
      if (d.admitted_band_fraction < config.numerics.band_floor) refused = true;
    }
    if (refused) {
      std::cout << "refused: admitted band below band_floor "
                << format_double(config.numerics.band_floor) << '\n';
      return kExitNumerical;
    }
    return kExitOk;
  }

  RunOutputs run;
  run.command = invocation;
  run.config = config;
  run.timestamp = utc_timestamp();
  run.sampling = bench.sampling_report();

  if (name == "baseline") {
    run.scenarios.push_back(bench.run(ScenarioId::kSigma1Interference));
    run.scenarios.push_back(bench.run(ScenarioId::kSigma2Control));
  } else if (name == "fig4") {
    Fig4Report rep = bench.fig4();
    for (auto& r : rep.runs) {
      r.geometry = config.geometry;
      r.geometry.wire_positions = rep.wire_positions;
      r.numerics = config.numerics;
    }
    run.scenarios = rep.runs;
    rep.runs.clear();
    run.fig4 = std::move(rep);
  } else if (name == "decompose") {
    const Plane plane = parse_plane(o.plane);
    run.scenarios.push_back(bench.run(plane == Plane::kSigma1 ? ScenarioId::kDecompositionSigma1
                                                              : ScenarioId::kDecompositionSigma2));
  } else if (name == "sweep") {
    run.sweep = bench.sweep(o.x_min, o.x_max, o.steps);
  } else if (name == "photons") {
    run.photons = run_photons(bench, parse_plane(o.plane),
                              static_cast<std::size_t>(config.photons_n), config.seed);
  }

  for (const auto& r : run.scenarios) print_scenario(r);
  if (run.fig4) {
    for (const FluxPair* p : {&run.fig4->p1_closed, &run.fig4->p2_closed, &run.fig4->both_open})
      std::cout << p->label << ": R = " << format_double(p->flux.r_percent) << " +- "
                << format_double(p->r_uncertainty) << " %\n";
    std::cout << "intercepted sigma1 fraction = "
              << format_double(run.fig4->intercepted_fraction) << '\n';
  }
  if (run.sweep)
    for (std::size_t k = 0; k < run.sweep->x.size(); ++k)
      std::cout << "x = " << format_double(run.sweep->x[k])
                << " m  R = " << format_double(run.sweep->r_percent[k]) << " %\n";
  if (run.photons) {
    const auto& p = *run.photons;
    if (p.roi_counts.empty())
      std::cout << "photons: sampled V = " << format_double(p.sampled.v) << ", expected "
                << format_double(p.expected.v) << " +- " << format_double(p.expected.standard_error)
                << ", field V = " << format_double(p.field_v) << '\n';
    else
      std::cout << "photons: ROI 1' " << p.roi_counts[0] << ", ROI 2' " << p.roi_counts[1]
                << " of " << p.n << '\n';
  }

  write_reports(run, config.output_dir);
  std::cout << "wrote " << config.output_dir << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scalar wave-optics simulator of a crossed-beam double-pinhole which-way bench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(WHICHWAY_VERSION));
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_dir, "output directory (overrides output_dir)");
  };
  common(app.add_subcommand("baseline", "sigma1 interference and sigma2 control runs"));
  common(app.add_subcommand("fig4", "six-run wire suite with frozen ROIs"));
  auto* decompose = app.add_subcommand("decompose", "coherent/incoherent split at one plane");
  common(decompose);
  decompose->add_option("--plane", o.plane, "sigma1 or sigma2")->required();
  auto* sweep = app.add_subcommand("sweep", "flux reduction versus wire position");
  common(sweep);
  sweep->add_option("--min", o.x_min, "first wire position (m)")->required();
  sweep->add_option("--max", o.x_max, "last wire position (m)")->required();
  sweep->add_option("--steps", o.steps, "number of positions (>= 2)")->required();
  auto* photons = app.add_subcommand("photons", "Monte Carlo detections on one plane");
  common(photons);
  photons->add_option("--n", o.n, "number of photons (default photons_n)");
  photons->add_option("--seed", o.seed, "RNG seed (default seed)");
  photons->add_option("--plane", o.plane, "sigma1 or sigma2");
  auto* check = app.add_subcommand("check", "sampling diagnostics, stdout only");
  check->add_option("--config", o.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  check->add_option("--out", o.out_dir, "ignored: check writes nothing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const CLI::App* sub = app.get_subcommands().front();
  std::string invocation = sub->get_name();
  for (int k = 2; k < argc; ++k) invocation += std::string(" ") + argv[k];

  try {
    return run_command(sub->get_name(), o, invocation);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical refusal: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
