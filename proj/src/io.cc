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

#include "whichway/io.h"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace whichway {

namespace {

constexpr std::string_view kGridMagic = "AFGRID1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int k = 0; k < 8; ++k) out |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += (out.empty() ? "" : ";") + f;
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

void scenario_row(std::string& out, const ScenarioReport& r) {
  std::optional<double> v, imax, imin, phic, phio, rr, gl1;
  if (!r.visibility.empty()) {
    v = r.visibility.front().v;
    imax = r.visibility.front().i_max;
    imin = r.visibility.front().i_min;
  }
  if (r.flux) {
    phic = r.flux->phi_control;
    phio = r.flux->phi_observed;
    rr = r.flux->r_percent;
  }
  if (r.decomposition) gl1 = r.decomposition->gamma_l1_fraction;
  out += csv_row({std::string(to_string(r.id)), opt(v), opt(imax), opt(imin), opt(phic),
                  opt(phio), opt(rr), opt(r.crosstalk), opt(gl1), join_flags(r.flags)});
}

std::string grid_stem(const ScenarioReport& r, const PlaneMap& m) {
  return "grid_" + std::string(to_string(r.id)) + "_" + m.plane;
}

}  // namespace

std::string grid_header(const IntensityMap& map) {
  const auto& g = map.grid;
  return std::to_string(g.nx) + " " + std::to_string(g.ny) + " " + format_double(g.dx) + " " +
         format_double(g.dy) + " " + format_double(g.wavelength) + " " +
         format_double(map.z);
}

void write_grid(const IntensityMap& map, const std::filesystem::path& path) {
  validate(map);
  std::string bytes;
  bytes.reserve(64 + 8 * map.values.size());
  bytes += kGridMagic;
  bytes += '\n';
  bytes += grid_header(map);
  bytes += '\n';
  for (double v : map.values) {
    const std::uint64_t le = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char b[8];
    std::memcpy(b, &le, 8);
    bytes.append(b, 8);
  }
  write_file(path, bytes);
}

IntensityMap read_grid(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  const auto nl1 = bytes.find('\n');
  if (nl1 == std::string::npos || bytes.compare(0, nl1, kGridMagic) != 0)
    throw std::runtime_error("'" + path.string() + "' is not an AFGRID1 file");
  const auto nl2 = bytes.find('\n', nl1 + 1);
  if (nl2 == std::string::npos) throw std::runtime_error("truncated AFGRID1 header");
  std::istringstream header(bytes.substr(nl1 + 1, nl2 - nl1 - 1));
  IntensityMap map;
  header >> map.grid.nx >> map.grid.ny >> map.grid.dx >> map.grid.dy >>
      map.grid.wavelength >> map.z;
  if (!header) throw std::runtime_error("malformed AFGRID1 header");
  map.grid.validate();
  const std::size_t n = map.grid.size();
  if (bytes.size() - (nl2 + 1) != 8 * n)
    throw std::runtime_error("AFGRID1 payload size does not match the header");
  map.values.resize(n);
  const char* p = bytes.data() + nl2 + 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t le;
    std::memcpy(&le, p + 8 * k, 8);
    map.values[k] = std::bit_cast<double>(to_little_endian(le));
  }
  return map;
}

void write_preview(const IntensityMap& map, const std::filesystem::path& path, double gamma) {
  validate(map);
  if (!(gamma > 0.0)) throw std::invalid_argument("write_preview: gamma must be positive");
  const int w = map.grid.nx, h = map.grid.ny;
  double peak = 0.0;
  for (double v : map.values) peak = std::max(peak, v);
  std::string bytes = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n65535\n";
  bytes.reserve(bytes.size() + 2 * map.values.size());
  for (int row = 0; row < h; ++row) {
    const int j = h - 1 - row;
    for (int i = 0; i < w; ++i) {
      const double v = map.at(i, j);
      std::uint16_t px = 0;
      if (peak > 0.0 && v > 0.0)
        px = static_cast<std::uint16_t>(std::lround(65535.0 * std::pow(v / peak, gamma)));
      bytes += static_cast<char>(px >> 8);  // PGM samples are big-endian
      bytes += static_cast<char>(px & 0xff);
    }
  }
  write_file(path, bytes);
}

Pgm read_pgm(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  std::string magic;
  Pgm pgm;
  in >> magic >> pgm.width >> pgm.height >> pgm.maxval;
  if (!in || magic != "P5" || pgm.maxval != 65535)
    throw std::runtime_error("'" + path.string() + "' is not a 16-bit binary PGM");
  const auto offset = static_cast<std::size_t>(in.tellg()) + 1;
  const std::size_t n = static_cast<std::size_t>(pgm.width) * pgm.height;
  if (bytes.size() != offset + 2 * n) throw std::runtime_error("PGM payload size mismatch");
  pgm.pixels.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto hi = static_cast<unsigned char>(bytes[offset + 2 * k]);
    const auto lo = static_cast<unsigned char>(bytes[offset + 2 * k + 1]);
    pgm.pixels[k] = static_cast<std::uint16_t>((hi << 8) | lo);
  }
  return pgm;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0xf];
  }
  return out;
}

std::string metrics_csv(const RunOutputs& run) {
  std::string out = "scenario,V,I_max,I_min,Phi_C,Phi_obs,R,crosstalk,gamma_l1_fraction,flags\n";
  for (const auto& r : run.scenarios) scenario_row(out, r);
  if (run.fig4) {
    for (const FluxPair* p : {&run.fig4->p1_closed, &run.fig4->p2_closed, &run.fig4->both_open}) {
      std::vector<std::string> flags{"r_uncertainty=" + format_double(p->r_uncertainty)};
      if (p->control_width > 0.0) {
        flags.push_back("width_control=" + format_double(p->control_width));
        flags.push_back("width_wire=" + format_double(p->wire_width));
      }
      if (p->flux.flux_gain) flags.push_back("flux_gain");
      out += csv_row({p->label + "_Pair", "", "", "", format_double(p->flux.phi_control),
                      format_double(p->flux.phi_observed), format_double(p->flux.r_percent),
                      "", "", join_flags(flags)});
    }
  }
  if (run.photons) {
    const auto& p = *run.photons;
    if (p.roi_counts.empty()) {
      out += csv_row({"Photons_" + p.plane, format_double(p.sampled.v),
                      format_double(p.sampled.n_max), format_double(p.sampled.n_min), "", "",
                      "", "", "",
                      join_flags({"field_V=" + format_double(p.field_v),
                                  "expected_binned_V=" + format_double(p.expected.v),
                                  "standard_error=" + format_double(p.expected.standard_error)})});
    } else {
      std::vector<std::string> flags;
      for (std::size_t k = 0; k < p.roi_counts.size(); ++k)
        flags.push_back("roi" + std::to_string(k + 1) + "_count=" +
                        std::to_string(p.roi_counts[k]));
      out += csv_row({"Photons_" + p.plane, "", "", "", "", "", "", "", "", join_flags(flags)});
    }
  }
  return out;
}

std::string profile_csv(const Profile& profile) {
  std::string out = "x_m,intensity\n";
  for (std::size_t i = 0; i < profile.x.size(); ++i)
    out += format_double(profile.x[i]) + "," + format_double(profile.intensity[i]) + "\n";
  return out;
}

std::string sweep_csv(const SweepReport& sweep) {
  std::string out = "x_m,R_percent\n";
  for (std::size_t i = 0; i < sweep.x.size(); ++i)
    out += format_double(sweep.x[i]) + "," + format_double(sweep.r_percent[i]) + "\n";
  return out;
}

std::string manifest_text(const RunOutputs& run) {
  const std::string body = format_config(run.config);
  std::ostringstream m;
  auto line = [&](std::string_view key, const std::string& value) {
    m << "# " << key << " = " << value << '\n';
  };
  line("tool", std::string("whichway ") + WHICHWAY_VERSION);
  line("timestamp", run.timestamp);
  line("command", run.command);
  line("config_sha256", sha256_hex(body));
  std::string ids;
  for (const auto& r : run.scenarios) ids += (ids.empty() ? "" : ",") + std::string(to_string(r.id));
  if (run.sweep) ids += (ids.empty() ? "" : ",") + std::string("WireSweep");
  line("scenarios", ids);
  line("seed", std::to_string(run.config.seed));
  line("rng", kRngName);
  line("preview_gamma", format_double(run.config.preview_gamma));
  for (const auto& [name, d] : run.sampling) {
    std::string w;
    for (const auto& s : d.warnings()) w += (w.empty() ? "" : ";") + s;
    line("sampling " + name,
         "admitted_band_fraction=" + format_double(d.admitted_band_fraction) +
             " max_beam_halfwidth_supported_m=" + format_double(d.max_beam_halfwidth_supported) +
             (w.empty() ? "" : " warnings=" + w));
  }
  TrainDiagnostics total;
  for (const auto& r : run.scenarios) total.merge(r.diagnostics);
  if (run.sweep) total.merge(run.sweep->diagnostics);
  line("guard_absorbed_total", format_double(total.guard_absorbed));
  line("band_rejected_total", format_double(total.band_rejected));
  if (!total.hops.empty())
    line("min_admitted_band_fraction", format_double(total.min_admitted_fraction()));
  const auto& g = run.config.geometry;
  line("plane_distance_m", format_double(g.sigma2_z - g.sigma1_z));
  line("note",
       "sigma2 placed at its absolute position; the quoted plane distance of 0.325 m "
       "differs from sigma2_z - sigma1_z");
  m << body;
  return m.str();
}

void write_reports(const RunOutputs& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "metrics.csv", metrics_csv(run));
  for (const auto& r : run.scenarios) {
    if (r.profile)
      write_file(dir / ("profile_" + std::string(to_string(r.id)) + ".csv"),
                 profile_csv(*r.profile));
    if (!run.write_grids) continue;
    for (const auto& m : r.maps) {
      write_grid(m.map, dir / (grid_stem(r, m) + ".afgrid"));
      write_preview(m.map, dir / (grid_stem(r, m) + ".pgm"), run.config.preview_gamma);
    }
  }
  if (run.sweep) write_file(dir / "sweep.csv", sweep_csv(*run.sweep));
  if (run.photons) {
    const auto& p = *run.photons;
    std::string out = "x_m,count\n";
    const int bins = static_cast<int>(p.hist_counts.size());
    const double w = (p.hist_hi - p.hist_lo) / bins;
    for (int b = 0; b < bins; ++b)
      out += format_double(p.hist_lo + (b + 0.5) * w) + "," + std::to_string(p.hist_counts[b]) +
             "\n";
    write_file(dir / ("photons_" + p.plane + ".csv"), out);
  }
  write_file(dir / "manifest.txt", manifest_text(run));
}

}  // namespace whichway
