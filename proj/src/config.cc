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

#include "whichway/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace whichway {

namespace {

constexpr std::string_view kAutoDarkFringe = "auto_dark_fringe";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view key, std::string_view v, int line) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": not a finite number: '" + std::string(v) + "'",
                      line);
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v, int line) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(std::string(key) + ": not an integer: '" + std::string(v) + "'", line);
  return out;
}

double positive(std::string_view key, std::string_view v, int line) {
  const double x = parse_real(key, v, line);
  if (!(x > 0.0)) throw ConfigError(std::string(key) + " must be positive", line);
  return x;
}

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view key, std::string_view v, int line,
                const std::pair<std::string_view, Enum> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (name == v) return value;
  std::string allowed;
  for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw ConfigError(std::string(key) + ": expected " + allowed + ", got '" + std::string(v) + "'",
                    line);
}

constexpr std::pair<std::string_view, DimensionMode> kDimensions[] = {
    {"1d", DimensionMode::k1D}, {"2d", DimensionMode::k2D}};
constexpr std::pair<std::string_view, SelectorMode> kSelectors[] = {
    {"both", SelectorMode::kBoth},      {"p1", SelectorMode::kP1},
    {"p2", SelectorMode::kP2},          {"mask_p1", SelectorMode::kMaskP1},
    {"mask_p2", SelectorMode::kMaskP2}};
constexpr std::pair<std::string_view, ClosureMethod> kClosures[] = {
    {"mask", ClosureMethod::kMask}, {"selector", ClosureMethod::kSelector}};

struct Key {
  std::string_view name;
  std::function<void(ExperimentConfig&, std::string_view, int)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

#define WW_LENGTH(key, member, check)                                              \
  Key {                                                                            \
    key, [](ExperimentConfig& c, std::string_view v, int l) {                      \
      c.geometry.member = check(key, v, l);                                        \
    },                                                                             \
        [](const ExperimentConfig& c) { return format_double(c.geometry.member); } \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      WW_LENGTH("wavelength_m", wavelength, positive),
      WW_LENGTH("focal_length_m", focal_length, positive),
      WW_LENGTH("pinhole_diameter_m", pinhole_diameter, positive),
      WW_LENGTH("pinhole_separation_m", pinhole_separation, positive),
      WW_LENGTH("selector_z_m", selector_z, positive),
      WW_LENGTH("selector_diameter_m", selector_diameter, positive),
      WW_LENGTH("as_z_m", as_z, positive),
      WW_LENGTH("as_diameter_m", as_diameter, positive),
      WW_LENGTH("sigma1_z_m", sigma1_z, positive),
      WW_LENGTH("sigma2_z_m", sigma2_z, positive),
      WW_LENGTH("wire_thickness_m", wire_thickness, positive),
      {"wire_positions_m",
       [](ExperimentConfig& c, std::string_view v, int l) {
         if (v == kAutoDarkFringe) {
           c.geometry.wire_positions.reset();
           return;
         }
         std::vector<double> xs;
         if (!v.empty()) {
           std::size_t start = 0;
           while (true) {
             const auto comma = v.find(',', start);
             xs.push_back(parse_real("wire_positions_m",
                                     trim(v.substr(start, comma - start)), l));
             if (comma == std::string_view::npos) break;
             start = comma + 1;
           }
         }
         c.geometry.wire_positions = std::move(xs);
       },
       [](const ExperimentConfig& c) {
         return c.geometry.wire_positions ? join(*c.geometry.wire_positions)
                                          : std::string(kAutoDarkFringe);
       }},
      {"grid_n",
       [](ExperimentConfig& c, std::string_view v, int l) {
         const int n = parse_int<int>("grid_n", v, l);
         if (n < 8) throw ConfigError("grid_n must be >= 8, got " + std::to_string(n), l);
         c.numerics.grid_n = n;
       },
       [](const ExperimentConfig& c) { return std::to_string(c.numerics.grid_n); }},
      {"grid_dx_m",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.numerics.grid_dx = positive("grid_dx_m", v, l);
       },
       [](const ExperimentConfig& c) { return format_double(c.numerics.grid_dx); }},
      {"dimension_mode",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.numerics.dimension = parse_enum("dimension_mode", v, l, kDimensions);
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.numerics.dimension)); }},
      {"guard_band_fraction",
       [](ExperimentConfig& c, std::string_view v, int l) {
         const double f = parse_real("guard_band_fraction", v, l);
         if (f < 0.0 || f >= 1.0) throw ConfigError("guard_band_fraction must lie in [0, 1)", l);
         c.numerics.guard_fraction = f;
       },
       [](const ExperimentConfig& c) { return format_double(c.numerics.guard_fraction); }},
      {"band_floor",
       [](ExperimentConfig& c, std::string_view v, int l) {
         const double f = parse_real("band_floor", v, l);
         if (f < 0.0 || f > 1.0) throw ConfigError("band_floor must lie in [0, 1]", l);
         c.numerics.band_floor = f;
       },
       [](const ExperimentConfig& c) { return format_double(c.numerics.band_floor); }},
      {"selector_mode",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.numerics.selector_mode = parse_enum("selector_mode", v, l, kSelectors);
       },
       [](const ExperimentConfig& c) {
         return std::string(to_string(c.numerics.selector_mode));
       }},
      {"closure_method",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.numerics.closure = parse_enum("closure_method", v, l, kClosures);
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.numerics.closure)); }},
      {"dark_fringe_side",
       [](ExperimentConfig& c, std::string_view v, int l) {
         const int s = parse_int<int>("dark_fringe_side", v, l);
         if (s != 1 && s != -1) throw ConfigError("dark_fringe_side must be 1 or -1", l);
         c.numerics.dark_fringe_side = s;
       },
       [](const ExperimentConfig& c) { return std::to_string(c.numerics.dark_fringe_side); }},
      {"seed",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.seed = parse_int<std::uint64_t>("seed", v, l);
       },
       [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      {"photons_n",
       [](ExperimentConfig& c, std::string_view v, int l) {
         const auto n = parse_int<std::int64_t>("photons_n", v, l);
         if (n < 1) throw ConfigError("photons_n must be >= 1", l);
         c.photons_n = n;
       },
       [](const ExperimentConfig& c) { return std::to_string(c.photons_n); }},
      {"output_dir",
       [](ExperimentConfig& c, std::string_view v, int l) {
         if (v.empty()) throw ConfigError("output_dir must not be empty", l);
         c.output_dir = std::string(v);
       },
       [](const ExperimentConfig& c) { return c.output_dir; }},
      {"preview_gamma",
       [](ExperimentConfig& c, std::string_view v, int l) {
         c.preview_gamma = positive("preview_gamma", v, l);
       },
       [](const ExperimentConfig& c) { return format_double(c.preview_gamma); }},
  };
  return table;
}

#undef WW_LENGTH

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, p);
}

void ExperimentConfig::validate() const {
  try {
    geometry.validate();
    numerics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value', got '" + std::string(line) + "'", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const Key* k = nullptr;
    for (const auto& candidate : keys())
      if (candidate.name == key) k = &candidate;
    if (!k) throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
    if (auto it = seen.find(key); it != seen.end())
      throw ConfigError("duplicate key '" + std::string(key) + "' (first set on line " +
                            std::to_string(it->second) + ")",
                        line_no);
    seen.emplace(std::string(key), line_no);
    k->set(c, value, line_no);
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    // Cross-key violations are attributed to the last line that set any key.
    int last = 0;
    for (const auto& [key, l] : seen) last = std::max(last, l);
    throw ConfigError(e.what(), last);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& k : keys()) {
    out += k.name;
    out += " = ";
    out += k.get(config);
    out += '\n';
  }
  return out;
}

}  // namespace whichway
