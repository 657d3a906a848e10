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

#include "whichway/propagation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "whichway/fft.h"

namespace whichway {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phase-sampling criterion for one bin. Returns the admitted flag and the
// longitudinal frequency w = sqrt(1/lambda^2 - rho^2).
struct BinTest {
  bool admitted;
  double w;
};

BinTest test_bin(double fx, double fy, double inv_lambda_sq, double kx_step,
                 double ky_step) {
  const double w_sq = inv_lambda_sq - fx * fx - fy * fy;
  if (w_sq <= 0.0) return {false, 0.0};
  const double w = std::sqrt(w_sq);
  // Phase step between neighbouring bins: 2 pi |dz| df |f| / w <= pi.
  const bool ok = kx_step * std::abs(fx) <= w && ky_step * std::abs(fy) <= w;
  return {ok, w};
}

double axis_band_limit(double inv_lambda, double df, double dz) {
  const double s = 2.0 * df * std::abs(dz);
  return inv_lambda / std::sqrt(s * s + 1.0);
}

}  // namespace

std::vector<std::string> SamplingDiagnostics::warnings() const {
  std::vector<std::string> out;
  if (has(kWarnBandLimited)) {
    std::ostringstream s;
    s << "band-limited: " << admitted_band_fraction << " of the spectrum admitted";
    out.push_back(s.str());
  }
  if (has(kWarnExcursionTooLarge))
    out.push_back("required beam excursion exceeds the supported half-width");
  if (has(kWarnEvanescentOnly)) out.push_back("no propagating frequencies");
  return out;
}

SamplingDiagnostics check_sampling(const GridSpec& grid, double dz,
                                   double required_halfwidth) {
  grid.validate();
  if (!std::isfinite(dz)) throw std::invalid_argument("check_sampling: dz not finite");
  SamplingDiagnostics d;
  d.dz = dz;
  const double inv_lambda = 1.0 / grid.wavelength;
  const double fx_nyq = (grid.nx / 2) / (grid.nx * grid.dx);
  const double fy_nyq = grid.is_1d() ? 0.0 : (grid.ny / 2) / (grid.ny * grid.dy);
  if (dz == 0.0) {
    d.max_beam_halfwidth_supported = std::numeric_limits<double>::infinity();
    d.admitted_band_fraction = 1.0;
    d.band_limit_fx = std::min(fx_nyq, inv_lambda);
    d.band_limit_fy = std::min(fy_nyq, inv_lambda);
    return d;
  }

  const double dfx = 1.0 / (grid.nx * grid.dx);
  const double dfy = grid.is_1d() ? 0.0 : 1.0 / (grid.ny * grid.dy);
  d.band_limit_fx = std::min(fx_nyq, axis_band_limit(inv_lambda, dfx, dz));
  d.band_limit_fy =
      grid.is_1d() ? 0.0 : std::min(fy_nyq, axis_band_limit(inv_lambda, dfy, dz));

  const auto fxs = fft::frequencies(grid.nx, grid.dx);
  const auto fys = grid.is_1d() ? std::vector<double>{0.0}
                                : fft::frequencies(grid.ny, grid.dy);
  const double kx_step = 2.0 * std::abs(dz) * dfx;
  const double ky_step = 2.0 * std::abs(dz) * dfy;
  const double inv_lambda_sq = inv_lambda * inv_lambda;
  std::size_t admitted = 0;
  for (double fy : fys)
    for (double fx : fxs)
      admitted += test_bin(fx, fy, inv_lambda_sq, kx_step, ky_step).admitted;
  d.admitted_band_fraction =
      static_cast<double>(admitted) / static_cast<double>(grid.size());

  double f_eff = d.band_limit_fx;
  if (!grid.is_1d()) f_eff = std::min(f_eff, d.band_limit_fy);
  const double sin_theta = std::min(1.0, grid.wavelength * f_eff);
  d.max_beam_halfwidth_supported =
      sin_theta >= 1.0 ? std::numeric_limits<double>::infinity()
                       : std::abs(dz) * sin_theta / std::sqrt(1.0 - sin_theta * sin_theta);

  if (admitted == 0) d.flags |= kWarnEvanescentOnly;
  if (admitted < grid.size()) d.flags |= kWarnBandLimited;
  if (required_halfwidth > d.max_beam_halfwidth_supported)
    d.flags |= kWarnExcursionTooLarge;
  return d;
}

PropagationPlan make_plan(const GridSpec& grid, double dz, kernels::Backend backend) {
  PropagationPlan plan;
  plan.grid = grid;
  plan.dz = dz;
  plan.diagnostics = check_sampling(grid, dz);
  plan.transfer.assign(grid.size(), Complex{});
  plan.band_mask.assign(grid.size(), 0);

  const auto fxs = fft::frequencies(grid.nx, grid.dx);
  const auto fys = grid.is_1d() ? std::vector<double>{0.0}
                                : fft::frequencies(grid.ny, grid.dy);
  const double inv_lambda = 1.0 / grid.wavelength;
  const double inv_lambda_sq = inv_lambda * inv_lambda;
  const double dfx = 1.0 / (grid.nx * grid.dx);
  const double dfy = grid.is_1d() ? 0.0 : 1.0 / (grid.ny * grid.dy);
  const double kx_step = 2.0 * std::abs(dz) * dfx;
  const double ky_step = 2.0 * std::abs(dz) * dfy;
  // Global phase 2 pi dz / lambda reduced modulo 2 pi before it meets the
  // small per-bin correction, which keeps long hops accurate.
  const double cycles = dz * inv_lambda;
  const double global_phase = kTwoPi * (cycles - std::floor(cycles));
  const int nx = grid.nx;

  kernels::for_each_row(
      grid.ny,
      [&](int j) {
        const double fy = fys[j];
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
          const double fx = fxs[i];
          const BinTest t = test_bin(fx, fy, inv_lambda_sq, kx_step, ky_step);
          if (!t.admitted) continue;
          const double rho_sq = fx * fx + fy * fy;
          // w - 1/lambda without cancellation.
          const double dw = -rho_sq / (inv_lambda + t.w);
          const double phase = kTwoPi * dz * dw + global_phase;
          plan.transfer[row + i] = std::polar(1.0, phase);
          plan.band_mask[row + i] = 1;
        }
      },
      backend);
  return plan;
}

PlanCache::PlanCache(std::size_t byte_budget) : budget_(byte_budget) {}

std::shared_ptr<const PropagationPlan> PlanCache::get(const GridSpec& grid,
                                                      double dz,
                                                      kernels::Backend backend) {
  const Key key{grid.nx, grid.ny, grid.dx, grid.is_1d() ? 0.0 : grid.dy,
                grid.wavelength, dz};
  {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->key == key) {
        entries_.splice(entries_.begin(), entries_, it);
        return entries_.front().plan;
      }
    }
  }
  // Built outside the lock; a concurrent duplicate build yields an identical
  // plan and the first insert wins.
  auto plan = std::make_shared<const PropagationPlan>(make_plan(grid, dz, backend));
  const std::size_t bytes = plan->transfer.size() * sizeof(Complex) +
                            plan->band_mask.size();
  std::lock_guard lock(mutex_);
  for (const auto& e : entries_)
    if (e.key == key) return e.plan;
  entries_.push_front(Entry{key, plan, bytes});
  used_ += bytes;
  while (used_ > budget_ && entries_.size() > 1) {
    used_ -= entries_.back().bytes;
    entries_.pop_back();
  }
  return plan;
}

std::size_t PlanCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void PlanCache::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
  used_ = 0;
}

PlanCache& global_plan_cache() {
  static PlanCache cache;
  return cache;
}

std::vector<double> guard_profile(int n, double pitch, double fraction) {
  std::vector<double> g(static_cast<std::size_t>(n), 1.0);
  if (fraction <= 0.0) return g;
  if (fraction >= 1.0) throw std::invalid_argument("guard fraction must be < 1");
  const double half = 0.5 * n * pitch;
  const double width = fraction * half;
  const double interior = half - width;
  for (int i = 0; i < n; ++i) {
    const double r = std::abs(static_cast<double>(i - n / 2) * pitch);
    if (r <= interior) continue;
    const double u = (r - interior) / width;
    g[i] = std::exp(-16.0 * u * u * u * u);
  }
  return g;
}

Field apply_guard_band(Field field, double fraction, kernels::Backend backend) {
  if (fraction <= 0.0) return field;
  const GridSpec& g = field.grid;
  const auto gx = guard_profile(g.nx, g.dx, fraction);
  const auto gy = g.is_1d() ? std::vector<double>{1.0}
                            : guard_profile(g.ny, g.dy, fraction);
  Complex* data = field.samples.data();
  kernels::for_each_row(
      g.ny,
      [&](int j) {
        Complex* row = data + static_cast<std::size_t>(j) * g.nx;
        const double ty = gy[j];
        for (int i = 0; i < g.nx; ++i) {
          const double t = gx[i] * ty;
          if (t != 1.0) row[i] *= t;
        }
      },
      backend);
  return field;
}

Propagator::Propagator(PropagationOptions options, PlanCache* cache)
    : options_(options), cache_(cache) {
  if (options_.guard_fraction < 0.0 || options_.guard_fraction >= 1.0)
    throw std::invalid_argument("guard fraction must lie in [0, 1)");
  if (cache_ == nullptr) throw std::invalid_argument("plan cache must not be null");
}

Propagated Propagator::run(Field field, double dz) const {
  field.grid.validate();
  if (field.samples.size() != field.grid.size())
    throw std::invalid_argument("propagate: sample count does not match grid");
  if (!std::isfinite(dz)) throw std::invalid_argument("propagate: dz not finite");
  const auto backend = options_.backend;
  const double area = field.grid.cell_area();

  Propagated out;
  out.losses.input_power = kernels::sum_norm(field.samples, backend) * area;
  if (dz == 0.0) {
    out.diagnostics = check_sampling(field.grid, 0.0);
    out.field = std::move(field);
    return out;
  }

  auto plan = cache_->get(field.grid, dz, backend);
  out.diagnostics = plan->diagnostics;
  if (plan->diagnostics.admitted_band_fraction < options_.band_floor) {
    std::ostringstream s;
    s << "propagation over " << dz << " m admits only "
      << plan->diagnostics.admitted_band_fraction
      << " of the spectrum (floor " << options_.band_floor << ")";
    throw SamplingRefusal(s.str(), plan->diagnostics);
  }

  if (options_.guard_fraction > 0.0) {
    field = apply_guard_band(std::move(field), options_.guard_fraction, backend);
    const double after = kernels::sum_norm(field.samples, backend) * area;
    out.losses.guard_absorbed = out.losses.input_power - after;
  }

  const int nx = field.grid.nx;
  const int ny = field.grid.ny;
  const double n = static_cast<double>(field.grid.size());
  fft::transform(field.samples, nx, ny, fft::Direction::kForward, backend);
  const double spectrum_before = kernels::sum_norm(field.samples, backend);
  kernels::multiply(field.samples, std::span<const Complex>(plan->transfer), backend);
  const double spectrum_after = kernels::sum_norm(field.samples, backend);
  out.losses.band_rejected = (spectrum_before - spectrum_after) / n * area;
  fft::transform(field.samples, nx, ny, fft::Direction::kBackward, backend);
  kernels::scale(field.samples, Complex{1.0 / n, 0.0}, backend);
  field.z += dz;
  out.field = std::move(field);
  return out;
}

Field propagate(Field field, double dz) {
  static const Propagator default_propagator{};
  return default_propagator.propagate(std::move(field), dz);
}

}  // namespace whichway
