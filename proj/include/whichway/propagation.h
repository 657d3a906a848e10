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

#ifndef WHICHWAY_PROPAGATION_H_
#define WHICHWAY_PROPAGATION_H_

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "whichway/errors.h"
#include "whichway/field.h"
#include "whichway/kernels.h"

namespace whichway {

enum SamplingWarning : unsigned {
  kWarnBandLimited = 1u << 0,       // some propagating frequencies are masked
  kWarnExcursionTooLarge = 1u << 1, // requested beam excursion is unsupported
  kWarnEvanescentOnly = 1u << 2,    // nothing propagates at all
};

struct SamplingDiagnostics {
  double dz = 0.0;
  /// Largest transverse displacement a ray can reach over |dz| inside the
  /// admitted band (meters); infinite for dz == 0.
  double max_beam_halfwidth_supported = 0.0;
  /// Admitted DFT bins divided by all bins, in [0, 1].
  double admitted_band_fraction = 1.0;
  /// On-axis band edge (cycles/m) after the phase-sampling criterion.
  double band_limit_fx = 0.0;
  double band_limit_fy = 0.0;
  unsigned flags = 0;

  bool has(SamplingWarning w) const { return (flags & w) != 0; }
  std::vector<std::string> warnings() const;
};

/// Admitted band and alias-safety of one free-space hop.
///
/// A bin is admitted when it propagates (rho < 1/lambda) and the transfer
/// function phase changes by at most pi between neighbouring bins along each
/// axis. `required_halfwidth` is the transverse excursion the caller needs
/// (e.g. the off-axis beam position at the next plane); exceeding the
/// supported excursion sets kWarnExcursionTooLarge.
SamplingDiagnostics check_sampling(const GridSpec& grid, double dz,
                                   double required_halfwidth = 0.0);

/// Precomputed band-limited angular-spectrum transfer function in FFT order.
/// Excluded bins hold 0 in `transfer` and 0 in `band_mask`.
struct PropagationPlan {
  GridSpec grid;
  double dz = 0.0;
  std::vector<Complex> transfer;
  std::vector<std::uint8_t> band_mask;
  SamplingDiagnostics diagnostics;
};

PropagationPlan make_plan(const GridSpec& grid, double dz,
                          kernels::Backend backend = kernels::default_backend());

/// Thread-safe LRU cache of plans keyed by the exact (grid, dz) values.
class PlanCache {
 public:
  explicit PlanCache(std::size_t byte_budget = std::size_t{1} << 31);

  std::shared_ptr<const PropagationPlan> get(const GridSpec& grid, double dz,
                                             kernels::Backend backend);
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<int, int, double, double, double, double>;
  struct Entry {
    Key key;
    std::shared_ptr<const PropagationPlan> plan;
    std::size_t bytes;
  };

  std::size_t budget_;
  std::size_t used_ = 0;
  mutable std::mutex mutex_;
  std::list<Entry> entries_;  // most recently used first
};

PlanCache& global_plan_cache();

/// Amplitude transmittance of the absorbing border along one axis: 1 over
/// the interior, super-Gaussian roll-off to exp(-16) at the window edge over
/// the outer `fraction` of each half-window.
std::vector<double> guard_profile(int n, double pitch, double fraction);

/// Multiplies the field by the separable guard transmittance.
Field apply_guard_band(Field field, double fraction,
                       kernels::Backend backend = kernels::default_backend());

struct PropagationOptions {
  double guard_fraction = 0.10;  // 0 disables the guard band
  double band_floor = 1e-3;      // minimum admitted_band_fraction
  kernels::Backend backend = kernels::default_backend();
};

/// Powers are in the field's arbitrary units (already multiplied by the cell
/// area).
struct PropagationLosses {
  double input_power = 0.0;
  double guard_absorbed = 0.0;
  double band_rejected = 0.0;
};

/// Thrown when a hop admits less of the spectrum than the configured floor.
class SamplingRefusal : public NumericalError {
 public:
  SamplingRefusal(const std::string& what, SamplingDiagnostics diagnostics)
      : NumericalError(what), diagnostics_(diagnostics) {}
  const SamplingDiagnostics& diagnostics() const { return diagnostics_; }

 private:
  SamplingDiagnostics diagnostics_;
};

struct Propagated {
  Field field;
  PropagationLosses losses;
  SamplingDiagnostics diagnostics;
};

/// Band-limited angular-spectrum propagator (exact scalar transfer function,
/// evanescent bins zeroed, optional absorbing guard band).
class Propagator {
 public:
  explicit Propagator(PropagationOptions options = {},
                      PlanCache* cache = &global_plan_cache());

  /// Field at z + dz with the loss bookkeeping of this hop. dz may be
  /// negative. dz == 0 returns the input untouched.
  Propagated run(Field field, double dz) const;
  Field propagate(Field field, double dz) const { return run(std::move(field), dz).field; }

  const PropagationOptions& options() const { return options_; }

 private:
  PropagationOptions options_;
  PlanCache* cache_;
};

/// Propagation with default options and the process-wide plan cache.
Field propagate(Field field, double dz);

}  // namespace whichway

#endif  // WHICHWAY_PROPAGATION_H_
