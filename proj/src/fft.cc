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

#include "whichway/fft.h"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace whichway::fft {

namespace {

using PlanKey = std::tuple<int, int, int, int, int>;

class PlanRegistry {
 public:
  ~PlanRegistry() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::span<Complex> data, int nx, int ny, Direction direction,
                int threads) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    const int align = fftw_alignment_of(reinterpret_cast<double*>(ptr));
    const PlanKey key{nx, ny, direction == Direction::kForward ? 0 : 1,
                      threads, align};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
#ifdef WHICHWAY_HAVE_OPENMP
    static const bool threads_ready = fftw_init_threads() != 0;
    if (threads_ready) fftw_plan_with_nthreads(threads);
#endif
    const int sign = direction == Direction::kForward ? FFTW_FORWARD : FFTW_BACKWARD;
    // ESTIMATE never touches the arrays while planning.
    fftw_plan plan = ny == 1
                         ? fftw_plan_dft_1d(nx, ptr, ptr, sign, FFTW_ESTIMATE)
                         : fftw_plan_dft_2d(ny, nx, ptr, ptr, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("fftw: planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanRegistry& registry() {
  static PlanRegistry r;
  return r;
}

}  // namespace

void transform(std::span<Complex> data, int nx, int ny, Direction direction,
               kernels::Backend backend) {
  if (nx < 1 || ny < 1 ||
      data.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
    throw std::invalid_argument("fft: data size does not match shape");
  const int threads =
      backend == kernels::Backend::kParallel ? kernels::max_threads() : 1;
  fftw_plan plan = registry().get(data, nx, ny, direction, threads);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

std::vector<double> frequencies(int n, double pitch) {
  std::vector<double> f(static_cast<std::size_t>(n));
  const double df = 1.0 / (n * pitch);
  for (int k = 0; k < n; ++k) f[k] = (k < (n + 1) / 2 ? k : k - n) * df;
  return f;
}

}  // namespace whichway::fft
