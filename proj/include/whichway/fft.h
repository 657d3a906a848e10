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

#ifndef WHICHWAY_FFT_H_
#define WHICHWAY_FFT_H_

#include <span>
#include <vector>

#include "whichway/field.h"
#include "whichway/kernels.h"

namespace whichway::fft {

enum class Direction { kForward, kBackward };

/// Unnormalized in-place DFT of row-major nx-by-ny data (1D when ny == 1).
/// Forward uses exp(-i 2 pi k n / N). Plans are created with FFTW_ESTIMATE
/// and cached, so repeated calls with the same shape are deterministic.
/// kSerial runs FFTW single-threaded; kParallel uses the OpenMP threads.
void transform(std::span<Complex> data, int nx, int ny, Direction direction,
               kernels::Backend backend);

/// Spatial frequencies (cycles per meter) of the n DFT bins in FFT order.
std::vector<double> frequencies(int n, double pitch);

}  // namespace whichway::fft

#endif  // WHICHWAY_FFT_H_
