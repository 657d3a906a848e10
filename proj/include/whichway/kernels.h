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

#ifndef WHICHWAY_KERNELS_H_
#define WHICHWAY_KERNELS_H_

// Data-parallel inner loops used by every stage of the pipeline.
//
// Each kernel exists twice: a plain loop in `serial` that serves as the
// reference implementation, and an OpenMP version in `parallel`. The dispatch
// functions at the bottom pick one by Backend. Elementwise kernels produce
// bit-identical output on both backends. Reductions use a fixed block
// partition (kReduceBlock elements) whose partial sums are combined in block
// order, so they are bit-identical across backends and thread counts too.

#include <cstddef>
#include <functional>
#include <span>

#include "whichway/field.h"

namespace whichway::kernels {

enum class Backend { kSerial, kParallel };

inline constexpr std::size_t kReduceBlock = 4096;

/// kParallel when the library was built with OpenMP, otherwise kSerial.
Backend default_backend();
bool parallel_available();
int max_threads();

/// Callback invoked once per grid row (row index j).
using RowFn = std::function<void(int)>;

namespace serial {
void multiply(std::span<Complex> a, std::span<const Complex> b);
void multiply(std::span<Complex> a, std::span<const double> t);
void scale(std::span<Complex> a, Complex factor);
void modulus_squared(std::span<const Complex> a, std::span<double> out);
double sum(std::span<const double> v);
double sum_norm(std::span<const Complex> a);
void for_each_row(int rows, const RowFn& fn);
}  // namespace serial

namespace parallel {
void multiply(std::span<Complex> a, std::span<const Complex> b);
void multiply(std::span<Complex> a, std::span<const double> t);
void scale(std::span<Complex> a, Complex factor);
void modulus_squared(std::span<const Complex> a, std::span<double> out);
double sum(std::span<const double> v);
double sum_norm(std::span<const Complex> a);
void for_each_row(int rows, const RowFn& fn);
}  // namespace parallel

void multiply(std::span<Complex> a, std::span<const Complex> b, Backend be);
void multiply(std::span<Complex> a, std::span<const double> t, Backend be);
void scale(std::span<Complex> a, Complex factor, Backend be);
void modulus_squared(std::span<const Complex> a, std::span<double> out,
                     Backend be);
double sum(std::span<const double> v, Backend be);
double sum_norm(std::span<const Complex> a, Backend be);
void for_each_row(int rows, const RowFn& fn, Backend be);

}  // namespace whichway::kernels

#endif  // WHICHWAY_KERNELS_H_
