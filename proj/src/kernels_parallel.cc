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

// OpenMP backend. Without OpenMP every entry point forwards to the serial
// reference so callers never need to special-case the build.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "whichway/kernels.h"

#ifdef WHICHWAY_HAVE_OPENMP
#include <omp.h>
#endif

namespace whichway::kernels {

bool parallel_available() {
#ifdef WHICHWAY_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef WHICHWAY_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

#ifdef WHICHWAY_HAVE_OPENMP

namespace {

using Index = std::ptrdiff_t;

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

template <typename BlockFn>
double blocked_reduce(std::size_t n, BlockFn&& block_sum) {
  const Index blocks = static_cast<Index>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t end = std::min(n, begin + kReduceBlock);
    partial[static_cast<std::size_t>(b)] = block_sum(begin, end);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

void multiply(std::span<Complex> a, std::span<const Complex> b) {
  check_sizes(a.size(), b.size());
  const Index n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) a[i] *= b[i];
}

void multiply(std::span<Complex> a, std::span<const double> t) {
  check_sizes(a.size(), t.size());
  const Index n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) a[i] *= t[i];
}

void scale(std::span<Complex> a, Complex factor) {
  const Index n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) a[i] *= factor;
}

void modulus_squared(std::span<const Complex> a, std::span<double> out) {
  check_sizes(a.size(), out.size());
  const Index n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = std::norm(a[i]);
}

double sum(std::span<const double> v) {
  return blocked_reduce(v.size(), [&](std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += v[i];
    return s;
  });
}

double sum_norm(std::span<const Complex> a) {
  return blocked_reduce(a.size(), [&](std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += std::norm(a[i]);
    return s;
  });
}

void for_each_row(int rows, const RowFn& fn) {
#pragma omp parallel for schedule(dynamic, 16)
  for (int j = 0; j < rows; ++j) fn(j);
}

#else

void multiply(std::span<Complex> a, std::span<const Complex> b) {
  serial::multiply(a, b);
}
void multiply(std::span<Complex> a, std::span<const double> t) {
  serial::multiply(a, t);
}
void scale(std::span<Complex> a, Complex factor) { serial::scale(a, factor); }
void modulus_squared(std::span<const Complex> a, std::span<double> out) {
  serial::modulus_squared(a, out);
}
double sum(std::span<const double> v) { return serial::sum(v); }
double sum_norm(std::span<const Complex> a) { return serial::sum_norm(a); }
void for_each_row(int rows, const RowFn& fn) { serial::for_each_row(rows, fn); }

#endif

}  // namespace parallel
}  // namespace whichway::kernels
