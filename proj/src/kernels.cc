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

#include "whichway/kernels.h"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace whichway::kernels {

namespace {

std::size_t block_count(std::size_t n) {
  return (n + kReduceBlock - 1) / kReduceBlock;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

namespace serial {

void multiply(std::span<Complex> a, std::span<const Complex> b) {
  check_sizes(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

void multiply(std::span<Complex> a, std::span<const double> t) {
  check_sizes(a.size(), t.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= t[i];
}

void scale(std::span<Complex> a, Complex factor) {
  for (auto& v : a) v *= factor;
}

void modulus_squared(std::span<const Complex> a, std::span<double> out) {
  check_sizes(a.size(), out.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::norm(a[i]);
}

double sum(std::span<const double> v) {
  const std::size_t blocks = block_count(v.size());
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t end = std::min(v.size(), (b + 1) * kReduceBlock);
    double partial = 0.0;
    for (std::size_t i = b * kReduceBlock; i < end; ++i) partial += v[i];
    total += partial;
  }
  return total;
}

double sum_norm(std::span<const Complex> a) {
  const std::size_t blocks = block_count(a.size());
  double total = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t end = std::min(a.size(), (b + 1) * kReduceBlock);
    double partial = 0.0;
    for (std::size_t i = b * kReduceBlock; i < end; ++i)
      partial += std::norm(a[i]);
    total += partial;
  }
  return total;
}

void for_each_row(int rows, const RowFn& fn) {
  for (int j = 0; j < rows; ++j) fn(j);
}

}  // namespace serial

Backend default_backend() {
  return parallel_available() ? Backend::kParallel : Backend::kSerial;
}

void multiply(std::span<Complex> a, std::span<const Complex> b, Backend be) {
  be == Backend::kParallel ? parallel::multiply(a, b) : serial::multiply(a, b);
}

void multiply(std::span<Complex> a, std::span<const double> t, Backend be) {
  be == Backend::kParallel ? parallel::multiply(a, t) : serial::multiply(a, t);
}

void scale(std::span<Complex> a, Complex factor, Backend be) {
  be == Backend::kParallel ? parallel::scale(a, factor)
                           : serial::scale(a, factor);
}

void modulus_squared(std::span<const Complex> a, std::span<double> out,
                     Backend be) {
  be == Backend::kParallel ? parallel::modulus_squared(a, out)
                           : serial::modulus_squared(a, out);
}

double sum(std::span<const double> v, Backend be) {
  return be == Backend::kParallel ? parallel::sum(v) : serial::sum(v);
}

double sum_norm(std::span<const Complex> a, Backend be) {
  return be == Backend::kParallel ? parallel::sum_norm(a) : serial::sum_norm(a);
}

void for_each_row(int rows, const RowFn& fn, Backend be) {
  be == Backend::kParallel ? parallel::for_each_row(rows, fn)
                           : serial::for_each_row(rows, fn);
}

}  // namespace whichway::kernels
