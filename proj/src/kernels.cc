// Copyright 2026 The Augtag Authors.
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

#include "augtag/kernels.h"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace augtag {
namespace kernels {

namespace serial {

void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows,
            int cols) {
  for (int r = 0; r < rows; ++r) {
    const double *w = weights.data() + static_cast<long>(r) * cols;
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) sum += w[c] * x[c];
    y[r] = sum + bias[r];
  }
}

void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols) {
  std::fill(x_grad.begin(), x_grad.begin() + cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    const double *w = weights.data() + static_cast<long>(r) * cols;
    const double gr = g[r];
    for (int c = 0; c < cols; ++c) x_grad[c] += w[c] * gr;
  }
}

void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    double *w = weight_grad.data() + static_cast<long>(r) * cols;
    const double gr = g[r];
    for (int c = 0; c < cols; ++c) w[c] += gr * x[c];
  }
}

}  // namespace serial

namespace parallel {

void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows,
            int cols) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    const double *w = weights.data() + static_cast<long>(r) * cols;
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) sum += w[c] * x[c];
    y[r] = sum + bias[r];
  }
}

void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols) {
  // Column-parallel; rows are still visited in increasing order per column.
#pragma omp parallel for schedule(static)
  for (int c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) {
      sum += weights[static_cast<long>(r) * cols + c] * g[r];
    }
    x_grad[c] = sum;
  }
}

void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    double *w = weight_grad.data() + static_cast<long>(r) * cols;
    const double gr = g[r];
    for (int c = 0; c < cols; ++c) w[c] += gr * x[c];
  }
}

}  // namespace parallel

namespace {

bool UseParallel(int rows, int cols) {
#ifdef _OPENMP
  return static_cast<long>(rows) * cols >= kParallelMinElements &&
         omp_get_max_threads() > 1 && !omp_in_parallel();
#else
  (void)rows;
  (void)cols;
  return false;
#endif
}

}  // namespace

void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows,
            int cols) {
  if (UseParallel(rows, cols)) {
    parallel::Affine(weights, bias, x, y, rows, cols);
  } else {
    serial::Affine(weights, bias, x, y, rows, cols);
  }
}

void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols) {
  if (UseParallel(rows, cols)) {
    parallel::AffineTransposed(weights, g, x_grad, rows, cols);
  } else {
    serial::AffineTransposed(weights, g, x_grad, rows, cols);
  }
}

void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols) {
  if (UseParallel(rows, cols)) {
    parallel::AccumulateOuter(weight_grad, g, x, rows, cols);
  } else {
    serial::AccumulateOuter(weight_grad, g, x, rows, cols);
  }
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void SetThreads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, threads));
#else
  (void)threads;
#endif
}

}  // namespace kernels
}  // namespace augtag
