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

#ifndef AUGTAG_KERNELS_H_
#define AUGTAG_KERNELS_H_

#include <span>

namespace augtag {
namespace kernels {

// Dense kernels over row-major matrices W[rows x cols].
//
// The serial versions are the reference. The OpenMP versions split work
// across output elements only, so every output is accumulated in the same
// order as the reference and the results are bit-identical.

namespace serial {

// y = W x + b
void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows, int cols);

// x_grad = W^T g
void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols);

// dW += g x^T
void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols);

}  // namespace serial

namespace parallel {

void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows, int cols);

void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols);

void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols);

}  // namespace parallel

// Matrices with fewer elements than this stay on the serial path.
inline constexpr long kParallelMinElements = 1L << 16;

// Dispatch: parallel for large matrices when more than one thread is
// available and we are not already inside a parallel region.
void Affine(std::span<const double> weights, std::span<const double> bias,
            std::span<const double> x, std::span<double> y, int rows, int cols);
void AffineTransposed(std::span<const double> weights,
                      std::span<const double> g, std::span<double> x_grad,
                      int rows, int cols);
void AccumulateOuter(std::span<double> weight_grad, std::span<const double> g,
                     std::span<const double> x, int rows, int cols);

// Number of OpenMP threads used by parallel regions (1 without OpenMP).
int MaxThreads();
void SetThreads(int threads);

}  // namespace kernels
}  // namespace augtag

#endif  // AUGTAG_KERNELS_H_
