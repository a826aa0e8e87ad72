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

#ifndef AUGTAG_NNCORE_H_
#define AUGTAG_NNCORE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace augtag {

enum class Activation : uint8_t { kTanh = 0, kRelu = 1 };

Activation ParseActivation(std::string_view name);
std::string_view ActivationName(Activation activation);

// One affine layer; weights are row-major [out x in].
struct LayerParams {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  bool operator==(const LayerParams &) const = default;
};

struct Gradients {
  std::vector<LayerParams> layers;

  void Clear();
  void Add(const Gradients &other);
  void Scale(double factor);
  bool AllFinite() const;
};

// Intermediates of a forward pass, consumed by DenseNet::Backward.
struct ForwardCache {
  // activations[0] is the input, activations.back() the (linear) output.
  std::vector<std::vector<double>> activations;
  bool valid = false;
};

// Fully connected net: hidden layers use `activation`, the output layer is
// linear. Layer sizes are {input, hidden..., output}.
class DenseNet {
 public:
  DenseNet() = default;

  // Xavier-scaled normal initialization, zero biases.
  DenseNet(std::vector<int> sizes, Activation activation, uint64_t seed);

  static DenseNet Zeros(std::vector<int> sizes, Activation activation);
  static DenseNet FromLayers(std::vector<LayerParams> layers,
                             Activation activation);

  int input_size() const;
  int output_size() const;
  std::vector<int> sizes() const;
  Activation activation() const { return activation_; }
  const std::vector<LayerParams> &layers() const { return layers_; }
  std::vector<LayerParams> &mutable_layers() { return layers_; }
  bool empty() const { return layers_.empty(); }

  std::vector<double> Forward(std::span<const double> input) const;
  std::vector<double> Forward(std::span<const double> input,
                              ForwardCache *cache) const;

  // Gradients of a scalar loss given dLoss/dOutput at the cached pass.
  // Throws std::logic_error if `cache` holds no forward pass.
  Gradients Backward(const ForwardCache &cache,
                     std::span<const double> output_grad) const;

  // Gradient with respect to the input, for callers that train the inputs.
  std::vector<double> InputGradient(const ForwardCache &cache,
                                    std::span<const double> output_grad) const;

  Gradients ZeroGradients() const;

  // Flat view over all parameters in layer order (weights, then bias).
  size_t num_parameters() const;
  double &Parameter(size_t k);
  double Parameter(size_t k) const;

  bool AllFinite() const;

  bool operator==(const DenseNet &) const = default;

 private:
  std::vector<LayerParams> layers_;
  Activation activation_ = Activation::kTanh;
};

enum class OptimizerKind : uint8_t { kSgd = 0, kAdam = 1 };

OptimizerKind ParseOptimizerKind(std::string_view name);
std::string_view OptimizerKindName(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  int batch_size = 16;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

// Applies updates to a DenseNet. Adam moments are created lazily on the
// first step and tied to the net's shape.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  // Throws NonFiniteError on NaN/Inf gradients or if the update leaves a
  // non-finite parameter.
  void Step(DenseNet &net, const Gradients &grads);

  const OptimizerConfig &config() const { return config_; }
  int64_t steps() const { return steps_; }

 private:
  OptimizerConfig config_;
  int64_t steps_ = 0;
  Gradients first_moment_;
  Gradients second_moment_;
};

// Numerically stable softmax.
std::vector<double> Softmax(std::span<const double> logits);

// Cross-entropy of softmax(logits) against `target`; writes dLoss/dlogits.
double SoftmaxCrossEntropy(std::span<const double> logits, int target,
                           std::span<double> logits_grad);

// Largest relative error between `analytic` and central differences of
// `loss` over every parameter of `net`. Relative error is
// |a - f| / max(|a|, |f|, floor); the floor keeps round-off on vanishing
// gradients from dominating.
double GradientCheck(DenseNet &net, const std::function<double()> &loss,
                     const Gradients &analytic, double step = 1e-5,
                     double floor = 1e-6);

}  // namespace augtag

#endif  // AUGTAG_NNCORE_H_
