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

#include "augtag/nncore.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "augtag/errors.h"
#include "augtag/kernels.h"

namespace augtag {
namespace {

bool Finite(const std::vector<double> &values) {
  return std::all_of(values.begin(), values.end(),
                     [](double x) { return std::isfinite(x); });
}

void ApplyActivation(Activation activation, std::vector<double> &values) {
  if (activation == Activation::kTanh) {
    for (double &x : values) x = std::tanh(x);
  } else {
    for (double &x : values) x = x > 0.0 ? x : 0.0;
  }
}

// d activation / d pre-activation, expressed through the activation value.
double ActivationDerivative(Activation activation, double value) {
  if (activation == Activation::kTanh) return 1.0 - value * value;
  return value > 0.0 ? 1.0 : 0.0;
}

std::vector<LayerParams> ShapeLayers(const std::vector<int> &sizes) {
  if (sizes.size() < 2) {
    throw ValidationError("a dense net needs at least input and output sizes");
  }
  for (int s : sizes) {
    if (s <= 0) throw ValidationError("layer sizes must be positive");
  }
  std::vector<LayerParams> layers;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    LayerParams layer;
    layer.in = sizes[l];
    layer.out = sizes[l + 1];
    layer.weights.assign(static_cast<size_t>(layer.in) * layer.out, 0.0);
    layer.bias.assign(layer.out, 0.0);
    layers.push_back(std::move(layer));
  }
  return layers;
}

// Runs the layers from `cache.activations[0]`, filling the rest.
void RunLayers(const std::vector<LayerParams> &layers, Activation activation,
               ForwardCache &cache) {
  cache.activations.resize(layers.size() + 1);
  for (size_t l = 0; l < layers.size(); ++l) {
    const LayerParams &layer = layers[l];
    std::vector<double> &out = cache.activations[l + 1];
    out.assign(layer.out, 0.0);
    kernels::Affine(layer.weights, layer.bias, cache.activations[l], out,
                    layer.out, layer.in);
    if (l + 1 < layers.size()) ApplyActivation(activation, out);
  }
  cache.valid = true;
}

}  // namespace

Activation ParseActivation(std::string_view name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw ValidationError("unknown activation '" + std::string(name) + "'");
}

std::string_view ActivationName(Activation activation) {
  return activation == Activation::kTanh ? "tanh" : "relu";
}

void Gradients::Clear() {
  for (auto &layer : layers) {
    std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
}

void Gradients::Add(const Gradients &other) {
  if (other.layers.size() != layers.size()) {
    throw std::invalid_argument("gradient shapes differ");
  }
  for (size_t l = 0; l < layers.size(); ++l) {
    auto &dst = layers[l];
    const auto &src = other.layers[l];
    if (dst.weights.size() != src.weights.size() ||
        dst.bias.size() != src.bias.size()) {
      throw std::invalid_argument("gradient shapes differ");
    }
    for (size_t i = 0; i < dst.weights.size(); ++i) dst.weights[i] += src.weights[i];
    for (size_t i = 0; i < dst.bias.size(); ++i) dst.bias[i] += src.bias[i];
  }
}

void Gradients::Scale(double factor) {
  for (auto &layer : layers) {
    for (double &x : layer.weights) x *= factor;
    for (double &x : layer.bias) x *= factor;
  }
}

bool Gradients::AllFinite() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerParams &l) {
    return Finite(l.weights) && Finite(l.bias);
  });
}

DenseNet::DenseNet(std::vector<int> sizes, Activation activation,
                   uint64_t seed)
    : layers_(ShapeLayers(sizes)), activation_(activation) {
  std::mt19937_64 rng(seed);
  for (auto &layer : layers_) {
    std::normal_distribution<double> normal(
        0.0, std::sqrt(2.0 / static_cast<double>(layer.in + layer.out)));
    for (double &w : layer.weights) w = normal(rng);
  }
}

DenseNet DenseNet::Zeros(std::vector<int> sizes, Activation activation) {
  DenseNet net;
  net.layers_ = ShapeLayers(sizes);
  net.activation_ = activation;
  return net;
}

DenseNet DenseNet::FromLayers(std::vector<LayerParams> layers,
                              Activation activation) {
  if (layers.empty()) throw ValidationError("a dense net needs layers");
  for (size_t l = 0; l < layers.size(); ++l) {
    const auto &layer = layers[l];
    if (layer.in <= 0 || layer.out <= 0 ||
        layer.weights.size() != static_cast<size_t>(layer.in) * layer.out ||
        layer.bias.size() != static_cast<size_t>(layer.out)) {
      throw ValidationError("malformed layer " + std::to_string(l));
    }
    if (l > 0 && layers[l - 1].out != layer.in) {
      throw ValidationError("layer " + std::to_string(l) +
                            " input size does not match previous output");
    }
  }
  DenseNet net;
  net.layers_ = std::move(layers);
  net.activation_ = activation;
  return net;
}

int DenseNet::input_size() const {
  return layers_.empty() ? 0 : layers_.front().in;
}

int DenseNet::output_size() const {
  return layers_.empty() ? 0 : layers_.back().out;
}

std::vector<int> DenseNet::sizes() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(layers_.front().in);
  for (const auto &layer : layers_) out.push_back(layer.out);
  return out;
}

std::vector<double> DenseNet::Forward(std::span<const double> input) const {
  ForwardCache cache;
  return Forward(input, &cache);
}

std::vector<double> DenseNet::Forward(std::span<const double> input,
                                      ForwardCache *cache) const {
  if (layers_.empty()) throw std::logic_error("forward on an empty net");
  if (static_cast<int>(input.size()) != input_size()) {
    throw ValidationError("input has " + std::to_string(input.size()) +
                          " values, net expects " +
                          std::to_string(input_size()));
  }
  cache->activations.resize(1);
  cache->activations[0].assign(input.begin(), input.end());
  RunLayers(layers_, activation_, *cache);
  return cache->activations.back();
}

Gradients DenseNet::ZeroGradients() const {
  Gradients grads;
  grads.layers = layers_;
  grads.Clear();
  return grads;
}

namespace {

// Backpropagates `output_grad` and, when `grads` is non-null, accumulates
// parameter gradients. Returns dLoss/dInput.
std::vector<double> Backpropagate(const std::vector<LayerParams> &layers,
                                  Activation activation,
                                  const ForwardCache &cache,
                                  std::span<const double> output_grad,
                                  Gradients *grads) {
  if (!cache.valid || cache.activations.size() != layers.size() + 1) {
    throw std::logic_error("backward called without a matching forward pass");
  }
  if (static_cast<int>(output_grad.size()) != layers.back().out) {
    throw ValidationError("output gradient size mismatch");
  }
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> input_grad;
  for (size_t l = layers.size(); l-- > 0;) {
    const LayerParams &layer = layers[l];
    if (grads != nullptr) {
      LayerParams &g = grads->layers[l];
      kernels::AccumulateOuter(g.weights, delta, cache.activations[l],
                               layer.out, layer.in);
      for (int r = 0; r < layer.out; ++r) g.bias[r] += delta[r];
    }
    input_grad.assign(layer.in, 0.0);
    kernels::AffineTransposed(layer.weights, delta, input_grad, layer.out,
                              layer.in);
    if (l > 0) {
      const auto &act = cache.activations[l];
      for (int c = 0; c < layer.in; ++c) {
        input_grad[c] *= ActivationDerivative(activation, act[c]);
      }
    }
    delta.swap(input_grad);
  }
  return delta;
}

}  // namespace

Gradients DenseNet::Backward(const ForwardCache &cache,
                             std::span<const double> output_grad) const {
  Gradients grads = ZeroGradients();
  Backpropagate(layers_, activation_, cache, output_grad, &grads);
  return grads;
}

std::vector<double> DenseNet::InputGradient(
    const ForwardCache &cache, std::span<const double> output_grad) const {
  return Backpropagate(layers_, activation_, cache, output_grad, nullptr);
}

size_t DenseNet::num_parameters() const {
  size_t n = 0;
  for (const auto &layer : layers_) n += layer.weights.size() + layer.bias.size();
  return n;
}

double &DenseNet::Parameter(size_t k) {
  for (auto &layer : layers_) {
    if (k < layer.weights.size()) return layer.weights[k];
    k -= layer.weights.size();
    if (k < layer.bias.size()) return layer.bias[k];
    k -= layer.bias.size();
  }
  throw std::out_of_range("parameter index out of range");
}

double DenseNet::Parameter(size_t k) const {
  return const_cast<DenseNet *>(this)->Parameter(k);
}

bool DenseNet::AllFinite() const {
  return std::all_of(layers_.begin(), layers_.end(), [](const LayerParams &l) {
    return Finite(l.weights) && Finite(l.bias);
  });
}

OptimizerKind ParseOptimizerKind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ValidationError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view OptimizerKindName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

void OptimizerConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be positive");
  }
  if (batch_size <= 0) throw ValidationError("batch size must be positive");
  if (kind == OptimizerKind::kAdam &&
      !(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 &&
        epsilon > 0.0)) {
    throw ValidationError("invalid Adam hyperparameters");
  }
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) {
  config_.Validate();
}

void Optimizer::Step(DenseNet &net, const Gradients &grads) {
  auto &layers = net.mutable_layers();
  if (grads.layers.size() != layers.size()) {
    throw std::invalid_argument("gradient shapes differ from the net");
  }
  for (size_t l = 0; l < layers.size(); ++l) {
    if (grads.layers[l].weights.size() != layers[l].weights.size() ||
        grads.layers[l].bias.size() != layers[l].bias.size()) {
      throw std::invalid_argument("gradient shapes differ from the net");
    }
  }
  if (!grads.AllFinite()) {
    throw NonFiniteError("non-finite gradient at optimizer step " +
                         std::to_string(steps_ + 1));
  }
  ++steps_;
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::kSgd) {
    for (size_t l = 0; l < layers.size(); ++l) {
      auto &p = layers[l];
      const auto &g = grads.layers[l];
      for (size_t i = 0; i < p.weights.size(); ++i) p.weights[i] -= lr * g.weights[i];
      for (size_t i = 0; i < p.bias.size(); ++i) p.bias[i] -= lr * g.bias[i];
    }
  } else {
    if (first_moment_.layers.empty()) {
      first_moment_ = net.ZeroGradients();
      second_moment_ = net.ZeroGradients();
    }
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    auto update = [&](std::vector<double> &param, const std::vector<double> &g,
                      std::vector<double> &m, std::vector<double> &v) {
      for (size_t i = 0; i < param.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double m_hat = m[i] / correction1;
        const double v_hat = v[i] / correction2;
        param[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
      }
    };
    for (size_t l = 0; l < layers.size(); ++l) {
      update(layers[l].weights, grads.layers[l].weights,
             first_moment_.layers[l].weights, second_moment_.layers[l].weights);
      update(layers[l].bias, grads.layers[l].bias, first_moment_.layers[l].bias,
             second_moment_.layers[l].bias);
    }
  }
  if (!net.AllFinite()) {
    throw NonFiniteError("non-finite parameter after optimizer step " +
                         std::to_string(steps_));
  }
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double max = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double &x : out) {
    x = std::exp(x - max);
    sum += x;
  }
  for (double &x : out) x /= sum;
  return out;
}

double SoftmaxCrossEntropy(std::span<const double> logits, int target,
                           std::span<double> logits_grad) {
  if (target < 0 || target >= static_cast<int>(logits.size())) {
    throw std::out_of_range("cross-entropy target out of range");
  }
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max);
  const double log_sum = max + std::log(sum);
  for (size_t k = 0; k < logits.size(); ++k) {
    logits_grad[k] = std::exp(logits[k] - log_sum);
  }
  logits_grad[target] -= 1.0;
  return log_sum - logits[target];
}

double GradientCheck(DenseNet &net, const std::function<double()> &loss,
                     const Gradients &analytic, double step, double floor) {
  double worst = 0.0;
  size_t k = 0;
  for (size_t l = 0; l < analytic.layers.size(); ++l) {
    const auto &g = analytic.layers[l];
    auto check = [&](double a) {
      double &p = net.Parameter(k++);
      const double saved = p;
      p = saved + step;
      const double up = loss();
      p = saved - step;
      const double down = loss();
      p = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double scale = std::max({std::abs(a), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(a - numeric) / scale);
    };
    for (double a : g.weights) check(a);
    for (double a : g.bias) check(a);
  }
  return worst;
}

}  // namespace augtag
