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


#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "augtag/errors.h"
#include "augtag/kernels.h"
#include "augtag/nncore.h"

namespace augtag {
namespace {

std::vector<double> RandomVector(size_t n, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double &x : v) x = u(rng);
  return v;
}

TEST_CASE("kernels agree with a naive loop and serial equals parallel bitwise") {
  std::mt19937_64 rng(3);
  kernels::SetThreads(4);
  for (auto [rows, cols] : {std::pair{1, 1}, {3, 5}, {17, 9}, {300, 257}}) {
    auto w = RandomVector(static_cast<size_t>(rows) * cols, rng);
    auto b = RandomVector(rows, rng);
    auto x = RandomVector(cols, rng);
    auto g = RandomVector(rows, rng);

    std::vector<double> naive(rows);
    for (int r = 0; r < rows; ++r) {
      double acc = b[r];
      for (int c = 0; c < cols; ++c) acc += w[r * cols + c] * x[c];
      naive[r] = acc;
    }
    std::vector<double> ys(rows), yp(rows), yd(rows);
    kernels::serial::Affine(w, b, x, ys, rows, cols);
    kernels::parallel::Affine(w, b, x, yp, rows, cols);
    kernels::Affine(w, b, x, yd, rows, cols);
    for (int r = 0; r < rows; ++r) CHECK(ys[r] == doctest::Approx(naive[r]).epsilon(1e-12));
    CHECK(ys == yp);
    CHECK(ys == yd);

    std::vector<double> xs(cols), xp(cols);
    kernels::serial::AffineTransposed(w, g, xs, rows, cols);
    kernels::parallel::AffineTransposed(w, g, xp, rows, cols);
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int r = 0; r < rows; ++r) acc += w[r * cols + c] * g[r];
      CHECK(xs[c] == doctest::Approx(acc).epsilon(1e-12));
    }
    CHECK(xs == xp);

    std::vector<double> ds(w.size(), 0.5), dp(w.size(), 0.5);
    kernels::serial::AccumulateOuter(ds, g, x, rows, cols);
    kernels::parallel::AccumulateOuter(dp, g, x, rows, cols);
    CHECK(ds[0] == doctest::Approx(0.5 + g[0] * x[0]));
    CHECK(ds == dp);
  }
  kernels::SetThreads(1);
}

TEST_CASE("forward pass of a hand-built net") {
  // 2 -> 2 tanh -> 1 linear.
  LayerParams l1{2, 2, {1, 2, -1, 0.5}, {0.1, -0.2}};
  LayerParams l2{2, 1, {0.3, -0.7}, {0.05}};
  DenseNet net = DenseNet::FromLayers({l1, l2}, Activation::kTanh);
  const std::vector<double> x{0.4, -0.3};
  const double h0 = std::tanh(0.4 - 0.6 + 0.1);
  const double h1 = std::tanh(-0.4 - 0.15 - 0.2);
  auto y = net.Forward(x);
  REQUIRE(y.size() == 1);
  CHECK(y[0] == doctest::Approx(0.3 * h0 - 0.7 * h1 + 0.05).epsilon(1e-14));

  DenseNet relu = DenseNet::FromLayers({l1, l2}, Activation::kRelu);
  const double r0 = std::max(0.0, 0.4 - 0.6 + 0.1);
  CHECK(relu.Forward(x)[0] == doctest::Approx(0.3 * r0 + 0.05).epsilon(1e-14));
  CHECK(net.num_parameters() == 9);
  CHECK(net.Parameter(6) == 0.3);
  CHECK(net.Parameter(8) == 0.05);
}

TEST_CASE("shape validation") {
  DenseNet net({3, 4, 2}, Activation::kTanh, 1);
  CHECK(net.input_size() == 3);
  CHECK(net.output_size() == 2);
  CHECK(net.sizes() == std::vector<int>{3, 4, 2});
  CHECK_THROWS_AS(net.Forward(std::vector<double>{1, 2}), ValidationError);
  ForwardCache empty;
  CHECK_THROWS_AS(net.Backward(empty, std::vector<double>{1, 1}), std::logic_error);
  LayerParams bad{2, 2, {1, 2, 3}, {0, 0}};
  CHECK_THROWS_AS(DenseNet::FromLayers({bad}, Activation::kTanh), ValidationError);
  LayerParams a{2, 3, std::vector<double>(6), std::vector<double>(3)};
  LayerParams b{2, 1, std::vector<double>(2), std::vector<double>(1)};
  CHECK_THROWS_AS(DenseNet::FromLayers({a, b}, Activation::kTanh), ValidationError);
}

TEST_CASE("initialisation is seeded Xavier with zero bias") {
  DenseNet a({64, 64}, Activation::kTanh, 5);
  DenseNet b({64, 64}, Activation::kTanh, 5);
  CHECK(a == b);
  double sum_sq = 0.0;
  for (double x : a.layers()[0].weights) sum_sq += x * x;
  const double var = sum_sq / 4096.0;
  CHECK(var == doctest::Approx(2.0 / 128.0).epsilon(0.1));
  for (double x : a.layers()[0].bias) CHECK(x == 0.0);
}

TEST_CASE("softmax and cross-entropy") {
  auto p = Softmax(std::vector<double>{1000.0, 1000.0, 999.0});
  const double e = std::exp(-1.0);
  CHECK(p[0] == doctest::Approx(1.0 / (2.0 + e)));
  CHECK(p[2] == doctest::Approx(e / (2.0 + e)));
  std::vector<double> logits{0.2, -1.0, 0.5};
  std::vector<double> grad(3);
  const double loss = SoftmaxCrossEntropy(logits, 2, grad);
  auto q = Softmax(logits);
  CHECK(loss == doctest::Approx(-std::log(q[2])));
  CHECK(grad[0] == doctest::Approx(q[0]));
  CHECK(grad[2] == doctest::Approx(q[2] - 1.0));
  CHECK_THROWS(SoftmaxCrossEntropy(logits, 3, grad));
}

// Classifier shape: embedding -> labels, softmax cross-entropy.
TEST_CASE("gradient check, base classifier shape") {
  std::mt19937_64 rng(11);
  DenseNet net({12, 5}, Activation::kTanh, 2);
  auto x = RandomVector(12, rng);
  std::vector<double> grad(5);
  auto loss = [&] { return SoftmaxCrossEntropy(net.Forward(x), 3, grad); };
  ForwardCache cache;
  SoftmaxCrossEntropy(net.Forward(x, &cache), 3, grad);
  auto analytic = net.Backward(cache, grad);
  CHECK(GradientCheck(net, loss, analytic) < 1e-4);

  DenseNet hidden({12, 7, 5}, Activation::kRelu, 4);
  auto loss2 = [&] { return SoftmaxCrossEntropy(hidden.Forward(x), 1, grad); };
  ForwardCache cache2;
  SoftmaxCrossEntropy(hidden.Forward(x, &cache2), 1, grad);
  CHECK(GradientCheck(hidden, loss2, hidden.Backward(cache2, grad)) < 1e-4);
}

// Q-net shape: [state ; one-hot] -> tanh -> tanh -> Q, squared error at one action.
TEST_CASE("gradient check, Q-network shape") {
  std::mt19937_64 rng(12);
  const int dim = 8, w = 4;
  DenseNet net({dim + w, 10, 10, w}, Activation::kTanh, 3);
  auto x = RandomVector(dim + w, rng);
  const double target = 0.37;
  const int action = 2;
  auto loss = [&] {
    const double d = net.Forward(x)[action] - target;
    return d * d;
  };
  ForwardCache cache;
  auto q = net.Forward(x, &cache);
  std::vector<double> g(w, 0.0);
  g[action] = 2.0 * (q[action] - target);
  CHECK(GradientCheck(net, loss, net.Backward(cache, g)) < 1e-4);
}

TEST_CASE("input gradient matches finite differences") {
  std::mt19937_64 rng(13);
  DenseNet net({6, 4, 3}, Activation::kTanh, 9);
  auto x = RandomVector(6, rng);
  const std::vector<double> weights{0.3, -1.2, 0.8};
  auto f = [&](const std::vector<double> &in) {
    auto y = net.Forward(in);
    return weights[0] * y[0] + weights[1] * y[1] + weights[2] * y[2];
  };
  ForwardCache cache;
  net.Forward(x, &cache);
  auto analytic = net.InputGradient(cache, weights);
  for (int i = 0; i < 6; ++i) {
    auto up = x, down = x;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    CHECK(analytic[i] == doctest::Approx((f(up) - f(down)) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("sgd step and adam first step") {
  LayerParams l{1, 1, {1.0}, {0.0}};
  DenseNet net = DenseNet::FromLayers({l}, Activation::kTanh);
  Gradients g = net.ZeroGradients();
  g.layers[0].weights[0] = 2.0;
  g.layers[0].bias[0] = -1.0;
  Optimizer sgd({OptimizerKind::kSgd, 0.1, 1});
  sgd.Step(net, g);
  CHECK(net.layers()[0].weights[0] == doctest::Approx(0.8));
  CHECK(net.layers()[0].bias[0] == doctest::Approx(0.1));

  // Bias-corrected Adam moves each parameter by lr * g / (|g| + eps).
  DenseNet net2 = DenseNet::FromLayers({l}, Activation::kTanh);
  Optimizer adam({OptimizerKind::kAdam, 0.01, 1});
  adam.Step(net2, g);
  CHECK(net2.layers()[0].weights[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-9));
  CHECK(net2.layers()[0].bias[0] == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(adam.steps() == 1);
}

TEST_CASE("non-finite gradients are rejected") {
  DenseNet net({2, 2}, Activation::kTanh, 1);
  Gradients g = net.ZeroGradients();
  g.layers[0].weights[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(g.AllFinite());
  Optimizer opt({OptimizerKind::kSgd, 0.1, 1});
  CHECK_THROWS_AS(opt.Step(net, g), NonFiniteError);
}

TEST_CASE("gradients accumulate and scale") {
  DenseNet net({2, 1}, Activation::kTanh, 1);
  Gradients a = net.ZeroGradients();
  a.layers[0].weights = {1, 2};
  Gradients b = a;
  a.Add(b);
  a.Scale(0.25);
  CHECK(a.layers[0].weights == std::vector<double>{0.5, 1.0});
  a.Clear();
  CHECK(a.layers[0].weights == std::vector<double>{0, 0});
}

TEST_CASE("optimizer config validation and names") {
  CHECK_THROWS_AS((OptimizerConfig{OptimizerKind::kSgd, 0.0, 1}.Validate()),
                  ValidationError);
  CHECK_THROWS_AS((OptimizerConfig{OptimizerKind::kSgd, 0.1, 0}.Validate()),
                  ValidationError);
  CHECK(ParseOptimizerKind("adam") == OptimizerKind::kAdam);
  CHECK(OptimizerKindName(OptimizerKind::kSgd) == "sgd");
  CHECK(ParseActivation("relu") == Activation::kRelu);
  CHECK_THROWS_AS(ParseActivation("gelu"), ValidationError);
}

}  // namespace
}  // namespace augtag
