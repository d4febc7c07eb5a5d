// Copyright 2026 The spintwist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spintwist/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace spintwist {

Mlp::Mlp(std::vector<int> sizes, std::uint64_t seed)
    : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("an MLP needs at least input and output");
  }
  for (int width : sizes_) {
    if (width < 1) throw std::invalid_argument("layer width must be positive");
  }
  std::mt19937_64 rng(seed);
  layers_.reserve(sizes_.size() - 1);
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int fan_in = sizes_[l];
    const int fan_out = sizes_[l + 1];
    const bool head = l + 2 == sizes_.size();
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    if (head) limit *= 0.01;
    std::uniform_real_distribution<double> uniform(-limit, limit);
    DenseLayer layer;
    layer.weights.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) layer.weights(r, c) = uniform(rng);
    }
    layer.bias = Eigen::VectorXd::Zero(fan_out);
    layers_.push_back(std::move(layer));
  }
}

Mlp Mlp::zeros_like(const Mlp& other) {
  Mlp out;
  out.sizes_ = other.sizes_;
  out.layers_.reserve(other.layers_.size());
  for (const DenseLayer& layer : other.layers_) {
    DenseLayer zero;
    zero.weights = Eigen::MatrixXd::Zero(layer.weights.rows(),
                                         layer.weights.cols());
    zero.bias = Eigen::VectorXd::Zero(layer.bias.size());
    out.layers_.push_back(std::move(zero));
  }
  return out;
}

std::int64_t Mlp::parameter_count() const {
  std::int64_t count = 0;
  for (const DenseLayer& layer : layers_) {
    count += layer.weights.size() + layer.bias.size();
  }
  return count;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  if (input.size() != sizes_.front()) {
    throw std::invalid_argument("input width mismatch");
  }
  Eigen::VectorXd value = input;
  for (size_t l = 0; l < layers_.size(); ++l) {
    value = layers_[l].weights * value + layers_[l].bias;
    if (l + 1 < layers_.size()) value = value.array().tanh().matrix();
  }
  return value;
}

Eigen::VectorXd Mlp::forward_cached(const Eigen::VectorXd& input,
                                    ForwardCache& cache) const {
  if (input.size() != sizes_.front()) {
    throw std::invalid_argument("input width mismatch");
  }
  cache.activations.clear();
  cache.activations.reserve(layers_.size() + 1);
  cache.activations.push_back(input);
  for (size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd value =
        layers_[l].weights * cache.activations.back() + layers_[l].bias;
    if (l + 1 < layers_.size()) value = value.array().tanh().matrix();
    cache.activations.push_back(std::move(value));
  }
  return cache.activations.back();
}

void Mlp::backward(const ForwardCache& cache,
                   const Eigen::VectorXd& output_grad, Mlp& grads) const {
  if (cache.activations.size() != layers_.size() + 1) {
    throw std::invalid_argument("stale forward cache");
  }
  Eigen::VectorXd delta = output_grad;  // d loss / d pre-activation
  for (size_t l = layers_.size(); l-- > 0;) {
    const Eigen::VectorXd& below = cache.activations[l];
    grads.layers_[l].weights.noalias() += delta * below.transpose();
    grads.layers_[l].bias += delta;
    if (l > 0) {
      Eigen::VectorXd back = layers_[l].weights.transpose() * delta;
      // below is already the tanh output of layer l-1.
      delta = back.cwiseProduct(
          (1.0 - below.array().square()).matrix());
    }
  }
}

void Mlp::set_zero() {
  for (DenseLayer& layer : layers_) {
    layer.weights.setZero();
    layer.bias.setZero();
  }
}

void Mlp::add_scaled(const Mlp& other, double factor) {
  if (other.sizes_ != sizes_) {
    throw std::invalid_argument("shape mismatch in add_scaled");
  }
  for (size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].weights += factor * other.layers_[l].weights;
    layers_[l].bias += factor * other.layers_[l].bias;
  }
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(parameter_count()));
  for (const DenseLayer& layer : layers_) {
    for (int r = 0; r < layer.weights.rows(); ++r) {
      for (int c = 0; c < layer.weights.cols(); ++c) {
        flat.push_back(layer.weights(r, c));
      }
    }
    for (int r = 0; r < layer.bias.size(); ++r) flat.push_back(layer.bias[r]);
  }
  return flat;
}

void Mlp::unflatten(const std::vector<double>& flat) {
  if (static_cast<std::int64_t>(flat.size()) != parameter_count()) {
    throw std::invalid_argument("flat parameter length mismatch");
  }
  size_t i = 0;
  for (DenseLayer& layer : layers_) {
    for (int r = 0; r < layer.weights.rows(); ++r) {
      for (int c = 0; c < layer.weights.cols(); ++c) {
        layer.weights(r, c) = flat[i++];
      }
    }
    for (int r = 0; r < layer.bias.size(); ++r) layer.bias[r] = flat[i++];
  }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double peak = logits.maxCoeff();
  Eigen::ArrayXd shifted = (logits.array() - peak).exp();
  return (shifted / shifted.sum()).matrix();
}

double global_norm(const Mlp& grads) {
  double sum = 0.0;
  for (const DenseLayer& layer : grads.layers()) {
    sum += layer.weights.squaredNorm() + layer.bias.squaredNorm();
  }
  return std::sqrt(sum);
}

void clip_global_norm(Mlp& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm <= max_norm || norm == 0.0) return;
  const double factor = max_norm / norm;
  for (DenseLayer& layer : grads.layers()) {
    layer.weights *= factor;
    layer.bias *= factor;
  }
}

}  // namespace spintwist
