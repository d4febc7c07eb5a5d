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

#ifndef SPINTWIST_MLP_HPP
#define SPINTWIST_MLP_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace spintwist {

struct DenseLayer {
  Eigen::MatrixXd weights;  // rows: outputs, cols: inputs
  Eigen::VectorXd bias;
};

/// Fully connected network with tanh hidden units and a linear head.
/// The same shape doubles as a gradient container.
class Mlp {
 public:
  /// sizes lists every layer width, input first, e.g. {6, 64, 64, 2}.
  /// Weights start Xavier-uniform; the head layer is shrunk by 100x so
  /// fresh policies stay near uniform and fresh values near zero.
  Mlp(std::vector<int> sizes, std::uint64_t seed);

  static Mlp zeros_like(const Mlp& other);

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::int64_t parameter_count() const;

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;

  /// Post-activation values per layer; entry 0 is the input, the last
  /// entry is the linear head output.
  struct ForwardCache {
    std::vector<Eigen::VectorXd> activations;
  };

  Eigen::VectorXd forward_cached(const Eigen::VectorXd& input,
                                 ForwardCache& cache) const;

  /// Accumulates d(loss)/d(parameters) into `grads` given the cache of a
  /// prior forward_cached call and d(loss)/d(output).
  void backward(const ForwardCache& cache, const Eigen::VectorXd& output_grad,
                Mlp& grads) const;

  void set_zero();
  void add_scaled(const Mlp& other, double factor);

  /// Row-major concatenation of all weights and biases, layer by layer.
  std::vector<double> flatten() const;
  void unflatten(const std::vector<double>& flat);

 private:
  Mlp() = default;

  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

double global_norm(const Mlp& grads);

/// Rescales gradients in place so their global norm is at most
/// `max_norm`; no-op when already within the bound.
void clip_global_norm(Mlp& grads, double max_norm);

}  // namespace spintwist

#endif
