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

#include "spintwist/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace spintwist {

void adam_step(Mlp& params, const Mlp& grads, AdamState& state,
               const AdamHyper& hyper) {
  if (grads.sizes() != params.sizes()) {
    throw std::invalid_argument("gradient shape mismatch");
  }
  state.step_count += 1;
  const double correction1 =
      1.0 - std::pow(hyper.beta1, static_cast<double>(state.step_count));
  const double correction2 =
      1.0 - std::pow(hyper.beta2, static_cast<double>(state.step_count));
  for (size_t l = 0; l < params.layers().size(); ++l) {
    auto update = [&](Eigen::Ref<Eigen::MatrixXd> p,
                      const Eigen::MatrixXd& g, Eigen::Ref<Eigen::MatrixXd> m,
                      Eigen::Ref<Eigen::MatrixXd> v) {
      m.array() = hyper.beta1 * m.array() + (1.0 - hyper.beta1) * g.array();
      v.array() =
          hyper.beta2 * v.array() + (1.0 - hyper.beta2) * g.array().square();
      const Eigen::ArrayXXd m_hat = m.array() / correction1;
      const Eigen::ArrayXXd v_hat = v.array() / correction2;
      p.array() -=
          hyper.learning_rate * m_hat / (v_hat.sqrt() + hyper.epsilon);
    };
    update(params.layers()[l].weights, grads.layers()[l].weights,
           state.first_moment.layers()[l].weights,
           state.second_moment.layers()[l].weights);
    update(params.layers()[l].bias, grads.layers()[l].bias,
           state.first_moment.layers()[l].bias,
           state.second_moment.layers()[l].bias);
  }
}

}  // namespace spintwist
