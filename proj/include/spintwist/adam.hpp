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

#ifndef SPINTWIST_ADAM_HPP
#define SPINTWIST_ADAM_HPP

#include <cstdint>

#include "spintwist/mlp.hpp"

namespace spintwist {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Mlp first_moment;
  Mlp second_moment;
  std::int64_t step_count = 0;

  explicit AdamState(const Mlp& params)
      : first_moment(Mlp::zeros_like(params)),
        second_moment(Mlp::zeros_like(params)) {}
};

/// One bias-corrected ADAM update of `params` along `grads`.
void adam_step(Mlp& params, const Mlp& grads, AdamState& state,
               const AdamHyper& hyper);

}  // namespace spintwist

#endif
