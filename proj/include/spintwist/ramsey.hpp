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

#ifndef SPINTWIST_RAMSEY_HPP
#define SPINTWIST_RAMSEY_HPP

#include "spintwist/pulse_env.hpp"
#include "spintwist/spin_state.hpp"

namespace spintwist {

struct RamseyResult {
  double phi = 0.0;
  double mean_jz = 0.0;
  double var_jz = 0.0;
  double slope = 0.0;      // d<Jz>/dphi at phi
  double delta_phi = 0.0;  // sqrt(var_jz) / |slope|
};

inline constexpr double kDefaultWorkingPoint = 1e-6;

/// Time-reversal readout state
///   e^{-i (pi/2) Jx} U^dagger e^{-i phi Jz} |psi_T>,
/// where U^dagger undoes the sequence's actions in reverse order with
/// sign-flipped twisting and pulses.
SpinState ramsey_state(const SpinState& psi_t, const PulseSequence& sequence,
                       double phi);

/// Analytic d<Jz>/dphi of the readout state, from the phase-derivative
/// vector pushed through the same reversal pipeline.
double jz_slope(const SpinState& psi_t, const PulseSequence& sequence,
                double phi);

/// Error-propagation precision at the working point phi0. Throws
/// std::runtime_error when |slope| < 1e-12 (non-informative point).
RamseyResult delta_phi(const SpinState& psi_t, const PulseSequence& sequence,
                       double phi0 = kDefaultWorkingPoint);

}  // namespace spintwist

#endif
