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

#include "spintwist/ramsey.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spintwist {

namespace {

constexpr double kSlopeFloor = 1e-12;

/// Applies e^{-i (pi/2) Jx} U^dagger to an arbitrary (not necessarily
/// normalized) vector.
SpinState reverse_and_read(SpinState state, const PulseSequence& sequence) {
  const double chi_dt = sequence.chi * sequence.total_time /
                        (sequence.n_intervals > 0 ? sequence.n_intervals : 1);
  for (auto it = sequence.actions.rbegin(); it != sequence.actions.rend();
       ++it) {
    switch (*it) {
      case ActionKind::Free:
        break;
      case ActionKind::PulseX:
        state = apply_rotation(state, CollectiveAxis::X, -M_PI / 2);
        break;
      case ActionKind::PulseY:
        state = apply_rotation(state, CollectiveAxis::Y, -M_PI / 2);
        break;
    }
    state = apply_oat(state, -chi_dt);
  }
  return apply_rotation(state, CollectiveAxis::X, M_PI / 2);
}

SpinState phase_encode(const SpinState& psi_t, double phi) {
  return apply_rotation(psi_t, CollectiveAxis::Z, phi);
}

SpinState multiply_jz(const SpinState& state) {
  const double j = state.spin_j();
  Eigen::VectorXcd c = state.amplitudes();
  for (int k = 0; k < c.size(); ++k) c[k] *= static_cast<double>(k) - j;
  return SpinState(state.n_atoms(), std::move(c));
}

}  // namespace

SpinState ramsey_state(const SpinState& psi_t, const PulseSequence& sequence,
                       double phi) {
  psi_t.require_normalized();
  return reverse_and_read(phase_encode(psi_t, phi), sequence);
}

double jz_slope(const SpinState& psi_t, const PulseSequence& sequence,
                double phi) {
  psi_t.require_normalized();
  const SpinState encoded = phase_encode(psi_t, phi);
  const SpinState readout = reverse_and_read(encoded, sequence);
  // d/dphi of the encoded vector is -i Jz applied before the reversal;
  // the unitary pipeline commutes with that factor of -i.
  const SpinState pushed = reverse_and_read(multiply_jz(encoded), sequence);
  const SpinState jz_readout = multiply_jz(readout);
  const std::complex<double> overlap =
      jz_readout.amplitudes().dot(pushed.amplitudes());
  // slope = 2 Re <w| Jz (-i) |y> = 2 Im <Jz w | y>
  return 2.0 * overlap.imag();
}

RamseyResult delta_phi(const SpinState& psi_t, const PulseSequence& sequence,
                       double phi0) {
  const SpinState readout = ramsey_state(psi_t, sequence, phi0);
  const SpinMoments m = moments(readout);
  const double variance = std::max(m.jz2 - m.jz * m.jz, 0.0);
  const double slope = jz_slope(psi_t, sequence, phi0);
  if (std::abs(slope) < kSlopeFloor) {
    throw std::runtime_error("non-informative working point: |slope| < 1e-12");
  }
  RamseyResult result;
  result.phi = phi0;
  result.mean_jz = m.jz;
  result.var_jz = variance;
  result.slope = slope;
  result.delta_phi = std::sqrt(variance) / std::abs(slope);
  return result;
}

}  // namespace spintwist
