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

#ifndef SPINTWIST_SPIN_STATE_HPP
#define SPINTWIST_SPIN_STATE_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>

namespace spintwist {

enum class CollectiveAxis { X, Y, Z };

/// Action codes are part of the serialization format; do not reorder.
enum class ActionKind : int { Free = 0, PulseX = 1, PulseY = 2 };

/// Pure state of N two-level atoms in the maximal-spin (j = N/2) Dicke
/// sector. Amplitude index k corresponds to the J_z eigenvalue
/// m = k - N/2, so the vector has length N + 1.
class SpinState {
 public:
  SpinState(int n_atoms, Eigen::VectorXcd amplitudes);

  int n_atoms() const { return n_atoms_; }
  double spin_j() const { return 0.5 * n_atoms_; }
  int dim() const { return n_atoms_ + 1; }

  /// J_z eigenvalue of basis index k (half-integer when N is odd).
  double level_m(int k) const { return k - 0.5 * n_atoms_; }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  double norm_error() const { return std::abs(amplitudes_.norm() - 1.0); }

  /// Throws std::runtime_error if the norm has drifted; states are never
  /// silently renormalized.
  void require_normalized(double tol = 1e-8) const;

  /// Dicke basis state |m> given by index k = m + N/2.
  static SpinState dicke(int n_atoms, int k);

 private:
  int n_atoms_;
  Eigen::VectorXcd amplitudes_;
};

/// Coherent spin state along +x: a pi/2 y-rotation of the all-up state,
/// with binomial amplitudes c_m = 2^{-N/2} sqrt(C(N, m + N/2)).
SpinState css_initial(int n_atoms);

/// One-axis twisting phase e^{-i chi_dt m^2} per amplitude. Negative
/// chi_dt realizes the time-reversed twisting.
SpinState apply_oat(const SpinState& state, double chi_dt);

/// e^{-i angle J_axis}. The z-rotation is diagonal; the y-rotation uses a
/// cached real orthogonal rotation matrix; the x-rotation is the
/// y-rotation conjugated with z-rotations of +-pi/2.
SpinState apply_rotation(const SpinState& state, CollectiveAxis axis,
                         double angle);

/// One environment interval: twisting for chi_dt, then (for pulse
/// actions) an instantaneous pi/2 rotation.
SpinState apply_action(const SpinState& state, ActionKind action,
                       double chi_dt);

struct SpinMoments {
  double jx, jy, jz;
  double jx2, jy2, jz2;
};

/// First and second collective-spin moments from the tridiagonal ladder
/// action; exact up to rounding.
SpinMoments moments(const SpinState& state);

/// Six-component learner observation:
/// (Jx, Jy, Jz)/(N/2) then (Jx^2, Jy^2, Jz^2)/(N/2)^2.
std::array<double, 6> observation(const SpinState& state);

struct SpinCovariance {
  Eigen::Vector3d mean;        // (<Jx>, <Jy>, <Jz>)
  Eigen::Matrix3d covariance;  // symmetrized, mean-subtracted
};

SpinCovariance collective_covariance(const SpinState& state);

}  // namespace spintwist

#endif
