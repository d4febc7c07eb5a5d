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

#ifndef SPINTWIST_METROLOGY_HPP
#define SPINTWIST_METROLOGY_HPP

#include <optional>

#include "spintwist/spin_state.hpp"

namespace spintwist {

/// Quantum Fisher information of a pure state for phase generation by
/// J_z: the closed form 4 (<Jz^2> - <Jz>^2).
double qfi_generator_z(const SpinState& state);

/// Same quantity evaluated from the defining expression, building
/// |psi(theta)> = e^{-i theta Jz} |psi> and its theta-derivative
/// explicitly. Independent of theta; kept as a cross-check route.
double qfi_by_definition(const SpinState& state, double theta);

/// Variance-based (Kitagawa-Ueda) squeezing parameter:
/// 4 min Var(J_perp) / N over directions orthogonal to the mean spin.
/// Throws std::domain_error when |<J>| <= 1e-9 (no mean-spin direction).
double squeezing_parameter(const SpinState& state);

struct SqueezingTimeOptions {
  double t_max = 0.0;   // 0: scaled default 8 / (chi N^{2/3})
  int coarse_points = 400;
  double tolerance = 1e-9;  // absolute golden-section window on t
};

/// Time minimizing the squeezing parameter under free one-axis twisting
/// from the coherent state, by golden-section refinement of a coarse
/// scan. Throws std::runtime_error when the minimum is not bracketed by
/// the grid.
double optimal_squeezing_time(int n_atoms, double chi,
                              const SqueezingTimeOptions& options = {});

/// Probabilities |c_m|^2 indexed by k = m + N/2.
Eigen::VectorXd dicke_distribution(const SpinState& state);

/// Husimi function Q(theta, phi) = (N+1)/(4 pi) |<theta,phi|psi>|^2 on an
/// equal-angle grid: rows theta_i = i pi/(n_theta-1), columns
/// phi_k = 2 pi k/n_phi. Normalized so the sphere integral is 1.
Eigen::MatrixXd husimi_grid(const SpinState& state, int n_theta, int n_phi);

struct MetricReport {
  double qfi;
  // Unset when the mean spin direction is degenerate.
  std::optional<double> squeezing_xi2;
  Eigen::VectorXd dicke_probs;
  int n_atoms;
};

MetricReport metric_report(const SpinState& state);

}  // namespace spintwist

#endif
