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

#ifndef SPINTWIST_TESTS_TEST_UTIL_HPP
#define SPINTWIST_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spintwist/spin_state.hpp"

namespace spintwist::testutil {

inline double ladder_coefficient(double j, double m) {
  return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

inline Eigen::MatrixXcd jz_dense(int n_atoms) {
  const int dim = n_atoms + 1;
  const double j = n_atoms / 2.0;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) out(k, k) = k - j;
  return out;
}

inline Eigen::MatrixXcd jplus_dense(int n_atoms) {
  const int dim = n_atoms + 1;
  const double j = n_atoms / 2.0;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    out(k + 1, k) = ladder_coefficient(j, k - j);
  }
  return out;
}

inline Eigen::MatrixXcd jx_dense(int n_atoms) {
  const Eigen::MatrixXcd plus = jplus_dense(n_atoms);
  return 0.5 * (plus + plus.adjoint());
}

inline Eigen::MatrixXcd jy_dense(int n_atoms) {
  const Eigen::MatrixXcd plus = jplus_dense(n_atoms);
  return std::complex<double>(0.0, -0.5) * (plus - plus.adjoint());
}

/// e^{-i angle H} for Hermitian H, via eigendecomposition.
inline Eigen::MatrixXcd expm_generator(const Eigen::MatrixXcd& hermitian,
                                       double angle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
  const Eigen::VectorXd evals = solver.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (int i = 0; i < evals.size(); ++i) {
    phases[i] = std::exp(std::complex<double>(0.0, -angle * evals[i]));
  }
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

inline SpinState random_state(int n_atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd c(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) {
    c[k] = std::complex<double>(gauss(rng), gauss(rng));
  }
  c /= c.norm();
  return SpinState(n_atoms, std::move(c));
}

inline double max_amplitude_diff(const Eigen::VectorXcd& a,
                                 const Eigen::VectorXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Distance ignoring global phase: min over unit phase of ||a - e^{i t} b||_inf.
inline double phase_free_diff(const Eigen::VectorXcd& a,
                              const Eigen::VectorXcd& b) {
  const std::complex<double> overlap = b.dot(a);
  const double mag = std::abs(overlap);
  const std::complex<double> phase =
      mag > 1e-300 ? overlap / mag : std::complex<double>(1.0, 0.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace spintwist::testutil

#endif
