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

#include "spintwist/metrology.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace spintwist {

namespace {

constexpr double kMeanSpinFloor = 1e-9;

double perp_variance_minimum(const SpinCovariance& cov) {
  const double norm = cov.mean.norm();
  if (norm <= kMeanSpinFloor) {
    throw std::domain_error("squeezing undefined: mean spin is degenerate");
  }
  const Eigen::Vector3d n = cov.mean / norm;
  // Orthonormal pair spanning the plane perpendicular to n.
  Eigen::Vector3d seed = std::abs(n.z()) < 0.9
                             ? Eigen::Vector3d::UnitZ()
                             : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = n.cross(seed).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  Eigen::Matrix2d block;
  block << e1.dot(cov.covariance * e1), e1.dot(cov.covariance * e2),
      e2.dot(cov.covariance * e1), e2.dot(cov.covariance * e2);
  const Eigen::Matrix2d sym = 0.5 * (block + block.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(sym);
  return solver.eigenvalues().minCoeff();
}

// Over-twisted scan points can lose the mean-spin direction; treat
// them as unsqueezed rather than failing the whole scan.
double squeezing_at_time(int n_atoms, double chi, double t) {
  const SpinState state = apply_oat(css_initial(n_atoms), chi * t);
  try {
    return squeezing_parameter(state);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

double qfi_generator_z(const SpinState& state) {
  state.require_normalized();
  const SpinMoments m = moments(state);
  return 4.0 * (m.jz2 - m.jz * m.jz);
}

double qfi_by_definition(const SpinState& state, double theta) {
  state.require_normalized();
  const int dim = state.dim();
  const double j = state.spin_j();
  Eigen::VectorXcd rotated(dim);
  Eigen::VectorXcd derivative(dim);
  const std::complex<double> minus_i(0.0, -1.0);
  for (int k = 0; k < dim; ++k) {
    const double m = static_cast<double>(k) - j;
    const std::complex<double> phase = std::exp(minus_i * (theta * m));
    rotated[k] = phase * state.amplitudes()[k];
    derivative[k] = minus_i * m * rotated[k];
  }
  const double d_norm2 = derivative.squaredNorm();
  const std::complex<double> overlap = rotated.dot(derivative);
  return 4.0 * (d_norm2 - std::norm(overlap));
}

double squeezing_parameter(const SpinState& state) {
  state.require_normalized();
  const SpinCovariance cov = collective_covariance(state);
  const double var_min = perp_variance_minimum(cov);
  return 4.0 * var_min / static_cast<double>(state.n_atoms());
}

double optimal_squeezing_time(int n_atoms, double chi,
                              const SqueezingTimeOptions& options) {
  if (chi == 0.0) {
    throw std::invalid_argument("chi must be nonzero");
  }
  const double chi_abs = std::abs(chi);
  double t_max = options.t_max;
  if (t_max <= 0.0) {
    t_max = 8.0 / (chi_abs * std::pow(static_cast<double>(n_atoms), 2.0 / 3.0));
  }
  const int points = options.coarse_points < 8 ? 8 : options.coarse_points;

  int best = -1;
  double best_val = 0.0;
  std::vector<double> grid(points + 1);
  std::vector<double> vals(points + 1);
  for (int i = 0; i <= points; ++i) {
    grid[i] = t_max * static_cast<double>(i) / points;
    vals[i] = squeezing_at_time(n_atoms, chi_abs, grid[i]);
    if (best < 0 || vals[i] < best_val) {
      best = i;
      best_val = vals[i];
    }
  }
  if (best == 0 || best == points) {
    throw std::runtime_error("squeezing minimum not bracketed by scan grid");
  }

  double lo = grid[best - 1];
  double hi = grid[best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = squeezing_at_time(n_atoms, chi_abs, a);
  double fb = squeezing_at_time(n_atoms, chi_abs, b);
  while (hi - lo > options.tolerance) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = squeezing_at_time(n_atoms, chi_abs, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = squeezing_at_time(n_atoms, chi_abs, b);
    }
  }
  return 0.5 * (lo + hi);
}

Eigen::VectorXd dicke_distribution(const SpinState& state) {
  return state.amplitudes().cwiseAbs2();
}

Eigen::MatrixXd husimi_grid(const SpinState& state, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 1) {
    throw std::invalid_argument("husimi grid needs n_theta >= 2, n_phi >= 1");
  }
  state.require_normalized();
  const int n = state.n_atoms();
  const int dim = state.dim();
  const double j = state.spin_j();
  const double prefactor = (n + 1) / (4.0 * M_PI);

  Eigen::MatrixXd q(n_theta, n_phi);
  Eigen::VectorXd log_binom(dim);
  for (int k = 0; k < dim; ++k) {
    log_binom[k] = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                   std::lgamma(n - k + 1.0);
  }
  for (int i = 0; i < n_theta; ++i) {
    const double theta = M_PI * static_cast<double>(i) / (n_theta - 1);
    const double lc = std::log(std::max(std::cos(theta / 2.0), 0.0));
    const double ls = std::log(std::max(std::sin(theta / 2.0), 0.0));
    // Coherent-state amplitudes at phi = 0; the phi dependence is a
    // pure phase per component applied inside the overlap below.
    Eigen::VectorXd radial(dim);
    for (int k = 0; k < dim; ++k) {
      double log_amp = 0.5 * log_binom[k];
      // Skip zero exponents so the poles avoid 0 * log(0).
      if (k > 0) log_amp += k * lc;
      if (n - k > 0) log_amp += (n - k) * ls;
      radial[k] = std::exp(log_amp);
    }
    for (int p = 0; p < n_phi; ++p) {
      const double phi = 2.0 * M_PI * static_cast<double>(p) / n_phi;
      std::complex<double> overlap(0.0, 0.0);
      for (int k = 0; k < dim; ++k) {
        const double m = static_cast<double>(k) - j;
        overlap += radial[k] * std::exp(std::complex<double>(0.0, phi * m)) *
                   state.amplitudes()[k];
      }
      q(i, p) = prefactor * std::norm(overlap);
    }
  }
  return q;
}

MetricReport metric_report(const SpinState& state) {
  MetricReport report;
  report.n_atoms = state.n_atoms();
  report.qfi = qfi_generator_z(state);
  report.dicke_probs = dicke_distribution(state);
  try {
    report.squeezing_xi2 = squeezing_parameter(state);
  } catch (const std::domain_error&) {
    report.squeezing_xi2.reset();
  }
  return report;
}

}  // namespace spintwist
