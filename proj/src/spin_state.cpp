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

#include "spintwist/spin_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spintwist/rotation_cache.hpp"

namespace spintwist {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void check_n_atoms(int n_atoms) {
  if (n_atoms < 1) {
    throw std::invalid_argument("system size must have at least one atom, got " +
                                std::to_string(n_atoms));
  }
}

/// Ladder coefficient A_k = sqrt(j(j+1) - m(m+1)) with m = k - j, so that
/// J+ |k> = A_k |k+1>.
double ladder_coeff(double j, int k) {
  double m = k - j;
  return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

struct MomentSums {
  double norm2 = 0.0;
  double jz = 0.0, jz2 = 0.0;
  double perp_diag = 0.0;                 // sum |c|^2 (j(j+1) - m^2)
  std::complex<double> t1{0.0, 0.0};      // <J+>
  std::complex<double> t2{0.0, 0.0};      // <J+^2>
  std::complex<double> tz{0.0, 0.0};      // <(J+ Jz + Jz J+)/2>
};

MomentSums accumulate(const SpinState& state) {
  const auto& c = state.amplitudes();
  const int n = state.dim();
  const double j = state.spin_j();
  MomentSums s;
  for (int k = 0; k < n; ++k) {
    double m = k - j;
    double p = std::norm(c[k]);
    s.norm2 += p;
    s.jz += m * p;
    s.jz2 += m * m * p;
    s.perp_diag += (j * (j + 1.0) - m * m) * p;
    if (k + 1 < n) {
      double a = ladder_coeff(j, k);
      std::complex<double> cross = std::conj(c[k + 1]) * c[k];
      s.t1 += a * cross;
      s.tz += a * (m + 0.5) * cross;
      if (k + 2 < n) {
        s.t2 += a * ladder_coeff(j, k + 1) * std::conj(c[k + 2]) * c[k];
      }
    }
  }
  return s;
}

}  // namespace

SpinState::SpinState(int n_atoms, Eigen::VectorXcd amplitudes)
    : n_atoms_(n_atoms), amplitudes_(std::move(amplitudes)) {
  check_n_atoms(n_atoms_);
  if (amplitudes_.size() != n_atoms_ + 1) {
    std::ostringstream msg;
    msg << "amplitude vector has length " << amplitudes_.size()
        << ", expected " << n_atoms_ + 1;
    throw std::invalid_argument(msg.str());
  }
}

void SpinState::require_normalized(double tol) const {
  double err = norm_error();
  if (!(err < tol)) {
    std::ostringstream msg;
    msg << "state norm drifted: | ||psi|| - 1 | = " << err << " (tol " << tol
        << ")";
    throw std::runtime_error(msg.str());
  }
}

SpinState SpinState::dicke(int n_atoms, int k) {
  check_n_atoms(n_atoms);
  if (k < 0 || k > n_atoms) {
    throw std::invalid_argument("Dicke index out of range");
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_atoms + 1);
  c[k] = 1.0;
  return SpinState(n_atoms, std::move(c));
}

SpinState css_initial(int n_atoms) {
  check_n_atoms(n_atoms);
  const int n = n_atoms + 1;
  Eigen::VectorXcd c(n);
  // log-space binomial amplitudes; the direct product overflows near
  // N ~ 1000.
  const double log_half_n = 0.5 * n_atoms * std::log(2.0);
  const double lg_n = std::lgamma(n_atoms + 1.0);
  for (int k = 0; k < n; ++k) {
    double log_amp = 0.5 * (lg_n - std::lgamma(k + 1.0) -
                            std::lgamma(n_atoms - k + 1.0)) -
                     log_half_n;
    c[k] = std::exp(log_amp);
  }
  return SpinState(n_atoms, std::move(c));
}

SpinState apply_oat(const SpinState& state, double chi_dt) {
  if (!std::isfinite(chi_dt)) {
    throw std::invalid_argument("twisting phase chi_dt must be finite");
  }
  const double j = state.spin_j();
  Eigen::VectorXcd c = state.amplitudes();
  for (int k = 0; k < c.size(); ++k) {
    double m = k - j;
    c[k] *= std::exp(-kImag * (chi_dt * m * m));
  }
  return SpinState(state.n_atoms(), std::move(c));
}

namespace {

SpinState apply_rotation_z(const SpinState& state, double angle) {
  const double j = state.spin_j();
  Eigen::VectorXcd c = state.amplitudes();
  for (int k = 0; k < c.size(); ++k) {
    c[k] *= std::exp(-kImag * (angle * (k - j)));
  }
  return SpinState(state.n_atoms(), std::move(c));
}

SpinState apply_rotation_y(const SpinState& state, double angle) {
  auto rot = RotationCache::instance().y_rotation(state.n_atoms(), angle);
  const auto& c = state.amplitudes();
  Eigen::VectorXcd out(c.size());
  out.real() = (*rot) * c.real();
  out.imag() = (*rot) * c.imag();
  return SpinState(state.n_atoms(), std::move(out));
}

}  // namespace

SpinState apply_rotation(const SpinState& state, CollectiveAxis axis,
                         double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("rotation angle must be finite");
  }
  switch (axis) {
    case CollectiveAxis::Z:
      return apply_rotation_z(state, angle);
    case CollectiveAxis::Y:
      return apply_rotation_y(state, angle);
    case CollectiveAxis::X: {
      // e^{-i a Jx} = Rz(-pi/2) Ry(a) Rz(pi/2), rightmost applied first.
      SpinState s = apply_rotation_z(state, M_PI / 2);
      s = apply_rotation_y(s, angle);
      return apply_rotation_z(s, -M_PI / 2);
    }
  }
  throw std::invalid_argument("unknown rotation axis");
}

SpinState apply_action(const SpinState& state, ActionKind action,
                       double chi_dt) {
  switch (action) {
    case ActionKind::Free:
      return apply_oat(state, chi_dt);
    case ActionKind::PulseX:
      return apply_rotation(apply_oat(state, chi_dt), CollectiveAxis::X,
                            M_PI / 2);
    case ActionKind::PulseY:
      return apply_rotation(apply_oat(state, chi_dt), CollectiveAxis::Y,
                            M_PI / 2);
  }
  throw std::invalid_argument("unknown action code " +
                              std::to_string(static_cast<int>(action)));
}

SpinMoments moments(const SpinState& state) {
  MomentSums s = accumulate(state);
  if (std::abs(std::sqrt(s.norm2) - 1.0) > 1e-8) {
    throw std::runtime_error("moments() requires a normalized state");
  }
  SpinMoments out;
  out.jx = s.t1.real();
  out.jy = s.t1.imag();
  out.jz = s.jz;
  out.jx2 = 0.5 * (s.t2.real() + s.perp_diag);
  out.jy2 = 0.5 * (-s.t2.real() + s.perp_diag);
  out.jz2 = s.jz2;
  return out;
}

std::array<double, 6> observation(const SpinState& state) {
  SpinMoments mom = moments(state);
  double half_n = 0.5 * state.n_atoms();
  double half_n2 = half_n * half_n;
  return {mom.jx / half_n,   mom.jy / half_n,   mom.jz / half_n,
          mom.jx2 / half_n2, mom.jy2 / half_n2, mom.jz2 / half_n2};
}

SpinCovariance collective_covariance(const SpinState& state) {
  MomentSums s = accumulate(state);
  SpinCovariance out;
  out.mean << s.t1.real(), s.t1.imag(), s.jz;
  double jx2 = 0.5 * (s.t2.real() + s.perp_diag);
  double jy2 = 0.5 * (-s.t2.real() + s.perp_diag);
  // Symmetrized cross moments: <{Jx,Jy}>/2 = Im<J+^2>/2,
  // <{Jx,Jz}>/2 = Re<(J+Jz+JzJ+)/2>, <{Jy,Jz}>/2 = Im<(J+Jz+JzJ+)/2>.
  double cxy = 0.5 * s.t2.imag();
  double cxz = s.tz.real();
  double cyz = s.tz.imag();
  out.covariance << jx2, cxy, cxz, cxy, jy2, cyz, cxz, cyz, s.jz2;
  out.covariance -= out.mean * out.mean.transpose();
  return out;
}

}  // namespace spintwist
