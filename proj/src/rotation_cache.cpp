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

#include "spintwist/rotation_cache.hpp"

#include <cmath>
#include <stdexcept>

namespace spintwist {

Eigen::MatrixXd build_y_rotation(int n_atoms, double angle) {
  if (n_atoms < 1) {
    throw std::invalid_argument("rotation requires at least one atom");
  }
  const int n = n_atoms + 1;
  const double j = 0.5 * n_atoms;

  // P J_y P^dag with P = diag(i^k) is the real symmetric tridiagonal J_x
  // matrix; its eigendecomposition gives e^{-i angle J_y} =
  // P^dag V e^{-i angle L} V^T P, which is real because the tridiagonal
  // has zero diagonal (chessboard sparsity of cos/sin series).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    double m = k - j;
    off[k] = 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("tridiagonal eigendecomposition failed");
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd& lam = solver.eigenvalues();

  Eigen::ArrayXd cos_row = (angle * lam.array()).cos();
  Eigen::ArrayXd sin_row = (angle * lam.array()).sin();
  Eigen::MatrixXd cos_part =
      (v.array().rowwise() * cos_row.transpose()).matrix() * v.transpose();
  Eigen::MatrixXd sin_part =
      (v.array().rowwise() * sin_row.transpose()).matrix() * v.transpose();

  Eigen::MatrixXd rot(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      switch ((b - a) & 3) {
        case 0: rot(a, b) = cos_part(a, b); break;
        case 1: rot(a, b) = sin_part(a, b); break;
        case 2: rot(a, b) = -cos_part(a, b); break;
        default: rot(a, b) = -sin_part(a, b); break;
      }
    }
  }
  return rot;
}

RotationCache& RotationCache::instance() {
  static RotationCache cache;
  return cache;
}

std::shared_ptr<const Eigen::MatrixXd> RotationCache::y_rotation(
    int n_atoms, double angle) {
  Key key{n_atoms, angle};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) {
      lru_.erase(it->second.second);
      lru_.push_front(key);
      it->second.second = lru_.begin();
      return it->second.first;
    }
  }
  // Built outside the lock; concurrent misses may build twice, the second
  // insert wins and both results are identical.
  auto built = std::make_shared<const Eigen::MatrixXd>(
      build_y_rotation(n_atoms, angle));
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) {
    return it->second.first;
  }
  lru_.push_front(key);
  entries_[key] = {built, lru_.begin()};
  while (entries_.size() > capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
  }
  return built;
}

void RotationCache::clear() {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.clear();
  lru_.clear();
}

void RotationCache::set_capacity(std::size_t capacity) {
  std::lock_guard<std::mutex> lock(mutex_);
  capacity_ = capacity == 0 ? 1 : capacity;
  while (entries_.size() > capacity_) {
    entries_.erase(lru_.back());
    lru_.pop_back();
  }
}

}  // namespace spintwist
