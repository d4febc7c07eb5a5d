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

#ifndef SPINTWIST_ROTATION_CACHE_HPP
#define SPINTWIST_ROTATION_CACHE_HPP

#include <Eigen/Dense>
#include <list>
#include <map>
#include <memory>
#include <mutex>

namespace spintwist {

/// Process-wide cache of the real orthogonal matrices representing
/// e^{-i angle J_y} for spin j = N/2 in the Dicke basis. Matrices are
/// immutable once built; lookups hand out shared ownership so a cached
/// entry may be evicted while still in use.
class RotationCache {
 public:
  static RotationCache& instance();

  std::shared_ptr<const Eigen::MatrixXd> y_rotation(int n_atoms,
                                                    double angle);

  void clear();
  void set_capacity(std::size_t capacity);

 private:
  RotationCache() = default;

  using Key = std::pair<int, double>;
  std::mutex mutex_;
  std::size_t capacity_ = 16;
  std::list<Key> lru_;
  std::map<Key, std::pair<std::shared_ptr<const Eigen::MatrixXd>,
                          std::list<Key>::iterator>>
      entries_;
};

/// Builds e^{-i angle J_y} as a real orthogonal (N+1)x(N+1) matrix via the
/// eigendecomposition of the tridiagonal generator. Exposed for tests;
/// normal callers go through apply_rotation.
Eigen::MatrixXd build_y_rotation(int n_atoms, double angle);

}  // namespace spintwist

#endif
