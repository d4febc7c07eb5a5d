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

#ifndef SPINTWIST_ORACLE_HPP
#define SPINTWIST_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "spintwist/pulse_env.hpp"

namespace spintwist {

struct OracleEntry {
  std::vector<ActionKind> actions;
  double final_qfi = 0.0;
};

struct OracleResult {
  PulseSequence best_sequence;
  double best_qfi = 0.0;
  std::int64_t evaluated = 0;
  // Filled only on request; lexicographic by action codes.
  std::vector<OracleEntry> table;
};

inline constexpr std::int64_t kDefaultOracleBudget = 20000;

/// Exhaustive search over every action string of length n_intervals,
/// ranked by final-step QFI. Intermediate states are shared along
/// common prefixes; the top-level branches run as parallel chunks.
/// Ties resolve to the lexicographically first sequence. Throws
/// std::invalid_argument when the action-string count exceeds
/// max_sequences.
OracleResult brute_force_oracle(const PhysicsConfig& config,
                                std::int64_t max_sequences =
                                    kDefaultOracleBudget,
                                bool keep_table = false);

}  // namespace spintwist

#endif
