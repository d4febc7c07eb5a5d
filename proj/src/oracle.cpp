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

#include "spintwist/oracle.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "spintwist/metrology.hpp"

namespace spintwist {

namespace {

struct SubtreeResult {
  std::vector<ActionKind> best_actions;
  double best_qfi = -std::numeric_limits<double>::infinity();
  std::int64_t evaluated = 0;
  std::vector<OracleEntry> table;
};

void dfs(const SpinState& state, int depth, int n_intervals, int n_actions,
         double chi_dt, bool keep_table, std::vector<ActionKind>& prefix,
         SubtreeResult& out) {
  if (depth == n_intervals) {
    const double qfi = qfi_generator_z(state);
    out.evaluated += 1;
    if (keep_table) out.table.push_back(OracleEntry{prefix, qfi});
    if (qfi > out.best_qfi) {
      out.best_qfi = qfi;
      out.best_actions = prefix;
    }
    return;
  }
  for (int code = 0; code < n_actions; ++code) {
    const ActionKind action = static_cast<ActionKind>(code);
    prefix.push_back(action);
    dfs(apply_action(state, action, chi_dt), depth + 1, n_intervals,
        n_actions, chi_dt, keep_table, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

OracleResult brute_force_oracle(const PhysicsConfig& config,
                                std::int64_t max_sequences, bool keep_table) {
  validate(config);
  if (max_sequences < 1) {
    throw std::invalid_argument("max_sequences must be positive");
  }
  const int n_actions = action_count(config.scheme);
  const double total = std::pow(static_cast<double>(n_actions),
                                static_cast<double>(config.n_intervals));
  if (total > static_cast<double>(max_sequences)) {
    throw std::invalid_argument("combinatorial budget exceeded: " +
                                std::to_string(n_actions) + "^" +
                                std::to_string(config.n_intervals) +
                                " sequences > " +
                                std::to_string(max_sequences));
  }

  const double chi_dt = config.chi * interval_duration(config);
  const SpinState root = css_initial(config.n_atoms);

  // One chunk per first action; merged in code order so ties stay
  // lexicographic.
  std::vector<SubtreeResult> chunks(static_cast<size_t>(n_actions));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_actions));
  for (int code = 0; code < n_actions; ++code) {
    pool.emplace_back([&, code]() {
      const ActionKind action = static_cast<ActionKind>(code);
      std::vector<ActionKind> prefix{action};
      dfs(apply_action(root, action, chi_dt), 1, config.n_intervals,
          n_actions, chi_dt, keep_table, prefix,
          chunks[static_cast<size_t>(code)]);
    });
  }
  for (std::thread& t : pool) t.join();

  SubtreeResult merged;
  for (SubtreeResult& chunk : chunks) {
    merged.evaluated += chunk.evaluated;
    if (chunk.best_qfi > merged.best_qfi) {
      merged.best_qfi = chunk.best_qfi;
      merged.best_actions = std::move(chunk.best_actions);
    }
    if (keep_table) {
      merged.table.insert(merged.table.end(),
                          std::make_move_iterator(chunk.table.begin()),
                          std::make_move_iterator(chunk.table.end()));
    }
  }

  OracleResult result{make_sequence(config, std::move(merged.best_actions)),
                      merged.best_qfi, merged.evaluated,
                      std::move(merged.table)};
  return result;
}

}  // namespace spintwist
