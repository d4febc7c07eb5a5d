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

#ifndef SPINTWIST_PULSE_ENV_HPP
#define SPINTWIST_PULSE_ENV_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spintwist/spin_state.hpp"

namespace spintwist {

enum class Scheme { OnlyX, BothXY };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Number of actions available under a scheme: Free and PulseX, plus
/// PulseY when both axes are driven.
int action_count(Scheme scheme);

struct PhysicsConfig {
  int n_atoms = 100;
  double chi = 1.0;
  // Non-positive means "derive from optimal_squeezing_time"; call
  // resolved() before running episodes.
  double total_time = 0.0;
  int n_intervals = 50;
  Scheme scheme = Scheme::OnlyX;
};

// Twisting times used in published runs at N = 100 and N = 1000.
inline constexpr double kPresetTimeN100 = 0.13;
inline constexpr double kPresetTimeN1000 = 0.015;

/// Throws std::invalid_argument on non-positive sizes or times.
void validate(const PhysicsConfig& config);

/// Copy of config with total_time filled in from
/// optimal_squeezing_time when it was left non-positive.
PhysicsConfig resolved(const PhysicsConfig& config);

double interval_duration(const PhysicsConfig& config);

struct EpisodeTrace {
  std::vector<std::array<double, 6>> observations;  // s_t, one per decision
  std::vector<ActionKind> actions;                  // length n_intervals
  std::vector<double> qfi_series;                   // length n_intervals + 1
  std::vector<double> rewards;                      // future-max of qfi_series
  SpinState final_state;
};

/// Maps (observation, step index) to the next action.
using ActionSource =
    std::function<ActionKind(const std::array<double, 6>&, int)>;

/// Evolves the coherent initial state for n_intervals steps, one action
/// per interval, twisting over chi T / n_t before each pulse. Throws
/// std::invalid_argument for actions outside the scheme.
EpisodeTrace run_episode(const PhysicsConfig& config,
                         const ActionSource& source);

/// Replays a fixed action list; its length must equal n_intervals.
EpisodeTrace run_episode(const PhysicsConfig& config,
                         const std::vector<ActionKind>& actions);

/// r_t = max of qfi_series over [t, end], so the tail element maps to
/// itself and the sequence is non-increasing.
std::vector<double> assign_rewards(const std::vector<double>& qfi_series);

/// Rewards divided by N^2, placing the Heisenberg limit at 1.
std::vector<double> normalized_rewards(const std::vector<double>& rewards,
                                       int n_atoms);

struct PulseSequence {
  int format_version = 1;
  int n_atoms = 0;
  double chi = 1.0;
  double total_time = 0.0;
  int n_intervals = 0;
  Scheme scheme = Scheme::OnlyX;
  std::vector<ActionKind> actions;
};

PulseSequence make_sequence(const PhysicsConfig& config,
                            std::vector<ActionKind> actions);
PhysicsConfig config_of(const PulseSequence& sequence);

std::string to_json(const PulseSequence& sequence);
PulseSequence sequence_from_json(const std::string& text);

void save_pulse_sequence(const PulseSequence& sequence,
                         const std::string& path);
PulseSequence load_pulse_sequence(const std::string& path);

}  // namespace spintwist

#endif
