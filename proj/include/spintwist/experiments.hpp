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

#ifndef SPINTWIST_EXPERIMENTS_HPP
#define SPINTWIST_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spintwist/a3c.hpp"
#include "spintwist/pulse_env.hpp"

namespace spintwist {

struct RunConfig {
  PhysicsConfig physics;
  TrainerConfig trainer;
  std::string out_dir = ".";
};

std::string to_json(const RunConfig& config);
RunConfig run_config_from_json(const std::string& text);
void save_run_config(const RunConfig& config, const std::string& path);
RunConfig load_run_config(const std::string& path);

struct SweepRow {
  int n_actual = 0;
  double qfi = 0.0;
  double qfi_inv_sqrt = 0.0;
  double delta_phi = 0.0;
};

struct SweepTable {
  int n_train = 0;
  std::string provenance;
  std::vector<SweepRow> rows;
};

/// Nine relative atom numbers, 0.80 to 1.20 in steps of 0.05.
std::vector<double> default_sweep_factors();

/// Replays the fixed action list on systems of deviated atom number
/// (factor times the training N, rounded, floored at 1) and reports QFI
/// and Ramsey precision per point. Factors must lie in [0.8, 1.2].
SweepTable robustness_sweep(const PulseSequence& sequence,
                            const std::vector<double>& factors =
                                default_sweep_factors());

struct PowerLawFit {
  double prefactor = 0.0;  // a in y = a N^{-b}
  double exponent = 0.0;   // b
};

/// Least squares in log-log space for y = a N^{-b}. Throws
/// std::invalid_argument on fewer than two distinct N or non-positive y.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct ScalingRow {
  int n_atoms = 0;
  double total_time = 0.0;
  std::uint64_t seed = 0;  // seed of the winning run
  double qfi = 0.0;
  double qfi_inv_sqrt = 0.0;
  double delta_phi = 0.0;
  int pulse_count = 0;
  std::vector<ActionKind> actions;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  PowerLawFit qfi_inverse_fit;  // F_Q^{-1} vs N
  PowerLawFit delta_phi_fit;    // delta_phi vs N
};

/// Produces the best sequence for one resolved physics config and seed.
using SequenceProvider =
    std::function<PulseSequence(const PhysicsConfig&, std::uint64_t)>;

/// Trains via `train` and returns the best episode sequence.
SequenceProvider training_provider(const TrainerConfig& base);

/// One row per atom number: best of `seeds_per_n` provider runs, ranked
/// by final QFI, with T = optimal_squeezing_time(N) per point. Needs at
/// least three atom numbers.
ScalingStudy scaling_study(const std::vector<int>& atom_numbers, Scheme scheme,
                           const TrainerConfig& trainer, int seeds_per_n,
                           const SequenceProvider& provider);

ScalingStudy scaling_study(const std::vector<int>& atom_numbers, Scheme scheme,
                           const TrainerConfig& trainer, int seeds_per_n = 3);

struct NtScanRow {
  int n_intervals = 0;
  double best_qfi = 0.0;
  int pulse_count = 0;
};

/// Re-trains at each interval count under the same trainer budget,
/// holding N, chi, and T fixed.
std::vector<NtScanRow> nt_scan(const PhysicsConfig& base,
                               const TrainerConfig& trainer,
                               const std::vector<int>& interval_counts);

int count_pulses(const std::vector<ActionKind>& actions);

}  // namespace spintwist

#endif
