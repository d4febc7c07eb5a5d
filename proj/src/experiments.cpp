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

#include "spintwist/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "spintwist/metrology.hpp"
#include "spintwist/ramsey.hpp"

namespace spintwist {

namespace {

nlohmann::json physics_to_json(const PhysicsConfig& physics) {
  nlohmann::json doc;
  doc["n_atoms"] = physics.n_atoms;
  doc["chi"] = physics.chi;
  doc["total_time"] = physics.total_time;
  doc["n_intervals"] = physics.n_intervals;
  doc["scheme"] = to_string(physics.scheme);
  return doc;
}

PhysicsConfig physics_from_json(const nlohmann::json& doc) {
  PhysicsConfig physics;
  physics.n_atoms = doc.at("n_atoms").get<int>();
  physics.chi = doc.at("chi").get<double>();
  physics.total_time = doc.at("total_time").get<double>();
  physics.n_intervals = doc.at("n_intervals").get<int>();
  physics.scheme = scheme_from_string(doc.at("scheme").get<std::string>());
  return physics;
}

nlohmann::json trainer_to_json(const TrainerConfig& trainer) {
  nlohmann::json doc;
  doc["hidden"] = trainer.hidden;
  doc["actor_learning_rate"] = trainer.actor_learning_rate;
  doc["critic_learning_rate"] = trainer.critic_learning_rate;
  doc["entropy_coefficient"] = trainer.entropy_coefficient;
  doc["gradient_clip"] = trainer.gradient_clip;
  doc["workers"] = trainer.workers;
  doc["episodes"] = trainer.episodes;
  doc["seed"] = trainer.seed;
  doc["observe_time"] = trainer.observe_time;
  return doc;
}

TrainerConfig trainer_from_json(const nlohmann::json& doc) {
  TrainerConfig trainer;
  trainer.hidden = doc.at("hidden").get<std::vector<int>>();
  trainer.actor_learning_rate = doc.at("actor_learning_rate").get<double>();
  trainer.critic_learning_rate = doc.at("critic_learning_rate").get<double>();
  trainer.entropy_coefficient = doc.at("entropy_coefficient").get<double>();
  trainer.gradient_clip = doc.at("gradient_clip").get<double>();
  trainer.workers = doc.at("workers").get<int>();
  trainer.episodes = doc.at("episodes").get<int>();
  trainer.seed = doc.at("seed").get<std::uint64_t>();
  trainer.observe_time = doc.at("observe_time").get<bool>();
  return trainer;
}

double sequence_final_qfi(const PulseSequence& sequence) {
  const EpisodeTrace trace = run_episode(config_of(sequence),
                                         sequence.actions);
  return trace.qfi_series.back();
}

std::uint64_t seed_for(std::uint64_t base, int index) {
  return base + static_cast<std::uint64_t>(index);
}

}  // namespace

std::string to_json(const RunConfig& config) {
  nlohmann::json doc;
  doc["physics"] = physics_to_json(config.physics);
  doc["trainer"] = trainer_to_json(config.trainer);
  doc["out_dir"] = config.out_dir;
  return doc.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("bad run config JSON: ") +
                                err.what());
  }
  RunConfig config;
  config.physics = physics_from_json(doc.at("physics"));
  config.trainer = trainer_from_json(doc.at("trainer"));
  config.out_dir = doc.at("out_dir").get<std::string>();
  return config;
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << to_json(config);
  if (!out) {
    throw std::runtime_error("short write to '" + path + "'");
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json(buffer.str());
}

std::vector<double> default_sweep_factors() {
  std::vector<double> factors;
  for (int i = 0; i <= 8; ++i) factors.push_back(0.80 + 0.05 * i);
  return factors;
}

SweepTable robustness_sweep(const PulseSequence& sequence,
                            const std::vector<double>& factors) {
  config_of(sequence);  // validates
  SweepTable table;
  table.n_train = sequence.n_atoms;
  table.provenance = "replay";
  table.rows.reserve(factors.size());
  for (double factor : factors) {
    if (factor < 0.8 - 1e-12 || factor > 1.2 + 1e-12) {
      throw std::invalid_argument("sweep factor outside [0.8, 1.2]");
    }
    const int n_actual = std::max(
        1, static_cast<int>(std::lround(factor * sequence.n_atoms)));
    PhysicsConfig physics = config_of(sequence);
    physics.n_atoms = n_actual;
    const EpisodeTrace trace = run_episode(physics, sequence.actions);
    const SpinState& prepared = trace.final_state;
    SweepRow row;
    row.n_actual = n_actual;
    row.qfi = trace.qfi_series.back();
    row.qfi_inv_sqrt = 1.0 / std::sqrt(row.qfi);
    row.delta_phi = delta_phi(prepared, sequence).delta_phi;
    table.rows.push_back(row);
  }
  return table;
}

PowerLawFit fit_power_law(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("power-law fit needs at least two points");
  }
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xx = 0.0;
  double sum_xy = 0.0;
  for (const auto& [n, y] : points) {
    if (!(n > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("power-law fit needs positive data");
    }
    const double x = std::log(n);
    const double ly = std::log(y);
    sum_x += x;
    sum_y += ly;
    sum_xx += x * x;
    sum_xy += x * ly;
  }
  const double count = static_cast<double>(points.size());
  const double denom = count * sum_xx - sum_x * sum_x;
  if (std::abs(denom) < 1e-12) {
    throw std::invalid_argument("power-law fit underdetermined: "
                                "need two distinct N");
  }
  const double slope = (count * sum_xy - sum_x * sum_y) / denom;
  const double intercept = (sum_y - slope * sum_x) / count;
  return PowerLawFit{std::exp(intercept), -slope};
}

SequenceProvider training_provider(const TrainerConfig& base) {
  return [base](const PhysicsConfig& physics, std::uint64_t seed) {
    TrainerConfig trainer = base;
    trainer.seed = seed;
    return train(physics, trainer).best_sequence;
  };
}

ScalingStudy scaling_study(const std::vector<int>& atom_numbers, Scheme scheme,
                           const TrainerConfig& trainer, int seeds_per_n,
                           const SequenceProvider& provider) {
  if (atom_numbers.size() < 3) {
    throw std::invalid_argument("scaling study needs at least three N");
  }
  if (seeds_per_n < 1) {
    throw std::invalid_argument("seeds_per_n must be positive");
  }
  ScalingStudy study;
  study.rows.reserve(atom_numbers.size());
  for (int n : atom_numbers) {
    PhysicsConfig physics;
    physics.n_atoms = n;
    physics.scheme = scheme;
    physics.n_intervals = 50;
    physics = resolved(physics);

    bool have_best = false;
    PulseSequence best;
    double best_qfi = 0.0;
    std::uint64_t best_seed = 0;
    for (int s = 0; s < seeds_per_n; ++s) {
      const std::uint64_t seed = seed_for(trainer.seed, s);
      PulseSequence candidate = provider(physics, seed);
      const double qfi = sequence_final_qfi(candidate);
      if (!have_best || qfi > best_qfi) {
        have_best = true;
        best = std::move(candidate);
        best_qfi = qfi;
        best_seed = seed;
      }
    }
    if (!have_best) {
      throw std::runtime_error("no trained sequence for N = " +
                               std::to_string(n));
    }

    const EpisodeTrace trace = run_episode(physics, best.actions);
    ScalingRow row;
    row.n_atoms = n;
    row.total_time = physics.total_time;
    row.seed = best_seed;
    row.qfi = best_qfi;
    row.qfi_inv_sqrt = 1.0 / std::sqrt(best_qfi);
    row.delta_phi = delta_phi(trace.final_state, best).delta_phi;
    row.pulse_count = count_pulses(best.actions);
    row.actions = best.actions;
    study.rows.push_back(std::move(row));
  }

  std::vector<std::pair<double, double>> inverse_points;
  std::vector<std::pair<double, double>> phi_points;
  for (const ScalingRow& row : study.rows) {
    inverse_points.emplace_back(row.n_atoms, 1.0 / row.qfi);
    phi_points.emplace_back(row.n_atoms, row.delta_phi);
  }
  study.qfi_inverse_fit = fit_power_law(inverse_points);
  study.delta_phi_fit = fit_power_law(phi_points);
  return study;
}

ScalingStudy scaling_study(const std::vector<int>& atom_numbers, Scheme scheme,
                           const TrainerConfig& trainer, int seeds_per_n) {
  return scaling_study(atom_numbers, scheme, trainer, seeds_per_n,
                       training_provider(trainer));
}

std::vector<NtScanRow> nt_scan(const PhysicsConfig& base,
                               const TrainerConfig& trainer,
                               const std::vector<int>& interval_counts) {
  const PhysicsConfig resolved_base = resolved(base);
  std::vector<NtScanRow> rows;
  rows.reserve(interval_counts.size());
  for (int n_t : interval_counts) {
    PhysicsConfig physics = resolved_base;
    physics.n_intervals = n_t;
    validate(physics);
    const TrainResult result = train(physics, trainer);
    NtScanRow row;
    row.n_intervals = n_t;
    row.best_qfi = result.best_qfi;
    row.pulse_count = count_pulses(result.best_sequence.actions);
    rows.push_back(row);
  }
  return rows;
}

int count_pulses(const std::vector<ActionKind>& actions) {
  int count = 0;
  for (ActionKind action : actions) {
    if (action != ActionKind::Free) ++count;
  }
  return count;
}

}  // namespace spintwist
