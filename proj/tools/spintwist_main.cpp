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

// Command-line surface over the spintwist library: training, rollouts,
// exhaustive oracles, Ramsey precision, robustness sweeps, scaling
// studies, and interval-count scans. Every run writes a config snapshot
// next to its outputs; errors leave one JSON line on stderr.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spintwist/a3c.hpp"
#include "spintwist/csv.hpp"
#include "spintwist/experiments.hpp"
#include "spintwist/metrology.hpp"
#include "spintwist/oracle.hpp"
#include "spintwist/pulse_env.hpp"
#include "spintwist/ramsey.hpp"

namespace {

using namespace spintwist;

std::string error_json(const std::string& message) {
  nlohmann::json doc;
  doc["error"] = message;
  return doc.dump();
}

// Flag values plus presence markers, layered over an optional config
// file so explicit flags always win.
struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int n_atoms = 0;
  double chi = 0.0;
  double total_time = 0.0;
  int n_intervals = 0;
  std::string scheme;
  std::uint64_t seed = 0;
  int workers = 0;
  int episodes = 0;

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* n_atoms_opt = nullptr;
  CLI::Option* chi_opt = nullptr;
  CLI::Option* total_time_opt = nullptr;
  CLI::Option* n_intervals_opt = nullptr;
  CLI::Option* scheme_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* episodes_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  flags.config_opt =
      cmd->add_option("--config", flags.config_path,
                      "Run config JSON file (flags override its fields)");
  flags.out_opt = cmd->add_option("--out", flags.out_dir,
                                  "Output directory (default .)");
  flags.n_atoms_opt =
      cmd->add_option("--n-atoms", flags.n_atoms, "Atom number N");
  flags.chi_opt = cmd->add_option("--chi", flags.chi, "Twisting strength");
  flags.total_time_opt =
      cmd->add_option("--total-time", flags.total_time,
                      "Evolution time T; omit to use the optimal "
                      "squeezing time");
  flags.n_intervals_opt = cmd->add_option("--n-intervals", flags.n_intervals,
                                          "Decision intervals n_t");
  flags.scheme_opt = cmd->add_option("--scheme", flags.scheme,
                                     "Pulse axes: only-x or both-xy");
  flags.seed_opt = cmd->add_option("--seed", flags.seed, "Training seed");
  flags.workers_opt =
      cmd->add_option("--workers", flags.workers, "Async worker count");
  flags.episodes_opt =
      cmd->add_option("--episodes", flags.episodes, "Training episodes");
}

RunConfig assemble_config(const CommonFlags& flags) {
  RunConfig config;
  if (flags.config_opt->count() > 0) {
    config = load_run_config(flags.config_path);
  }
  if (flags.out_opt->count() > 0) config.out_dir = flags.out_dir;
  if (flags.n_atoms_opt->count() > 0) config.physics.n_atoms = flags.n_atoms;
  if (flags.chi_opt->count() > 0) config.physics.chi = flags.chi;
  if (flags.total_time_opt->count() > 0) {
    config.physics.total_time = flags.total_time;
  }
  if (flags.n_intervals_opt->count() > 0) {
    config.physics.n_intervals = flags.n_intervals;
  }
  if (flags.scheme_opt->count() > 0) {
    config.physics.scheme = scheme_from_string(flags.scheme);
  }
  if (flags.seed_opt->count() > 0) config.trainer.seed = flags.seed;
  if (flags.workers_opt->count() > 0) config.trainer.workers = flags.workers;
  if (flags.episodes_opt->count() > 0) {
    config.trainer.episodes = flags.episodes;
  }
  return config;
}

std::string run_tag(const RunConfig& config) {
  std::ostringstream tag;
  tag << to_string(config.physics.scheme) << "_N" << config.physics.n_atoms
      << "_seed" << config.trainer.seed;
  return tag.str();
}

std::filesystem::path prepare_out_dir(const RunConfig& config) {
  std::filesystem::path dir = config.out_dir.empty() ? "." : config.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_snapshot(const RunConfig& config, const std::filesystem::path& dir,
                    const std::string& tag) {
  save_run_config(config, (dir / (tag + "_config.json")).string());
}

void emit_sequence_csv(const PulseSequence& sequence,
                       const std::filesystem::path& path) {
  const EpisodeTrace trace =
      run_episode(config_of(sequence), sequence.actions);
  std::vector<CsvRow> rows;
  rows.push_back(CsvRow{"0", "", csv_number(trace.qfi_series[0])});
  for (size_t t = 0; t < sequence.actions.size(); ++t) {
    rows.push_back(CsvRow{csv_number(static_cast<int>(t) + 1),
                          csv_number(static_cast<int>(sequence.actions[t])),
                          csv_number(trace.qfi_series[t + 1])});
  }
  write_csv_atomic(path.string(), CsvRow{"step", "action", "qfi"}, rows);
}

int cmd_train(const CommonFlags& flags) {
  RunConfig config = assemble_config(flags);
  config.physics = resolved(config.physics);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config);
  write_snapshot(config, dir, tag);

  const TrainResult result = train(config.physics, config.trainer);

  save_checkpoint((dir / (tag + "_checkpoint.json")).string(),
                  result.networks, result.actor_adam, result.critic_adam,
                  config.physics.scheme);
  save_pulse_sequence(result.best_sequence,
                      (dir / (tag + "_best_sequence.json")).string());

  std::vector<CsvRow> rows;
  rows.reserve(result.log.entries.size());
  for (const TrainLogEntry& entry : result.log.entries) {
    rows.push_back(CsvRow{
        csv_number(entry.episode), csv_number(entry.worker),
        csv_number(entry.final_qfi), csv_number(entry.best_qfi),
        csv_number(entry.actor_loss), csv_number(entry.critic_loss)});
  }
  write_csv_atomic(
      (dir / (tag + "_learning_curve.csv")).string(),
      CsvRow{"episode", "worker", "final_qfi", "best_qfi", "actor_loss",
             "critic_loss"},
      rows);
  emit_sequence_csv(result.best_sequence,
                    dir / (tag + "_best_qfi_trace.csv"));

  std::cout << "best_qfi=" << csv_number(result.best_qfi)
            << " pulses=" << count_pulses(result.best_sequence.actions)
            << " episodes=" << result.log.entries.size()
            << " wall_seconds=" << csv_number(result.log.wall_seconds)
            << " out=" << (dir / tag).string() << "_*\n";
  return 0;
}

int cmd_rollout(const CommonFlags& flags, const std::string& checkpoint_path) {
  RunConfig config = assemble_config(flags);
  const LoadedCheckpoint checkpoint = load_checkpoint(checkpoint_path);
  config.physics.scheme = checkpoint.scheme;
  config.physics = resolved(config.physics);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config) + "_rollout";
  write_snapshot(config, dir, tag);

  const bool observe_time = checkpoint.networks.actor.input_size() == 7;
  const PulseSequence sequence =
      greedy_rollout(checkpoint.networks.actor, config.physics, observe_time);
  save_pulse_sequence(sequence, (dir / (tag + "_sequence.json")).string());
  emit_sequence_csv(sequence, dir / (tag + "_qfi_trace.csv"));

  const EpisodeTrace trace = run_episode(config.physics, sequence.actions);
  std::cout << "final_qfi=" << csv_number(trace.qfi_series.back())
            << " pulses=" << count_pulses(sequence.actions) << " out="
            << (dir / tag).string() << "_*\n";
  return 0;
}

int cmd_oracle(const CommonFlags& flags, std::int64_t max_sequences,
               bool keep_table) {
  RunConfig config = assemble_config(flags);
  config.physics = resolved(config.physics);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config) + "_oracle";
  write_snapshot(config, dir, tag);

  const OracleResult result =
      brute_force_oracle(config.physics, max_sequences, keep_table);
  save_pulse_sequence(result.best_sequence,
                      (dir / (tag + "_best_sequence.json")).string());
  if (keep_table) {
    std::vector<CsvRow> rows;
    rows.reserve(result.table.size());
    for (const OracleEntry& entry : result.table) {
      std::string actions;
      for (ActionKind action : entry.actions) {
        actions += static_cast<char>('0' + static_cast<int>(action));
      }
      rows.push_back(CsvRow{actions, csv_number(entry.final_qfi)});
    }
    write_csv_atomic((dir / (tag + "_table.csv")).string(),
                     CsvRow{"actions", "final_qfi"}, rows);
  }
  std::cout << "best_qfi=" << csv_number(result.best_qfi)
            << " evaluated=" << result.evaluated
            << " pulses=" << count_pulses(result.best_sequence.actions)
            << "\n";
  return 0;
}

int cmd_ramsey(const CommonFlags& flags, const std::string& sequence_path,
               double phi0) {
  RunConfig config = assemble_config(flags);
  const PulseSequence sequence = load_pulse_sequence(sequence_path);
  config.physics = config_of(sequence);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config) + "_ramsey";
  write_snapshot(config, dir, tag);

  const EpisodeTrace trace = run_episode(config.physics, sequence.actions);
  const RamseyResult result = delta_phi(trace.final_state, sequence, phi0);
  const double qfi = trace.qfi_series.back();

  write_csv_atomic(
      (dir / (tag + ".csv")).string(),
      CsvRow{"phi0", "mean_jz", "var_jz", "slope", "delta_phi", "qfi",
             "crb"},
      {CsvRow{csv_number(result.phi), csv_number(result.mean_jz),
              csv_number(result.var_jz), csv_number(result.slope),
              csv_number(result.delta_phi), csv_number(qfi),
              csv_number(1.0 / std::sqrt(qfi))}});
  std::cout << "delta_phi=" << csv_number(result.delta_phi)
            << " slope=" << csv_number(result.slope)
            << " crb=" << csv_number(1.0 / std::sqrt(qfi)) << "\n";
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::string& sequence_path) {
  RunConfig config = assemble_config(flags);
  const PulseSequence sequence = load_pulse_sequence(sequence_path);
  config.physics = config_of(sequence);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config) + "_sweep";
  write_snapshot(config, dir, tag);

  const SweepTable table = robustness_sweep(sequence);
  std::vector<CsvRow> rows;
  rows.reserve(table.rows.size());
  for (const SweepRow& row : table.rows) {
    rows.push_back(CsvRow{csv_number(row.n_actual), csv_number(row.qfi),
                          csv_number(row.qfi_inv_sqrt),
                          csv_number(row.delta_phi)});
  }
  write_csv_atomic((dir / (tag + ".csv")).string(),
                   CsvRow{"n_actual", "qfi", "qfi_inv_sqrt", "delta_phi"},
                   rows);
  std::cout << "rows=" << table.rows.size() << " n_train=" << table.n_train
            << " out=" << (dir / (tag + ".csv")).string() << "\n";
  return 0;
}

int cmd_scaling(const CommonFlags& flags, std::vector<int> atom_numbers,
                int seeds_per_n) {
  RunConfig config = assemble_config(flags);
  const auto dir = prepare_out_dir(config);
  std::ostringstream tag_stream;
  tag_stream << to_string(config.physics.scheme) << "_seed"
             << config.trainer.seed << "_scaling";
  const std::string tag = tag_stream.str();
  write_snapshot(config, dir, tag);

  const ScalingStudy study = scaling_study(
      atom_numbers, config.physics.scheme, config.trainer, seeds_per_n);

  std::vector<CsvRow> rows;
  rows.reserve(study.rows.size());
  for (const ScalingRow& row : study.rows) {
    std::string actions;
    for (ActionKind action : row.actions) {
      actions += static_cast<char>('0' + static_cast<int>(action));
    }
    rows.push_back(CsvRow{csv_number(row.n_atoms),
                          csv_number(row.total_time),
                          csv_number(static_cast<std::int64_t>(row.seed)),
                          csv_number(row.qfi), csv_number(row.qfi_inv_sqrt),
                          csv_number(row.delta_phi),
                          csv_number(row.pulse_count), actions});
  }
  write_csv_atomic(
      (dir / (tag + ".csv")).string(),
      CsvRow{"n_atoms", "total_time", "seed", "qfi", "qfi_inv_sqrt",
             "delta_phi", "pulse_count", "actions"},
      rows);
  write_csv_atomic(
      (dir / (tag + "_fits.csv")).string(),
      CsvRow{"quantity", "prefactor", "exponent"},
      {CsvRow{"qfi_inverse", csv_number(study.qfi_inverse_fit.prefactor),
              csv_number(study.qfi_inverse_fit.exponent)},
       CsvRow{"delta_phi", csv_number(study.delta_phi_fit.prefactor),
              csv_number(study.delta_phi_fit.exponent)}});
  std::cout << "delta_phi_fit: a=" << csv_number(study.delta_phi_fit.prefactor)
            << " b=" << csv_number(study.delta_phi_fit.exponent)
            << " out=" << (dir / (tag + ".csv")).string() << "\n";
  return 0;
}

int cmd_nt_scan(const CommonFlags& flags, std::vector<int> interval_counts) {
  RunConfig config = assemble_config(flags);
  config.physics = resolved(config.physics);
  const auto dir = prepare_out_dir(config);
  const std::string tag = run_tag(config) + "_nt_scan";
  write_snapshot(config, dir, tag);

  const std::vector<NtScanRow> rows =
      nt_scan(config.physics, config.trainer, interval_counts);
  std::vector<CsvRow> csv_rows;
  csv_rows.reserve(rows.size());
  for (const NtScanRow& row : rows) {
    csv_rows.push_back(CsvRow{csv_number(row.n_intervals),
                              csv_number(row.best_qfi),
                              csv_number(row.pulse_count)});
  }
  write_csv_atomic((dir / (tag + ".csv")).string(),
                   CsvRow{"n_intervals", "best_qfi", "pulse_count"},
                   csv_rows);
  std::cout << "rows=" << rows.size() << " out="
            << (dir / (tag + ".csv")).string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spintwist: pulse-sequence discovery for one-axis-twisting "
      "metrology.\n"
      "All tables are CSV with a header row; JSON artifacts carry a "
      "format_version field."};
  app.require_subcommand(1);

  CommonFlags train_flags;
  auto* train_cmd = app.add_subcommand(
      "train",
      "Train the actor-critic and store checkpoint, best sequence, and "
      "learning curve (CSV: episode,worker,final_qfi,best_qfi,actor_loss,"
      "critic_loss)");
  add_common_flags(train_cmd, train_flags);

  CommonFlags rollout_flags;
  std::string checkpoint_path;
  auto* rollout_cmd = app.add_subcommand(
      "rollout",
      "Greedy rollout of a trained checkpoint (CSV: step,action,qfi)");
  add_common_flags(rollout_cmd, rollout_flags);
  rollout_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint JSON")
      ->required();

  CommonFlags oracle_flags;
  std::int64_t max_sequences = kDefaultOracleBudget;
  bool oracle_table = false;
  auto* oracle_cmd = app.add_subcommand(
      "oracle",
      "Exhaustive sequence search (table CSV: actions,final_qfi)");
  add_common_flags(oracle_cmd, oracle_flags);
  oracle_cmd->add_option("--max-sequences", max_sequences,
                         "Combinatorial budget");
  oracle_cmd->add_flag("--table", oracle_table, "Also write the full table");

  CommonFlags ramsey_flags;
  std::string ramsey_sequence;
  double phi0 = kDefaultWorkingPoint;
  auto* ramsey_cmd = app.add_subcommand(
      "ramsey",
      "Time-reversal Ramsey precision of a stored sequence (CSV: phi0,"
      "mean_jz,var_jz,slope,delta_phi,qfi,crb)");
  add_common_flags(ramsey_cmd, ramsey_flags);
  ramsey_cmd->add_option("--sequence", ramsey_sequence, "Pulse sequence JSON")
      ->required();
  ramsey_cmd->add_option("--phi0", phi0, "Working point in radians");

  CommonFlags sweep_flags;
  std::string sweep_sequence;
  auto* sweep_cmd = app.add_subcommand(
      "sweep",
      "Atom-number robustness sweep of a stored sequence (CSV: n_actual,"
      "qfi,qfi_inv_sqrt,delta_phi)");
  add_common_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--sequence", sweep_sequence, "Pulse sequence JSON")
      ->required();

  CommonFlags scaling_flags;
  std::vector<int> atom_numbers{10, 20, 50, 100, 200, 500, 1000};
  int seeds_per_n = 3;
  auto* scaling_cmd = app.add_subcommand(
      "scaling",
      "Train across atom numbers and fit power laws (CSV: n_atoms,"
      "total_time,seed,qfi,qfi_inv_sqrt,delta_phi,pulse_count,actions; "
      "fits CSV: quantity,prefactor,exponent)");
  add_common_flags(scaling_cmd, scaling_flags);
  scaling_cmd->add_option("--n-list", atom_numbers, "Atom numbers")
      ->delimiter(',');
  scaling_cmd->add_option("--seeds-per-n", seeds_per_n,
                          "Training seeds per N");

  CommonFlags nt_flags;
  std::vector<int> interval_counts{50, 100};
  auto* nt_cmd = app.add_subcommand(
      "nt-scan",
      "Re-train across interval counts (CSV: n_intervals,best_qfi,"
      "pulse_count)");
  add_common_flags(nt_cmd, nt_flags);
  nt_cmd->add_option("--nt-list", interval_counts, "Interval counts")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& err) {
    std::cerr << error_json(err.what()) << "\n";
    return err.get_exit_code() == 0 ? 1 : err.get_exit_code();
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_flags);
    if (rollout_cmd->parsed()) return cmd_rollout(rollout_flags,
                                                  checkpoint_path);
    if (oracle_cmd->parsed()) {
      return cmd_oracle(oracle_flags, max_sequences, oracle_table);
    }
    if (ramsey_cmd->parsed()) return cmd_ramsey(ramsey_flags, ramsey_sequence,
                                                phi0);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sweep_sequence);
    if (scaling_cmd->parsed()) {
      return cmd_scaling(scaling_flags, atom_numbers, seeds_per_n);
    }
    if (nt_cmd->parsed()) return cmd_nt_scan(nt_flags, interval_counts);
    std::cerr << error_json("no subcommand selected") << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << error_json(err.what()) << "\n";
    return 1;
  }
}
