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

#include "spintwist/pulse_env.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "spintwist/metrology.hpp"

namespace spintwist {

namespace {

ActionKind action_from_code(int code) {
  switch (code) {
    case 0:
      return ActionKind::Free;
    case 1:
      return ActionKind::PulseX;
    case 2:
      return ActionKind::PulseY;
    default:
      throw std::invalid_argument("unknown action code " +
                                  std::to_string(code));
  }
}

void check_action_legal(ActionKind action, Scheme scheme) {
  if (scheme == Scheme::OnlyX && action == ActionKind::PulseY) {
    throw std::invalid_argument("PulseY is not available under only-x");
  }
}

}  // namespace

std::string to_string(Scheme scheme) {
  return scheme == Scheme::OnlyX ? "only-x" : "both-xy";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "only-x") return Scheme::OnlyX;
  if (name == "both-xy") return Scheme::BothXY;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

int action_count(Scheme scheme) {
  return scheme == Scheme::OnlyX ? 2 : 3;
}

void validate(const PhysicsConfig& config) {
  if (config.n_atoms < 1) {
    throw std::invalid_argument("n_atoms must be positive");
  }
  if (!(config.chi > 0.0)) {
    throw std::invalid_argument("chi must be positive");
  }
  if (!(config.total_time > 0.0)) {
    throw std::invalid_argument("total_time must be positive");
  }
  if (config.n_intervals < 1) {
    throw std::invalid_argument("n_intervals must be positive");
  }
}

PhysicsConfig resolved(const PhysicsConfig& config) {
  PhysicsConfig out = config;
  if (out.total_time <= 0.0) {
    out.total_time = optimal_squeezing_time(out.n_atoms, out.chi);
  }
  validate(out);
  return out;
}

double interval_duration(const PhysicsConfig& config) {
  return config.total_time / config.n_intervals;
}

EpisodeTrace run_episode(const PhysicsConfig& config,
                         const ActionSource& source) {
  validate(config);
  const double chi_dt = config.chi * interval_duration(config);
  SpinState state = css_initial(config.n_atoms);

  std::vector<std::array<double, 6>> observations;
  std::vector<ActionKind> actions;
  std::vector<double> qfi_series;
  observations.reserve(config.n_intervals);
  actions.reserve(config.n_intervals);
  qfi_series.reserve(config.n_intervals + 1);
  qfi_series.push_back(qfi_generator_z(state));

  for (int t = 0; t < config.n_intervals; ++t) {
    observations.push_back(observation(state));
    const ActionKind action = source(observations.back(), t);
    check_action_legal(action, config.scheme);
    state = apply_action(state, action, chi_dt);
    actions.push_back(action);
    qfi_series.push_back(qfi_generator_z(state));
  }

  std::vector<double> rewards = assign_rewards(qfi_series);
  return EpisodeTrace{std::move(observations), std::move(actions),
                      std::move(qfi_series), std::move(rewards),
                      std::move(state)};
}

EpisodeTrace run_episode(const PhysicsConfig& config,
                         const std::vector<ActionKind>& actions) {
  if (static_cast<int>(actions.size()) != config.n_intervals) {
    throw std::invalid_argument("action list length " +
                                std::to_string(actions.size()) +
                                " differs from n_intervals " +
                                std::to_string(config.n_intervals));
  }
  return run_episode(config,
                     [&actions](const std::array<double, 6>&, int step) {
                       return actions[static_cast<size_t>(step)];
                     });
}

std::vector<double> assign_rewards(const std::vector<double>& qfi_series) {
  if (qfi_series.empty()) {
    throw std::invalid_argument("empty qfi series");
  }
  std::vector<double> rewards(qfi_series.size());
  double running = qfi_series.back();
  for (size_t i = qfi_series.size(); i-- > 0;) {
    running = std::max(running, qfi_series[i]);
    rewards[i] = running;
  }
  return rewards;
}

std::vector<double> normalized_rewards(const std::vector<double>& rewards,
                                       int n_atoms) {
  const double scale =
      1.0 / (static_cast<double>(n_atoms) * static_cast<double>(n_atoms));
  std::vector<double> out(rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i) out[i] = rewards[i] * scale;
  return out;
}

PulseSequence make_sequence(const PhysicsConfig& config,
                            std::vector<ActionKind> actions) {
  validate(config);
  if (static_cast<int>(actions.size()) != config.n_intervals) {
    throw std::invalid_argument("sequence length differs from n_intervals");
  }
  for (ActionKind action : actions) check_action_legal(action, config.scheme);
  PulseSequence sequence;
  sequence.n_atoms = config.n_atoms;
  sequence.chi = config.chi;
  sequence.total_time = config.total_time;
  sequence.n_intervals = config.n_intervals;
  sequence.scheme = config.scheme;
  sequence.actions = std::move(actions);
  return sequence;
}

PhysicsConfig config_of(const PulseSequence& sequence) {
  PhysicsConfig config;
  config.n_atoms = sequence.n_atoms;
  config.chi = sequence.chi;
  config.total_time = sequence.total_time;
  config.n_intervals = sequence.n_intervals;
  config.scheme = sequence.scheme;
  validate(config);
  return config;
}

std::string to_json(const PulseSequence& sequence) {
  nlohmann::json doc;
  doc["format_version"] = sequence.format_version;
  doc["n_atoms"] = sequence.n_atoms;
  doc["chi"] = sequence.chi;
  doc["total_time"] = sequence.total_time;
  doc["n_intervals"] = sequence.n_intervals;
  doc["scheme"] = to_string(sequence.scheme);
  std::vector<int> codes;
  codes.reserve(sequence.actions.size());
  for (ActionKind action : sequence.actions) {
    codes.push_back(static_cast<int>(action));
  }
  doc["actions"] = codes;
  return doc.dump(2) + "\n";
}

PulseSequence sequence_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("bad pulse sequence JSON: ") +
                                err.what());
  }
  PulseSequence sequence;
  sequence.format_version = doc.at("format_version").get<int>();
  if (sequence.format_version != 1) {
    throw std::invalid_argument("unsupported format_version " +
                                std::to_string(sequence.format_version));
  }
  sequence.n_atoms = doc.at("n_atoms").get<int>();
  sequence.chi = doc.at("chi").get<double>();
  sequence.total_time = doc.at("total_time").get<double>();
  sequence.n_intervals = doc.at("n_intervals").get<int>();
  sequence.scheme = scheme_from_string(doc.at("scheme").get<std::string>());
  for (const auto& code : doc.at("actions")) {
    sequence.actions.push_back(action_from_code(code.get<int>()));
  }
  if (static_cast<int>(sequence.actions.size()) != sequence.n_intervals) {
    throw std::invalid_argument("actions length differs from n_intervals");
  }
  for (ActionKind action : sequence.actions) {
    check_action_legal(action, sequence.scheme);
  }
  config_of(sequence);
  return sequence;
}

void save_pulse_sequence(const PulseSequence& sequence,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << to_json(sequence);
  if (!out) {
    throw std::runtime_error("short write to '" + path + "'");
  }
}

PulseSequence load_pulse_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sequence_from_json(buffer.str());
}

}  // namespace spintwist
