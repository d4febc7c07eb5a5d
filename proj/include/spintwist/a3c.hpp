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

#ifndef SPINTWIST_A3C_HPP
#define SPINTWIST_A3C_HPP

#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "spintwist/adam.hpp"
#include "spintwist/mlp.hpp"
#include "spintwist/pulse_env.hpp"

namespace spintwist {

struct TrainerConfig {
  std::vector<int> hidden = {64, 64};
  double actor_learning_rate = 1e-4;
  double critic_learning_rate = 1e-3;
  // Sized against N^2-normalized advantages; larger values pin the
  // policy at uniform for N >= 100.
  double entropy_coefficient = 1e-4;
  double gradient_clip = 1.0;
  int workers = 8;
  int episodes = 8000;
  std::uint64_t seed = 1;
  // Appends t / n_t as a seventh network input.
  bool observe_time = false;
};

struct ActorCritic {
  Mlp actor;
  Mlp critic;
};

/// Fresh actor (softmax head over the scheme's actions) and critic
/// (scalar head), seeded from trainer.seed.
ActorCritic make_networks(const PhysicsConfig& physics,
                          const TrainerConfig& trainer);

Eigen::VectorXd policy_features(const std::array<double, 6>& obs, int step,
                                int n_intervals, bool observe_time);

struct PolicyValue {
  Eigen::VectorXd probabilities;
  double value;
};

/// Runs both networks on one feature vector. Throws std::runtime_error
/// with a diagnostics line when an output is non-finite.
PolicyValue policy_value(const Mlp& actor, const Mlp& critic,
                         const Eigen::VectorXd& features);

int sample_index(const Eigen::VectorXd& probabilities, std::mt19937_64& rng);

struct EpisodeGradients {
  Mlp actor;
  Mlp critic;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

/// Accumulated per-step gradients over one finished episode.
/// Actor loss: sum of -log pi(a_t|s_t) A_t - beta H(pi(.|s_t)) with
/// A_t the N^2-normalized future-max reward minus V(s_t), constant for
/// the actor. Critic loss: sum of (V(s_t) - r_t)^2. Each network's
/// gradient is clipped to the configured global norm.
EpisodeGradients episode_gradients(const Mlp& actor, const Mlp& critic,
                                   const EpisodeTrace& trace,
                                   const PhysicsConfig& physics,
                                   const TrainerConfig& trainer);

/// Shared parameter server: snapshot reads and serialized ADAM updates,
/// both behind one mutex so readers always observe full updates.
class ParameterStore {
 public:
  ParameterStore(ActorCritic initial, const AdamHyper& actor_hyper,
                 const AdamHyper& critic_hyper);

  ActorCritic snapshot() const;
  void apply(const EpisodeGradients& gradients);
  void overwrite(const ActorCritic& networks);
  AdamState actor_adam() const;
  AdamState critic_adam() const;

 private:
  mutable std::mutex mutex_;
  ActorCritic networks_;
  AdamState actor_adam_;
  AdamState critic_adam_;
  AdamHyper actor_hyper_;
  AdamHyper critic_hyper_;
};

struct TrainLogEntry {
  int episode = 0;  // completion order
  int worker = 0;
  double final_qfi = 0.0;
  double best_qfi = 0.0;  // running best of final_qfi, monotone
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

struct TrainLog {
  std::vector<TrainLogEntry> entries;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ActorCritic networks;  // snapshot taken when best_qfi last improved
  AdamState actor_adam;
  AdamState critic_adam;
  TrainLog log;
  PulseSequence best_sequence;
  double best_qfi = 0.0;
};

/// Runs `trainer.workers` sampling workers against a shared store until
/// `trainer.episodes` episodes complete. Episodes rank by final-step
/// F_Q. Throws std::runtime_error naming the worker seed and episode
/// on a non-finite loss.
TrainResult train(const PhysicsConfig& physics, const TrainerConfig& trainer);

/// Deterministic argmax rollout; ties pick the lowest action code.
PulseSequence greedy_rollout(const Mlp& actor, const PhysicsConfig& physics,
                             bool observe_time = false);

struct LoadedCheckpoint {
  ActorCritic networks;
  AdamState actor_adam;
  AdamState critic_adam;
  Scheme scheme;
};

void save_checkpoint(const std::string& path, const ActorCritic& networks,
                     const AdamState& actor_adam,
                     const AdamState& critic_adam, Scheme scheme);
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace spintwist

#endif
