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

#include "spintwist/a3c.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include <doctest.h>

#include "spintwist/metrology.hpp"

namespace spintwist {
namespace {

bool grad_close(double analytic, double numeric) {
  return std::abs(analytic - numeric) <=
         1e-6 + 1e-4 * std::max(std::abs(analytic), std::abs(numeric));
}

/// Mirrors the actor objective of episode_gradients with plain forwards;
/// the advantage is a constant for the actor, so finite differences of
/// this function against fixed critic values match the analytic gradient.
double actor_objective(const Mlp& actor, const Mlp& critic,
                       const EpisodeTrace& trace,
                       const PhysicsConfig& physics,
                       const TrainerConfig& trainer) {
  const std::vector<double> targets =
      normalized_rewards(trace.rewards, physics.n_atoms);
  double loss = 0.0;
  for (size_t t = 0; t < trace.actions.size(); ++t) {
    const Eigen::VectorXd features =
        policy_features(trace.observations[t], static_cast<int>(t),
                        physics.n_intervals, trainer.observe_time);
    const Eigen::VectorXd probs = softmax(actor.forward(features));
    const double value = critic.forward(features)[0];
    const double advantage = targets[t] - value;
    const Eigen::ArrayXd log_probs = probs.array().log();
    const double neg_entropy = (probs.array() * log_probs).sum();
    loss += -log_probs[static_cast<int>(trace.actions[t])] * advantage +
            trainer.entropy_coefficient * neg_entropy;
  }
  return loss;
}

double critic_objective(const Mlp& critic, const EpisodeTrace& trace,
                        const PhysicsConfig& physics,
                        const TrainerConfig& trainer) {
  const std::vector<double> targets =
      normalized_rewards(trace.rewards, physics.n_atoms);
  double loss = 0.0;
  for (size_t t = 0; t < trace.actions.size(); ++t) {
    const Eigen::VectorXd features =
        policy_features(trace.observations[t], static_cast<int>(t),
                        physics.n_intervals, trainer.observe_time);
    const double value = critic.forward(features)[0];
    loss += (value - targets[t]) * (value - targets[t]);
  }
  return loss;
}

PhysicsConfig tiny_physics() {
  PhysicsConfig physics;
  physics.n_atoms = 4;
  physics.chi = 1.0;
  physics.total_time = 0.3;
  physics.n_intervals = 4;
  physics.scheme = Scheme::BothXY;
  return physics;
}

TEST_CASE("network shapes follow scheme and time flag") {
  PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;

  ActorCritic nets = make_networks(physics, trainer);
  CHECK(nets.actor.input_size() == 6);
  CHECK(nets.actor.output_size() == 3);
  CHECK(nets.critic.output_size() == 1);
  CHECK(nets.actor.sizes() == std::vector<int>{6, 64, 64, 3});

  physics.scheme = Scheme::OnlyX;
  nets = make_networks(physics, trainer);
  CHECK(nets.actor.output_size() == 2);

  trainer.observe_time = true;
  nets = make_networks(physics, trainer);
  CHECK(nets.actor.input_size() == 7);
  CHECK(nets.critic.input_size() == 7);

  const ActorCritic again = make_networks(physics, trainer);
  CHECK(nets.actor.flatten() == again.actor.flatten());
  CHECK(nets.critic.flatten() == again.critic.flatten());
}

TEST_CASE("policy features append the fractional step only on demand") {
  const std::array<double, 6> obs = {0.1, -0.2, 0.3, 0.4, 0.5, 0.6};
  const Eigen::VectorXd plain = policy_features(obs, 3, 10, false);
  REQUIRE(plain.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(plain[i] == obs[static_cast<size_t>(i)]);

  const Eigen::VectorXd timed = policy_features(obs, 3, 10, true);
  REQUIRE(timed.size() == 7);
  CHECK(timed[6] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("zeroed networks yield a uniform policy and zero value") {
  Mlp actor({6, 8, 3}, 1);
  Mlp critic({6, 8, 1}, 2);
  actor.set_zero();
  critic.set_zero();
  Eigen::VectorXd features(6);
  features << 1, 2, 3, 4, 5, 6;
  const PolicyValue pv = policy_value(actor, critic, features);
  for (int i = 0; i < 3; ++i) {
    CHECK(pv.probabilities[i] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  CHECK(pv.value == 0.0);
}

TEST_CASE("non-finite network output throws with diagnostics") {
  Mlp actor({6, 8, 2}, 1);
  Mlp critic({6, 8, 1}, 2);
  actor.layers()[0].weights(0, 0) = std::nan("");
  Eigen::VectorXd features = Eigen::VectorXd::Ones(6);
  CHECK_THROWS_AS(policy_value(actor, critic, features), std::runtime_error);
}

TEST_CASE("sampling follows the given distribution") {
  Eigen::VectorXd probs(3);
  probs << 0.2, 0.5, 0.3;
  std::mt19937_64 rng(77);
  std::array<int, 3> counts = {0, 0, 0};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const int index = sample_index(probs, rng);
    REQUIRE(index >= 0);
    REQUIRE(index < 3);
    ++counts[static_cast<size_t>(index)];
  }
  for (int i = 0; i < 3; ++i) {
    CHECK(static_cast<double>(counts[static_cast<size_t>(i)]) / draws ==
          doctest::Approx(probs[i]).epsilon(0.05));
  }

  Eigen::VectorXd sure(2);
  sure << 0.0, 1.0;
  for (int i = 0; i < 100; ++i) CHECK(sample_index(sure, rng) == 1);
  sure << 1.0, 0.0;
  for (int i = 0; i < 100; ++i) CHECK(sample_index(sure, rng) == 0);
}

TEST_CASE("episode gradients match finite differences") {
  const PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;
  trainer.entropy_coefficient = 0.01;
  trainer.gradient_clip = 1e9;  // keep clipping out of the comparison

  Mlp actor({6, 8, 3}, 5);
  Mlp critic({6, 8, 1}, 6);
  for (Mlp* net : {&actor, &critic}) {
    for (DenseLayer& layer : net->layers()) {
      layer.weights *= 3.0;
      layer.bias.setConstant(0.1);
    }
  }

  const std::vector<ActionKind> actions = {ActionKind::Free, ActionKind::PulseX,
                                           ActionKind::PulseY,
                                           ActionKind::Free};
  const EpisodeTrace trace = run_episode(physics, actions);
  const EpisodeGradients grads =
      episode_gradients(actor, critic, trace, physics, trainer);

  CHECK(grads.actor_loss ==
        doctest::Approx(actor_objective(actor, critic, trace, physics, trainer))
            .epsilon(1e-12));
  CHECK(grads.critic_loss ==
        doctest::Approx(critic_objective(critic, trace, physics, trainer))
            .epsilon(1e-12));

  const double eps = 1e-6;
  Mlp probe_actor = actor;
  for (size_t l = 0; l < probe_actor.layers().size(); ++l) {
    DenseLayer& layer = probe_actor.layers()[l];
    for (int r = 0; r < layer.weights.rows(); ++r) {
      for (int c = 0; c < layer.weights.cols(); ++c) {
        const double saved = layer.weights(r, c);
        layer.weights(r, c) = saved + eps;
        const double up =
            actor_objective(probe_actor, critic, trace, physics, trainer);
        layer.weights(r, c) = saved - eps;
        const double down =
            actor_objective(probe_actor, critic, trace, physics, trainer);
        layer.weights(r, c) = saved;
        CHECK(grad_close(grads.actor.layers()[l].weights(r, c),
                         (up - down) / (2.0 * eps)));
      }
    }
    for (int r = 0; r < layer.bias.size(); ++r) {
      const double saved = layer.bias[r];
      layer.bias[r] = saved + eps;
      const double up =
          actor_objective(probe_actor, critic, trace, physics, trainer);
      layer.bias[r] = saved - eps;
      const double down =
          actor_objective(probe_actor, critic, trace, physics, trainer);
      layer.bias[r] = saved;
      CHECK(grad_close(grads.actor.layers()[l].bias[r],
                       (up - down) / (2.0 * eps)));
    }
  }

  Mlp probe_critic = critic;
  for (size_t l = 0; l < probe_critic.layers().size(); ++l) {
    DenseLayer& layer = probe_critic.layers()[l];
    for (int r = 0; r < layer.weights.rows(); ++r) {
      for (int c = 0; c < layer.weights.cols(); ++c) {
        const double saved = layer.weights(r, c);
        layer.weights(r, c) = saved + eps;
        const double up =
            critic_objective(probe_critic, trace, physics, trainer);
        layer.weights(r, c) = saved - eps;
        const double down =
            critic_objective(probe_critic, trace, physics, trainer);
        layer.weights(r, c) = saved;
        CHECK(grad_close(grads.critic.layers()[l].weights(r, c),
                         (up - down) / (2.0 * eps)));
      }
    }
  }
}

TEST_CASE("perfect critic and flat rewards give exactly zero gradients") {
  PhysicsConfig physics = tiny_physics();
  physics.n_atoms = 2;
  TrainerConfig trainer;
  trainer.entropy_coefficient = 0.0;
  trainer.gradient_clip = 1e9;

  Mlp actor({6, 4, 3}, 3);
  Mlp critic({6, 4, 1}, 4);
  critic.set_zero();
  const double target = 0.5;
  critic.layers().back().bias[0] = target;

  // Normalization divides rewards by N^2 = 4, so the targets land on 0.5.
  const EpisodeTrace trace{
      {{0.1, 0, 0, 0, 0, 0.2}, {0, 0.3, 0, 0.4, 0, 0}},
      {ActionKind::PulseX, ActionKind::Free},
      {2.0, 2.0, 2.0},
      {2.0, 2.0, 2.0},
      css_initial(2)};
  physics.n_intervals = 2;

  const EpisodeGradients grads =
      episode_gradients(actor, critic, trace, physics, trainer);
  CHECK(grads.actor_loss == 0.0);
  CHECK(grads.critic_loss == 0.0);
  CHECK(global_norm(grads.actor) == 0.0);
  CHECK(global_norm(grads.critic) == 0.0);
}

TEST_CASE("tiny clip bound caps the episode gradient norm") {
  const PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;
  trainer.gradient_clip = 1e-12;
  const ActorCritic nets = make_networks(physics, trainer);
  const EpisodeTrace trace = run_episode(
      physics, std::vector<ActionKind>(4, ActionKind::PulseX));
  const EpisodeGradients grads =
      episode_gradients(nets.actor, nets.critic, trace, physics, trainer);
  CHECK(global_norm(grads.actor) <= 1e-12 * (1.0 + 1e-12));
  CHECK(global_norm(grads.critic) <= 1e-12 * (1.0 + 1e-12));
}

TEST_CASE("parameter store serializes concurrent updates") {
  Mlp actor({2, 3, 2}, 1);
  Mlp critic({2, 3, 1}, 2);
  actor.set_zero();
  critic.set_zero();
  const AdamHyper hyper;

  EpisodeGradients grads{Mlp::zeros_like(actor), Mlp::zeros_like(critic)};
  for (DenseLayer& layer : grads.actor.layers()) {
    layer.weights.setConstant(0.01);
    layer.bias.setConstant(0.01);
  }
  for (DenseLayer& layer : grads.critic.layers()) {
    layer.weights.setConstant(-0.02);
    layer.bias.setConstant(-0.02);
  }

  // A fixed gradient makes ADAM order independent, so the concurrent
  // result must match a sequential reference bitwise.
  ParameterStore concurrent(ActorCritic{actor, critic}, hyper, hyper);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&concurrent, &grads] {
      for (int i = 0; i < 25; ++i) concurrent.apply(grads);
    });
  }
  for (std::thread& t : pool) t.join();

  ParameterStore sequential(ActorCritic{actor, critic}, hyper, hyper);
  for (int i = 0; i < 100; ++i) sequential.apply(grads);

  const ActorCritic got = concurrent.snapshot();
  const ActorCritic want = sequential.snapshot();
  CHECK(got.actor.flatten() == want.actor.flatten());
  CHECK(got.critic.flatten() == want.critic.flatten());
  CHECK(concurrent.actor_adam().step_count == 100);
  CHECK(concurrent.critic_adam().step_count == 100);
}

TEST_CASE("parameter store snapshot and overwrite round trip") {
  Mlp actor({2, 3, 2}, 7);
  Mlp critic({2, 3, 1}, 8);
  ParameterStore store(ActorCritic{actor, critic}, AdamHyper{}, AdamHyper{});

  ActorCritic replacement{actor, critic};
  for (DenseLayer& layer : replacement.actor.layers()) {
    layer.weights.setConstant(42.0);
  }
  store.overwrite(replacement);
  const ActorCritic got = store.snapshot();
  CHECK(got.actor.flatten() == replacement.actor.flatten());
  CHECK(got.critic.flatten() == critic.flatten());

  EpisodeGradients zero{Mlp::zeros_like(actor), Mlp::zeros_like(critic)};
  store.apply(zero);
  CHECK(store.snapshot().actor.flatten() == replacement.actor.flatten());
  CHECK(store.actor_adam().step_count == 1);
}

TEST_CASE("training rejects degenerate budgets") {
  const PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;
  trainer.workers = 0;
  CHECK_THROWS_AS(train(physics, trainer), std::invalid_argument);
  trainer.workers = 1;
  trainer.episodes = 0;
  CHECK_THROWS_AS(train(physics, trainer), std::invalid_argument);
}

TEST_CASE("single-worker training is deterministic") {
  PhysicsConfig physics;
  physics.n_atoms = 10;
  physics.total_time = 0.3;
  physics.n_intervals = 5;
  physics.scheme = Scheme::OnlyX;

  TrainerConfig trainer;
  trainer.hidden = {16, 16};
  trainer.workers = 1;
  trainer.episodes = 40;
  trainer.seed = 3;

  const TrainResult first = train(physics, trainer);
  const TrainResult second = train(physics, trainer);

  REQUIRE(first.log.entries.size() == 40);
  REQUIRE(second.log.entries.size() == 40);
  CHECK(first.log.seed == 3);
  for (size_t i = 0; i < first.log.entries.size(); ++i) {
    CHECK(first.log.entries[i].final_qfi == second.log.entries[i].final_qfi);
    CHECK(first.log.entries[i].actor_loss == second.log.entries[i].actor_loss);
    CHECK(first.log.entries[i].critic_loss ==
          second.log.entries[i].critic_loss);
    CHECK(first.log.entries[i].worker == 0);
  }
  CHECK(first.best_qfi == second.best_qfi);
  CHECK(first.best_sequence.actions == second.best_sequence.actions);
  CHECK(first.networks.actor.flatten() == second.networks.actor.flatten());
}

TEST_CASE("training log tracks a monotone best and replayable winner") {
  PhysicsConfig physics;
  physics.n_atoms = 10;
  physics.total_time = 0.3;
  physics.n_intervals = 5;

  TrainerConfig trainer;
  trainer.hidden = {16, 16};
  trainer.workers = 2;
  trainer.episodes = 60;
  trainer.seed = 11;

  const TrainResult result = train(physics, trainer);
  REQUIRE(result.log.entries.size() == 60);
  double running = -1.0;
  for (const TrainLogEntry& entry : result.log.entries) {
    CHECK(entry.best_qfi >= entry.final_qfi);
    CHECK(entry.best_qfi >= running);
    running = entry.best_qfi;
  }
  CHECK(result.best_qfi == running);
  CHECK(result.log.wall_seconds > 0.0);

  const EpisodeTrace replay =
      run_episode(config_of(result.best_sequence), result.best_sequence.actions);
  CHECK(replay.qfi_series.back() ==
        doctest::Approx(result.best_qfi).epsilon(1e-12));
}

TEST_CASE("trainer recovers the optimal eight-interval sequence") {
  PhysicsConfig physics;
  physics.n_atoms = 20;
  physics.chi = 1.0;
  physics.total_time = 0.157533;
  physics.n_intervals = 8;
  physics.scheme = Scheme::OnlyX;

  TrainerConfig trainer;
  trainer.workers = 2;
  trainer.episodes = 1500;
  trainer.seed = 1;

  const TrainResult result = train(physics, trainer);
  // Exhaustive search of all 2^8 action lists puts the optimum at
  // 133.412, from a single x pulse on the last interval.
  CHECK(result.best_qfi >= 0.95 * 133.4119863855987);
  CHECK(result.best_qfi <= 133.4119863855987 * (1.0 + 1e-9));
}

TEST_CASE("greedy rollout breaks ties toward the lowest action code") {
  PhysicsConfig physics;
  physics.n_atoms = 10;
  physics.total_time = 0.3;
  physics.n_intervals = 6;

  Mlp actor({6, 8, 2}, 1);
  actor.set_zero();
  const PulseSequence uniform = greedy_rollout(actor, physics);
  REQUIRE(uniform.actions.size() == 6);
  for (ActionKind action : uniform.actions) {
    CHECK(action == ActionKind::Free);
  }

  actor.layers().back().bias[1] = 1.0;
  const PulseSequence pulses = greedy_rollout(actor, physics);
  for (ActionKind action : pulses.actions) {
    CHECK(action == ActionKind::PulseX);
  }
}

TEST_CASE("checkpoints round trip networks and optimizer state") {
  PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;
  trainer.hidden = {8};
  const ActorCritic nets = make_networks(physics, trainer);

  AdamState actor_adam(nets.actor);
  AdamState critic_adam(nets.critic);
  actor_adam.step_count = 17;
  for (DenseLayer& layer : actor_adam.first_moment.layers()) {
    layer.weights.setConstant(0.25);
  }
  critic_adam.second_moment.layers()[0].bias.setConstant(0.125);

  const std::string path = "a3c_test_checkpoint.json";
  save_checkpoint(path, nets, actor_adam, critic_adam, Scheme::BothXY);
  const LoadedCheckpoint loaded = load_checkpoint(path);
  std::remove(path.c_str());

  CHECK(loaded.scheme == Scheme::BothXY);
  CHECK(loaded.networks.actor.flatten() == nets.actor.flatten());
  CHECK(loaded.networks.critic.flatten() == nets.critic.flatten());
  CHECK(loaded.actor_adam.step_count == 17);
  CHECK(loaded.actor_adam.first_moment.flatten() ==
        actor_adam.first_moment.flatten());
  CHECK(loaded.critic_adam.second_moment.flatten() ==
        critic_adam.second_moment.flatten());
}

TEST_CASE("checkpoint loading rejects malformed files") {
  CHECK_THROWS_AS(load_checkpoint("no_such_checkpoint.json"),
                  std::runtime_error);

  const std::string path = "a3c_test_bad_checkpoint.json";
  {
    std::ofstream out(path);
    out << "not json\n";
  }
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);

  PhysicsConfig physics = tiny_physics();
  TrainerConfig trainer;
  trainer.hidden = {8};
  const ActorCritic nets = make_networks(physics, trainer);
  const AdamState actor_adam(nets.actor);
  const AdamState critic_adam(nets.critic);

  // A three-action actor saved under only-x cannot be loaded back.
  save_checkpoint(path, nets, actor_adam, critic_adam, Scheme::OnlyX);
  CHECK_THROWS_AS(load_checkpoint(path), std::runtime_error);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace spintwist
