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

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include <json.hpp>

namespace spintwist {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<int> net_sizes(int inputs, const std::vector<int>& hidden,
                           int outputs) {
  std::vector<int> sizes;
  sizes.reserve(hidden.size() + 2);
  sizes.push_back(inputs);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(outputs);
  return sizes;
}

int argmax_lowest(const Eigen::VectorXd& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

nlohmann::json net_to_json(const Mlp& net) {
  nlohmann::json doc;
  doc["sizes"] = net.sizes();
  doc["values"] = net.flatten();
  return doc;
}

Mlp net_from_json(const nlohmann::json& doc) {
  Mlp net(doc.at("sizes").get<std::vector<int>>(), 0);
  net.unflatten(doc.at("values").get<std::vector<double>>());
  return net;
}

nlohmann::json adam_to_json(const AdamState& state) {
  nlohmann::json doc;
  doc["first"] = state.first_moment.flatten();
  doc["second"] = state.second_moment.flatten();
  doc["step_count"] = state.step_count;
  return doc;
}

AdamState adam_from_json(const nlohmann::json& doc, const Mlp& params) {
  AdamState state(params);
  state.first_moment.unflatten(doc.at("first").get<std::vector<double>>());
  state.second_moment.unflatten(doc.at("second").get<std::vector<double>>());
  state.step_count = doc.at("step_count").get<std::int64_t>();
  return state;
}

}  // namespace

ActorCritic make_networks(const PhysicsConfig& physics,
                          const TrainerConfig& trainer) {
  const int inputs = trainer.observe_time ? 7 : 6;
  const int actions = action_count(physics.scheme);
  return ActorCritic{
      Mlp(net_sizes(inputs, trainer.hidden, actions),
          mix_seed(trainer.seed, 0xAC)),
      Mlp(net_sizes(inputs, trainer.hidden, 1), mix_seed(trainer.seed, 0xC1))};
}

Eigen::VectorXd policy_features(const std::array<double, 6>& obs, int step,
                                int n_intervals, bool observe_time) {
  Eigen::VectorXd features(observe_time ? 7 : 6);
  for (int i = 0; i < 6; ++i) features[i] = obs[static_cast<size_t>(i)];
  if (observe_time) {
    features[6] = static_cast<double>(step) / n_intervals;
  }
  return features;
}

PolicyValue policy_value(const Mlp& actor, const Mlp& critic,
                         const Eigen::VectorXd& features) {
  const Eigen::VectorXd logits = actor.forward(features);
  const Eigen::VectorXd value = critic.forward(features);
  if (!logits.allFinite() || !value.allFinite()) {
    std::ostringstream dump;
    dump << "non-finite network output: features=[" << features.transpose()
         << "] logits=[" << logits.transpose() << "] value=["
         << value.transpose() << "]";
    throw std::runtime_error(dump.str());
  }
  return PolicyValue{softmax(logits), value[0]};
}

int sample_index(const Eigen::VectorXd& probabilities, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double cumulative = 0.0;
  for (int i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return static_cast<int>(probabilities.size()) - 1;
}

EpisodeGradients episode_gradients(const Mlp& actor, const Mlp& critic,
                                   const EpisodeTrace& trace,
                                   const PhysicsConfig& physics,
                                   const TrainerConfig& trainer) {
  EpisodeGradients out{Mlp::zeros_like(actor), Mlp::zeros_like(critic)};
  const std::vector<double> targets =
      normalized_rewards(trace.rewards, physics.n_atoms);
  const double beta = trainer.entropy_coefficient;

  for (size_t t = 0; t < trace.actions.size(); ++t) {
    const Eigen::VectorXd features =
        policy_features(trace.observations[t], static_cast<int>(t),
                        physics.n_intervals, trainer.observe_time);
    Mlp::ForwardCache actor_cache;
    Mlp::ForwardCache critic_cache;
    const Eigen::VectorXd logits = actor.forward_cached(features, actor_cache);
    const double value = critic.forward_cached(features, critic_cache)[0];
    const Eigen::VectorXd probs = softmax(logits);
    const int chosen = static_cast<int>(trace.actions[t]);
    const double advantage = targets[t] - value;

    const Eigen::ArrayXd log_probs = probs.array().log();
    const double neg_entropy = (probs.array() * log_probs).sum();
    out.actor_loss += -log_probs[chosen] * advantage + beta * neg_entropy;
    out.critic_loss += (value - targets[t]) * (value - targets[t]);

    Eigen::VectorXd actor_grad = advantage * probs;
    actor_grad[chosen] -= advantage;
    actor_grad +=
        (beta * probs.array() * (log_probs - neg_entropy)).matrix();
    actor.backward(actor_cache, actor_grad, out.actor);

    Eigen::VectorXd critic_grad(1);
    critic_grad[0] = 2.0 * (value - targets[t]);
    critic.backward(critic_cache, critic_grad, out.critic);
  }

  clip_global_norm(out.actor, trainer.gradient_clip);
  clip_global_norm(out.critic, trainer.gradient_clip);
  return out;
}

ParameterStore::ParameterStore(ActorCritic initial,
                               const AdamHyper& actor_hyper,
                               const AdamHyper& critic_hyper)
    : networks_(std::move(initial)),
      actor_adam_(networks_.actor),
      critic_adam_(networks_.critic),
      actor_hyper_(actor_hyper),
      critic_hyper_(critic_hyper) {}

ActorCritic ParameterStore::snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return networks_;
}

void ParameterStore::apply(const EpisodeGradients& gradients) {
  std::lock_guard<std::mutex> lock(mutex_);
  adam_step(networks_.actor, gradients.actor, actor_adam_, actor_hyper_);
  adam_step(networks_.critic, gradients.critic, critic_adam_, critic_hyper_);
}

void ParameterStore::overwrite(const ActorCritic& networks) {
  std::lock_guard<std::mutex> lock(mutex_);
  networks_ = networks;
}

AdamState ParameterStore::actor_adam() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return actor_adam_;
}

AdamState ParameterStore::critic_adam() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return critic_adam_;
}

TrainResult train(const PhysicsConfig& physics, const TrainerConfig& trainer) {
  validate(physics);
  if (trainer.workers < 1) {
    throw std::invalid_argument("worker count must be positive");
  }
  if (trainer.episodes < 1) {
    throw std::invalid_argument("episode count must be positive");
  }

  ActorCritic initial = make_networks(physics, trainer);
  AdamHyper actor_hyper;
  actor_hyper.learning_rate = trainer.actor_learning_rate;
  AdamHyper critic_hyper;
  critic_hyper.learning_rate = trainer.critic_learning_rate;
  ParameterStore store(std::move(initial), actor_hyper, critic_hyper);

  std::mutex log_mutex;
  TrainLog log;
  log.seed = trainer.seed;
  log.entries.reserve(static_cast<size_t>(trainer.episodes));
  double best_qfi = -std::numeric_limits<double>::infinity();
  std::vector<ActionKind> best_actions;
  ActorCritic best_networks = store.snapshot();

  std::atomic<int> ticket{0};
  std::atomic<bool> failed{false};
  std::string failure_message;

  auto worker_loop = [&](int worker_id) {
    const std::uint64_t worker_seed = mix_seed(trainer.seed, 1000 + worker_id);
    std::mt19937_64 rng(worker_seed);
    while (!failed.load(std::memory_order_relaxed)) {
      const int episode = ticket.fetch_add(1);
      if (episode >= trainer.episodes) break;
      const ActorCritic nets = store.snapshot();
      const EpisodeTrace trace = run_episode(
          physics, [&](const std::array<double, 6>& obs, int step) {
            const Eigen::VectorXd features = policy_features(
                obs, step, physics.n_intervals, trainer.observe_time);
            const PolicyValue pv =
                policy_value(nets.actor, nets.critic, features);
            return static_cast<ActionKind>(
                sample_index(pv.probabilities, rng));
          });
      const EpisodeGradients grads =
          episode_gradients(nets.actor, nets.critic, trace, physics, trainer);
      if (!std::isfinite(grads.actor_loss) ||
          !std::isfinite(grads.critic_loss)) {
        std::lock_guard<std::mutex> lock(log_mutex);
        if (!failed.exchange(true)) {
          std::ostringstream message;
          message << "non-finite loss in episode " << episode << " on worker "
                  << worker_id << " (worker seed " << worker_seed << ")";
          failure_message = message.str();
        }
        break;
      }
      store.apply(grads);

      std::lock_guard<std::mutex> lock(log_mutex);
      TrainLogEntry entry;
      entry.episode = static_cast<int>(log.entries.size());
      entry.worker = worker_id;
      entry.final_qfi = trace.qfi_series.back();
      entry.actor_loss = grads.actor_loss;
      entry.critic_loss = grads.critic_loss;
      if (entry.final_qfi > best_qfi) {
        best_qfi = entry.final_qfi;
        best_actions = trace.actions;
        best_networks = store.snapshot();
      }
      entry.best_qfi = best_qfi;
      log.entries.push_back(entry);
    }
  };

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(trainer.workers));
  for (int w = 0; w < trainer.workers; ++w) pool.emplace_back(worker_loop, w);
  for (std::thread& t : pool) t.join();
  log.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (failed.load()) {
    throw std::runtime_error(failure_message);
  }

  return TrainResult{std::move(best_networks),
                     store.actor_adam(),
                     store.critic_adam(),
                     std::move(log),
                     make_sequence(physics, std::move(best_actions)),
                     best_qfi};
}

PulseSequence greedy_rollout(const Mlp& actor, const PhysicsConfig& physics,
                             bool observe_time) {
  const EpisodeTrace trace =
      run_episode(physics, [&](const std::array<double, 6>& obs, int step) {
        const Eigen::VectorXd features =
            policy_features(obs, step, physics.n_intervals, observe_time);
        const Eigen::VectorXd probs = softmax(actor.forward(features));
        return static_cast<ActionKind>(argmax_lowest(probs));
      });
  return make_sequence(physics, trace.actions);
}

void save_checkpoint(const std::string& path, const ActorCritic& networks,
                     const AdamState& actor_adam, const AdamState& critic_adam,
                     Scheme scheme) {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["scheme"] = to_string(scheme);
  doc["action_count"] = action_count(scheme);
  doc["actor"] = net_to_json(networks.actor);
  doc["critic"] = net_to_json(networks.critic);
  doc["adam"]["actor"] = adam_to_json(actor_adam);
  doc["adam"]["critic"] = adam_to_json(critic_adam);

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << doc.dump(2) << "\n";
  if (!out) {
    throw std::runtime_error("short write to '" + path + "'");
  }
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw std::runtime_error(std::string("bad checkpoint JSON: ") +
                             err.what());
  }
  if (doc.at("format_version").get<int>() != 1) {
    throw std::runtime_error("unsupported checkpoint format_version");
  }
  const Scheme scheme =
      scheme_from_string(doc.at("scheme").get<std::string>());
  ActorCritic networks{net_from_json(doc.at("actor")),
                       net_from_json(doc.at("critic"))};
  if (networks.actor.output_size() != action_count(scheme) ||
      doc.at("action_count").get<int>() != action_count(scheme)) {
    throw std::runtime_error("checkpoint actor head disagrees with scheme");
  }
  AdamState actor_adam =
      adam_from_json(doc.at("adam").at("actor"), networks.actor);
  AdamState critic_adam =
      adam_from_json(doc.at("adam").at("critic"), networks.critic);
  return LoadedCheckpoint{std::move(networks), std::move(actor_adam),
                          std::move(critic_adam), scheme};
}

}  // namespace spintwist
