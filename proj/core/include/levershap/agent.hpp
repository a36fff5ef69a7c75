#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levershap/mlp.hpp"
#include "levershap/normalizer.hpp"
#include "levershap/optim.hpp"
#include "levershap/rng.hpp"
#include "levershap/transition.hpp"

namespace levershap {

// Actor: 20 -> 256 -> 256 -> 256 -> 4, tanh output.
// Critic: (20 + 4) -> 256 -> 256 -> 256 -> 1, linear output.
inline const std::vector<int> kActorLayerSizes{kStateDim, 256, 256, 256,
                                               kActionDim};
inline const std::vector<int> kCriticLayerSizes{kStateDim + kActionDim, 256,
                                                256, 256, 1};

struct AgentConfig {
  double lr_actor = 1e-3;
  double lr_critic = 1e-3;
  double discount = 0.98;
  double action_l2 = 1.0;
  double noise_eps = 0.2;   // stddev of Gaussian action noise
  double random_eps = 0.18; // probability of a uniform random action
  int her_k = 4;
  int batch_size = 256;
  double polyak_retain = 0.95;
  int updates_per_cycle = 40;
  double action_scale = 0.1;
  double obs_clip = 5.0;
  std::size_t buffer_capacity = 1000000;

  void validate() const;
};

// Deterministic-policy actor-critic with target networks. Targets start as
// exact copies of their source networks.
class DdpgAgent {
 public:
  DdpgAgent(AgentConfig cfg, std::uint64_t init_seed);

  // Greedy action of the normalized state; with explore=true, epsilon-greedy
  // uniform actions and Gaussian noise, clipped to [-1, 1].
  std::array<double, kActionDim> select_action(const Observation& state,
                                               bool explore, Rng& rng) const;

  // One Adam step on the mean-squared Bellman error against the target
  // networks; targets are clipped to the achievable sparse-return range.
  // Returns the pre-update loss.
  double critic_update(std::span<const Transition> minibatch);

  // One Adam step on -mean Q(s, pi(s)) plus the action-magnitude penalty,
  // critic frozen. Returns the pre-update loss.
  double actor_update(std::span<const Transition> minibatch);

  void update_targets();

  const AgentConfig& config() const { return cfg_; }
  void set_config(const AgentConfig& cfg);

  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& target_actor() const { return target_actor_; }
  const Mlp& target_critic() const { return target_critic_; }
  Mlp& mutable_actor() { return actor_; }
  Mlp& mutable_critic() { return critic_; }
  ObsNormalizer& normalizer() { return normalizer_; }
  const ObsNormalizer& normalizer() const { return normalizer_; }

  // Replaces the networks wholesale (checkpoint restore). Target nets must
  // stay architecture-identical to their sources.
  void load_networks(Mlp actor, Mlp critic, Mlp target_actor,
                     Mlp target_critic);

 private:
  Eigen::MatrixXd normalize_batch(
      std::span<const Transition> minibatch, bool next_states) const;

  AgentConfig cfg_;
  Mlp actor_, critic_, target_actor_, target_critic_;
  AdamState actor_opt_, critic_opt_;
  ObsNormalizer normalizer_;
};

}  // namespace levershap
