#include "levershap/agent.hpp"

#include <cmath>

#include "levershap/error.hpp"

namespace levershap {

void AgentConfig::validate() const {
  if (lr_actor <= 0.0 || lr_critic <= 0.0)
    throw ConfigError("agent: learning rates must be positive");
  if (discount < 0.0 || discount > 1.0)
    throw ConfigError("agent: discount must be in [0, 1]");
  if (random_eps < 0.0 || random_eps > 1.0)
    throw ConfigError("agent: random_eps must be in [0, 1]");
  if (noise_eps < 0.0) throw ConfigError("agent: noise_eps must be >= 0");
  if (action_l2 < 0.0) throw ConfigError("agent: action_l2 must be >= 0");
  if (her_k < 0) throw ConfigError("agent: her_k must be >= 0");
  if (batch_size <= 0) throw ConfigError("agent: batch_size must be positive");
  if (polyak_retain < 0.0 || polyak_retain > 1.0)
    throw ConfigError("agent: polyak_retain must be in [0, 1]");
  if (updates_per_cycle < 0)
    throw ConfigError("agent: updates_per_cycle must be >= 0");
  if (action_scale <= 0.0)
    throw ConfigError("agent: action_scale must be positive");
  if (obs_clip <= 0.0) throw ConfigError("agent: obs_clip must be positive");
  if (buffer_capacity == 0)
    throw ConfigError("agent: buffer_capacity must be positive");
}

DdpgAgent::DdpgAgent(AgentConfig cfg, std::uint64_t init_seed)
    : cfg_(cfg),
      actor_(kActorLayerSizes, Activation::kRelu, Activation::kTanh,
             named_stream(init_seed, "actor_init").next_u64()),
      critic_(kCriticLayerSizes, Activation::kRelu, Activation::kLinear,
              named_stream(init_seed, "critic_init").next_u64()),
      target_actor_(actor_),
      target_critic_(critic_),
      actor_opt_(AdamState::for_mlp(actor_)),
      critic_opt_(AdamState::for_mlp(critic_)),
      normalizer_(kStateDim, cfg.obs_clip, kGoalSlot, kLeverAngleSlot) {
  cfg_.validate();
}

void DdpgAgent::set_config(const AgentConfig& cfg) {
  cfg.validate();
  cfg_ = cfg;
}

void DdpgAgent::load_networks(Mlp actor, Mlp critic, Mlp target_actor,
                              Mlp target_critic) {
  if (!same_architecture(actor, target_actor) ||
      !same_architecture(critic, target_critic))
    throw ShapeError("agent: target network architecture mismatch");
  actor_ = std::move(actor);
  critic_ = std::move(critic);
  target_actor_ = std::move(target_actor);
  target_critic_ = std::move(target_critic);
  actor_opt_ = AdamState::for_mlp(actor_);
  critic_opt_ = AdamState::for_mlp(critic_);
}

std::array<double, kActionDim> DdpgAgent::select_action(
    const Observation& state, bool explore, Rng& rng) const {
  for (const double v : state)
    if (!std::isfinite(v))
      throw InvalidStateError("select_action: non-finite state");

  std::array<double, kActionDim> action{};
  if (explore && rng.uniform() < cfg_.random_eps) {
    for (double& a : action) a = rng.uniform(-1.0, 1.0);
    return action;
  }

  const Eigen::VectorXd out = actor_.forward(normalizer_.normalize(state));
  for (int i = 0; i < kActionDim; ++i) action[i] = out(i);
  if (explore && cfg_.noise_eps > 0.0) {
    for (double& a : action)
      a = std::clamp(a + rng.normal(0.0, cfg_.noise_eps), -1.0, 1.0);
  }
  return action;
}

Eigen::MatrixXd DdpgAgent::normalize_batch(std::span<const Transition> batch,
                                           bool next_states) const {
  Eigen::MatrixXd out(kStateDim, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& s = next_states ? batch[i].next_state : batch[i].state;
    out.col(static_cast<Eigen::Index>(i)) = normalizer_.normalize(s);
  }
  return out;
}

double DdpgAgent::critic_update(std::span<const Transition> minibatch) {
  if (minibatch.empty())
    throw InvalidArgumentError("critic_update: empty minibatch");
  const auto n = static_cast<Eigen::Index>(minibatch.size());

  // Bootstrapped targets from the target networks.
  const Eigen::MatrixXd next_norm = normalize_batch(minibatch, true);
  const Eigen::MatrixXd next_actions = target_actor_.forward(next_norm);
  Eigen::MatrixXd next_inputs(kStateDim + kActionDim, n);
  next_inputs.topRows(kStateDim) = next_norm;
  next_inputs.bottomRows(kActionDim) = next_actions;
  const Eigen::MatrixXd next_q = target_critic_.forward(next_inputs);

  const double floor = -1.0 / (1.0 - cfg_.discount);
  Eigen::RowVectorXd targets(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = minibatch[static_cast<std::size_t>(i)];
    double y = t.reward;
    if (!t.done) y += cfg_.discount * next_q(0, i);
    targets(i) = std::clamp(y, floor, 0.0);
  }
  if (!targets.allFinite())
    throw PoisonedUpdateError("critic_update: non-finite target");

  Eigen::MatrixXd inputs(kStateDim + kActionDim, n);
  inputs.topRows(kStateDim) = normalize_batch(minibatch, false);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int a = 0; a < kActionDim; ++a)
      inputs(kStateDim + a, i) = minibatch[static_cast<std::size_t>(i)].action[a];

  ForwardCache cache;
  const Eigen::MatrixXd q = critic_.forward(inputs, &cache);
  const Eigen::MatrixXd residual = q.row(0) - targets;
  const double loss = residual.array().square().mean();

  const Eigen::MatrixXd dq = 2.0 * residual / static_cast<double>(n);
  const ParamGrads grads = critic_.backward(cache, dq);
  adam_step(critic_, grads, critic_opt_, cfg_.lr_critic);
  return loss;
}

double DdpgAgent::actor_update(std::span<const Transition> minibatch) {
  if (minibatch.empty())
    throw InvalidArgumentError("actor_update: empty minibatch");
  const auto n = static_cast<Eigen::Index>(minibatch.size());
  const double inv_n = 1.0 / static_cast<double>(n);

  const Eigen::MatrixXd states = normalize_batch(minibatch, false);
  ForwardCache actor_cache;
  const Eigen::MatrixXd actions = actor_.forward(states, &actor_cache);

  Eigen::MatrixXd critic_inputs(kStateDim + kActionDim, n);
  critic_inputs.topRows(kStateDim) = states;
  critic_inputs.bottomRows(kActionDim) = actions;
  ForwardCache critic_cache;
  const Eigen::MatrixXd q = critic_.forward(critic_inputs, &critic_cache);

  const double penalty =
      cfg_.action_l2 * actions.array().square().colwise().sum().mean() /
      kActionDim;
  const double loss = -q.row(0).mean() + penalty;

  // dQ/d(action) through a frozen critic, plus the penalty gradient.
  Eigen::MatrixXd d_inputs;
  const Eigen::MatrixXd d_out =
      Eigen::MatrixXd::Constant(1, n, -inv_n);
  critic_.backward(critic_cache, d_out, &d_inputs);
  Eigen::MatrixXd d_actions = d_inputs.bottomRows(kActionDim);
  d_actions += (2.0 * cfg_.action_l2 * inv_n / kActionDim) * actions;

  const ParamGrads grads = actor_.backward(actor_cache, d_actions);
  adam_step(actor_, grads, actor_opt_, cfg_.lr_actor);
  return loss;
}

void DdpgAgent::update_targets() {
  polyak_update(target_actor_, actor_, cfg_.polyak_retain);
  polyak_update(target_critic_, critic_, cfg_.polyak_retain);
}

}  // namespace levershap
