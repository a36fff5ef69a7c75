#include <doctest.h>

#include <cmath>

#include "levershap/agent.hpp"
#include "levershap/error.hpp"
#include "levershap/lever_env.hpp"
#include "levershap/training.hpp"
#include "test_util.hpp"

using namespace levershap;
using namespace levershap::test;

namespace {

AgentConfig small_config() {
  AgentConfig cfg;
  cfg.batch_size = 16;
  cfg.updates_per_cycle = 2;
  cfg.buffer_capacity = 10000;
  return cfg;
}

std::vector<Transition> small_batch(Rng& rng, int n) {
  std::vector<Transition> batch;
  for (int i = 0; i < n; ++i) {
    Transition t = make_transition(rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0), -1.0);
    for (auto& v : t.state) v = rng.uniform(-1.0, 1.0);
    for (auto& v : t.next_state) v = rng.uniform(-1.0, 1.0);
    for (auto& v : t.action) v = rng.uniform(-1.0, 1.0);
    t.reward = lever_reward(t.next_achieved_goal, t.desired_goal);
    t.done = false;
    batch.push_back(t);
  }
  return batch;
}

// Q(s, a) = -sum_i |a_i|, built exactly from relu pairs.
Mlp l1_bowl_critic() {
  Mlp critic({kStateDim + kActionDim, 2 * kActionDim, 1}, Activation::kRelu,
             Activation::kLinear, 0);
  critic.weights()[0].setZero();
  critic.biases()[0].setZero();
  for (int i = 0; i < kActionDim; ++i) {
    critic.weights()[0](2 * i, kStateDim + i) = 1.0;
    critic.weights()[0](2 * i + 1, kStateDim + i) = -1.0;
  }
  critic.weights()[1] = Eigen::MatrixXd::Constant(1, 2 * kActionDim, -1.0);
  critic.biases()[1].setZero();
  return critic;
}

}  // namespace

TEST_CASE("normalizer tracks mean and variance with a shared goal slot") {
  ObsNormalizer norm(kStateDim, 5.0, kGoalSlot, kLeverAngleSlot);
  Observation a{}, b{};
  a[kLeverAngleSlot] = 1.0;
  b[kLeverAngleSlot] = 3.0;
  a[kGoalSlot] = 100.0;  // goal statistics must be ignored
  b[kGoalSlot] = 200.0;
  a[0] = -2.0;
  b[0] = 2.0;
  norm.update(a);
  norm.update(b);

  CHECK(norm.mean()(kLeverAngleSlot) == doctest::Approx(2.0));
  CHECK(norm.variance()(kLeverAngleSlot) == doctest::Approx(1.0));

  Observation probe{};
  probe[kLeverAngleSlot] = 2.0;
  probe[kGoalSlot] = 2.0;
  const Eigen::VectorXd z = norm.normalize(probe);
  // both slots z-scored with the lever-angle statistics
  CHECK(z(kLeverAngleSlot) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(z(kGoalSlot) == doctest::Approx(0.0).epsilon(1e-6));

  Observation extreme{};
  extreme[0] = 1000.0;
  CHECK(norm.normalize(extreme)(0) == 5.0);  // clipped
}

TEST_CASE("fresh normalizer is an identity with clipping") {
  ObsNormalizer norm(3, 5.0);
  const double sample[3] = {0.5, -0.25, 7.0};
  const Eigen::VectorXd z = norm.normalize(std::span<const double>(sample, 3));
  CHECK(z(0) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(z(1) == doctest::Approx(-0.25).epsilon(1e-4));
  CHECK(z(2) == 5.0);
}

TEST_CASE("greedy action selection is a pure function of the state") {
  DdpgAgent agent(small_config(), 1);
  Rng rng(2);
  Observation state{};
  for (auto& v : state) v = rng.uniform(-1.0, 1.0);
  Rng r1(3), r2(4);
  const auto a1 = agent.select_action(state, false, r1);
  const auto a2 = agent.select_action(state, false, r2);
  CHECK(a1 == a2);
  for (const double v : a1) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("random_eps = 1 explores independently of the state") {
  AgentConfig cfg = small_config();
  cfg.random_eps = 1.0;
  DdpgAgent agent(cfg, 1);
  Observation s1{}, s2{};
  s2.fill(0.7);
  Rng r1(5), r2(5);
  const auto a1 = agent.select_action(s1, true, r1);
  const auto a2 = agent.select_action(s2, true, r2);
  CHECK(a1 == a2);  // same stream, state ignored
  for (const double v : a1) {
    CHECK(v >= -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("zero exploration noise reduces to the greedy action") {
  AgentConfig cfg = small_config();
  cfg.random_eps = 0.0;
  cfg.noise_eps = 0.0;
  DdpgAgent agent(cfg, 1);
  Observation state{};
  state.fill(0.1);
  Rng r1(6), r2(7);
  CHECK(agent.select_action(state, true, r1) ==
        agent.select_action(state, false, r2));
}

TEST_CASE("non-finite states are rejected") {
  DdpgAgent agent(small_config(), 1);
  Observation state{};
  state[3] = std::nan("");
  Rng rng(8);
  CHECK_THROWS_AS(agent.select_action(state, false, rng), InvalidStateError);
}

TEST_CASE("critic targets equal rewards when the discount is zero") {
  AgentConfig cfg = small_config();
  cfg.discount = 0.0;
  DdpgAgent agent(cfg, 9);
  Rng rng(10);
  const auto batch = small_batch(rng, 8);

  // expected pre-update loss computed independently
  double expected = 0.0;
  for (const Transition& t : batch) {
    Eigen::VectorXd in(kStateDim + kActionDim);
    in.head(kStateDim) = agent.normalizer().normalize(t.state);
    for (int a = 0; a < kActionDim; ++a) in(kStateDim + a) = t.action[a];
    const double q = agent.critic().forward(in)(0);
    const double y = std::clamp(t.reward, -1.0, 0.0);  // gamma = 0
    expected += (q - y) * (q - y);
  }
  expected /= batch.size();

  const double loss = agent.critic_update(batch);
  CHECK(loss == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("critic targets are clipped to the sparse-return floor") {
  AgentConfig cfg = small_config();
  cfg.discount = 0.98;
  DdpgAgent agent(cfg, 11);

  // force Q == -1000 everywhere: zero weights, output bias -1000
  Mlp constant({kStateDim + kActionDim, 4, 1}, Activation::kRelu,
               Activation::kLinear, 0);
  for (auto& w : constant.weights()) w.setZero();
  constant.biases()[1](0) = -1000.0;
  Mlp actor = agent.actor();
  agent.load_networks(actor, constant, actor, constant);

  Rng rng(12);
  auto batch = small_batch(rng, 4);
  for (auto& t : batch) t.done = false;

  // target y = clamp(r + 0.98 * (-1000), -50, 0) = -50; Q stays -1000
  const double loss = agent.critic_update(batch);
  CHECK(loss == doctest::Approx((1000.0 - 50.0) * (1000.0 - 50.0)).epsilon(1e-9));
}

TEST_CASE("a done transition with zero reward has target zero") {
  AgentConfig cfg = small_config();
  DdpgAgent agent(cfg, 13);
  Rng rng(14);
  auto batch = small_batch(rng, 1);
  batch[0].done = true;
  batch[0].next_achieved_goal = batch[0].desired_goal;
  batch[0].reward = 0.0;

  Eigen::VectorXd in(kStateDim + kActionDim);
  in.head(kStateDim) = agent.normalizer().normalize(batch[0].state);
  for (int a = 0; a < kActionDim; ++a) in(kStateDim + a) = batch[0].action[a];
  const double q = agent.critic().forward(in)(0);

  const double loss = agent.critic_update(batch);
  CHECK(loss == doctest::Approx(q * q).epsilon(1e-9));
}

TEST_CASE("actor is unchanged by a zero critic with zero action penalty") {
  AgentConfig cfg = small_config();
  cfg.action_l2 = 0.0;
  DdpgAgent agent(cfg, 15);

  Mlp zero_critic({kStateDim + kActionDim, 4, 1}, Activation::kRelu,
                  Activation::kLinear, 0);
  for (auto& w : zero_critic.weights()) w.setZero();
  Mlp actor = agent.actor();
  agent.load_networks(actor, zero_critic, actor, zero_critic);

  const auto before = agent.actor().weights();
  Rng rng(16);
  const auto batch = small_batch(rng, 8);
  agent.actor_update(batch);
  for (std::size_t l = 0; l < before.size(); ++l)
    CHECK(agent.actor().weights()[l] == before[l]);
}

TEST_CASE("a bowl-shaped critic drives greedy actions toward zero") {
  AgentConfig cfg = small_config();
  cfg.action_l2 = 0.0;
  cfg.lr_actor = 0.01;
  DdpgAgent agent(cfg, 17);

  const Mlp bowl = l1_bowl_critic();
  Mlp actor = agent.actor();
  agent.load_networks(actor, bowl, actor, bowl);

  Rng rng(18);
  const auto batch = small_batch(rng, 32);

  double first_loss = 0.0, last_loss = 0.0;
  double first_mag = 0.0, last_mag = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double loss = agent.actor_update(batch);
    double mag = 0.0;
    Rng greedy(0);
    for (const Transition& t : batch) {
      const auto a = agent.select_action(t.state, false, greedy);
      for (const double v : a) mag += std::abs(v);
    }
    mag /= batch.size() * kActionDim;
    if (it == 0) {
      first_loss = loss;
      first_mag = mag;
    }
    last_loss = loss;
    last_mag = mag;
  }
  CHECK(last_loss < first_loss);
  CHECK(last_mag < first_mag);
}

TEST_CASE("a huge action penalty shrinks greedy actions") {
  AgentConfig cfg = small_config();
  cfg.action_l2 = 1e6;
  cfg.lr_actor = 0.001;
  DdpgAgent agent(cfg, 19);

  Mlp zero_critic({kStateDim + kActionDim, 4, 1}, Activation::kRelu,
                  Activation::kLinear, 0);
  for (auto& w : zero_critic.weights()) w.setZero();
  Mlp actor = agent.actor();
  agent.load_networks(actor, zero_critic, actor, zero_critic);

  Rng rng(20);
  const auto batch = small_batch(rng, 16);
  auto magnitude = [&]() {
    double mag = 0.0;
    Rng greedy(0);
    for (const Transition& t : batch) {
      const auto a = agent.select_action(t.state, false, greedy);
      for (const double v : a) mag += std::abs(v);
    }
    return mag / (batch.size() * kActionDim);
  };

  const double before = magnitude();
  for (int it = 0; it < 100; ++it) agent.actor_update(batch);
  CHECK(magnitude() < before * 0.2);
}

TEST_CASE("update_targets mixes with the configured retain factor") {
  AgentConfig cfg = small_config();
  cfg.polyak_retain = 0.95;
  DdpgAgent agent(cfg, 21);
  const double target_before = agent.target_actor().weights()[0](0, 0);
  Rng rng(22);
  const auto batch = small_batch(rng, 8);
  agent.actor_update(batch);  // moves the actor away from its target
  const double source = agent.actor().weights()[0](0, 0);
  agent.update_targets();
  CHECK(agent.target_actor().weights()[0](0, 0) ==
        doctest::Approx(0.95 * target_before + 0.05 * source).epsilon(1e-12));
}

TEST_CASE("targets remain convex combinations of observed source values") {
  AgentConfig cfg = small_config();
  cfg.polyak_retain = 0.9;
  DdpgAgent agent(cfg, 23);
  Rng rng(24);
  const auto batch = small_batch(rng, 8);

  double lo = std::min(agent.target_actor().weights()[0](1, 1),
                       agent.actor().weights()[0](1, 1));
  double hi = std::max(agent.target_actor().weights()[0](1, 1),
                       agent.actor().weights()[0](1, 1));
  for (int it = 0; it < 20; ++it) {
    agent.actor_update(batch);
    lo = std::min(lo, agent.actor().weights()[0](1, 1));
    hi = std::max(hi, agent.actor().weights()[0](1, 1));
    agent.update_targets();
    const double t = agent.target_actor().weights()[0](1, 1);
    CHECK(t >= lo - 1e-12);
    CHECK(t <= hi + 1e-12);
  }
}

TEST_CASE("training for zero epochs changes nothing and reports nothing") {
  AgentConfig cfg = small_config();
  DdpgAgent agent(cfg, 25);
  const auto before = agent.actor().weights();
  LeverEnv env(EnvConfig::coarse());
  TrainStreams streams = TrainStreams::from_seed(3);
  const TrainingReport report = train(agent, env, 0, 5, cfg, streams);
  CHECK(report.epochs.empty());
  for (std::size_t l = 0; l < before.size(); ++l)
    CHECK(agent.actor().weights()[l] == before[l]);
}

TEST_CASE("identical seeds give identical training runs") {
  EnvConfig env_cfg = EnvConfig::coarse();
  env_cfg.max_steps = 20;
  AgentConfig cfg = small_config();
  cfg.updates_per_cycle = 3;

  auto run = [&]() {
    DdpgAgent agent(cfg, 31);
    LeverEnv env(env_cfg);
    TrainStreams streams = TrainStreams::from_seed(77);
    return train(agent, env, 2, 3, cfg, streams);
  };
  const TrainingReport a = run();
  const TrainingReport b = run();
  REQUIRE(a.epochs.size() == b.epochs.size());
  for (std::size_t i = 0; i < a.epochs.size(); ++i) {
    CHECK(a.epochs[i].mean_success == b.epochs[i].mean_success);
    CHECK(a.epochs[i].mean_final_error_rad == b.epochs[i].mean_final_error_rad);
    CHECK(a.epochs[i].actor_loss == b.epochs[i].actor_loss);
    CHECK(a.epochs[i].critic_loss == b.epochs[i].critic_loss);
  }
}

TEST_CASE("finetune with zero episodes leaves the agent unchanged") {
  AgentConfig cfg = small_config();
  DdpgAgent agent(cfg, 33);
  const auto before = agent.actor().weights();
  LeverEnv env(EnvConfig::fine());
  TrainStreams streams = TrainStreams::from_seed(5, "fine");
  const TrainingReport report = finetune(agent, env, 0, cfg, streams);
  CHECK(report.epochs.empty());
  for (std::size_t l = 0; l < before.size(); ++l)
    CHECK(agent.actor().weights()[l] == before[l]);
}

TEST_CASE("empty minibatches are rejected") {
  DdpgAgent agent(small_config(), 35);
  CHECK_THROWS_AS(agent.critic_update({}), InvalidArgumentError);
  CHECK_THROWS_AS(agent.actor_update({}), InvalidArgumentError);
}

TEST_CASE("agent config validation") {
  AgentConfig cfg;
  cfg.discount = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = AgentConfig{};
  cfg.random_eps = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = AgentConfig{};
  cfg.lr_actor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
