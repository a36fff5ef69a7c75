#include "levershap/training.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "levershap/error.hpp"
#include "levershap/her.hpp"

namespace levershap {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_report_csv(const TrainingReport& report,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "epoch,mean_success,mean_final_error_rad,actor_loss,critic_loss\n";
  for (const EpochStats& row : report.epochs) {
    out << row.epoch << ',' << format_double(row.mean_success) << ','
        << format_double(row.mean_final_error_rad) << ','
        << format_double(row.actor_loss) << ','
        << format_double(row.critic_loss) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

TrainStreams TrainStreams::from_seed(std::uint64_t root_seed,
                                     std::string_view stage) {
  const std::string prefix = stage.empty() ? "" : std::string(stage) + ".";
  return TrainStreams{named_stream(root_seed, prefix + "env"),
                      named_stream(root_seed, prefix + "agent"),
                      named_stream(root_seed, prefix + "her"),
                      named_stream(root_seed, prefix + "eval")};
}

RolloutResult rollout_episode(const DdpgAgent& agent, LeverEnv& env,
                              bool explore, Curriculum curriculum,
                              Rng& env_rng, Rng& action_rng) {
  RolloutResult result;
  Observation obs = env.reset(env_rng, curriculum);
  for (;;) {
    const auto action = agent.select_action(obs, explore, action_rng);
    const double achieved_before = obs[kLeverAngleSlot];
    const StepResult sr = env.step(action);

    Transition t;
    t.state = obs;
    t.action = action;
    t.reward = sr.reward;
    t.next_state = sr.observation;
    t.achieved_goal = achieved_before;
    t.next_achieved_goal = sr.achieved_goal;
    t.desired_goal = obs[kGoalSlot];
    t.done = sr.done;
    result.episode.push_back(t);

    obs = sr.observation;
    if (sr.done) {
      result.final_success = sr.is_success;
      result.final_error = std::abs(sr.achieved_goal - obs[kGoalSlot]);
      break;
    }
  }
  return result;
}

double evaluate_success(const DdpgAgent& agent, LeverEnv& env, int n_episodes,
                        Rng& eval_rng) {
  if (n_episodes <= 0) return 0.0;
  Rng greedy_rng(0);  // unused by greedy selection
  int successes = 0;
  for (int i = 0; i < n_episodes; ++i) {
    const RolloutResult r = rollout_episode(agent, env, false,
                                            Curriculum::kFree, eval_rng,
                                            greedy_rng);
    if (r.final_success) ++successes;
  }
  return static_cast<double>(successes) / n_episodes;
}

namespace {

TrainingReport run_cycles(DdpgAgent& agent, LeverEnv& env, int cycles,
                          int episodes_per_cycle, const AgentConfig& config,
                          TrainStreams& streams, ReplayBuffer* external_buffer) {
  config.validate();
  agent.set_config(config);

  // minibatches are drawn through streams.her, not the buffer's own stream
  ReplayBuffer local(config.buffer_capacity);
  ReplayBuffer& buffer = external_buffer ? *external_buffer : local;
  const RewardFn reward_fn = [&env](double achieved, double desired) {
    return lever_reward(achieved, desired, env.config().success_tol);
  };

  TrainingReport report;
  for (int cycle = 0; cycle < cycles; ++cycle) {
    for (int ep = 0; ep < episodes_per_cycle; ++ep) {
      const RolloutResult r =
          rollout_episode(agent, env, true, Curriculum::kAlternate,
                          streams.env, streams.agent);
      for (const Transition& t : r.episode) agent.normalizer().update(t.state);
      if (!r.episode.empty())
        agent.normalizer().update(r.episode.back().next_state);

      const auto augmented =
          her_augment(r.episode, config.her_k, reward_fn, streams.her);
      buffer.push(augmented);
    }

    double actor_loss = 0.0;
    double critic_loss = 0.0;
    for (int u = 0; u < config.updates_per_cycle; ++u) {
      const auto batch = buffer.sample(config.batch_size, streams.her);
      critic_loss += agent.critic_update(batch);
      actor_loss += agent.actor_update(batch);
      agent.update_targets();
    }
    if (config.updates_per_cycle > 0) {
      actor_loss /= config.updates_per_cycle;
      critic_loss /= config.updates_per_cycle;
    }

    // 10 greedy evaluation episodes per cycle
    constexpr int kEvalEpisodes = 10;
    Rng greedy_rng(0);
    int successes = 0;
    double error_sum = 0.0;
    for (int i = 0; i < kEvalEpisodes; ++i) {
      const RolloutResult r = rollout_episode(
          agent, env, false, Curriculum::kFree, streams.eval, greedy_rng);
      successes += r.final_success ? 1 : 0;
      error_sum += r.final_error;
    }

    EpochStats row;
    row.epoch = cycle + 1;
    row.mean_success = static_cast<double>(successes) / kEvalEpisodes;
    row.mean_final_error_rad = error_sum / kEvalEpisodes;
    row.actor_loss = actor_loss;
    row.critic_loss = critic_loss;
    report.epochs.push_back(row);
  }
  return report;
}

}  // namespace

TrainingReport train(DdpgAgent& agent, LeverEnv& env, int epochs,
                     int episodes_per_epoch, const AgentConfig& config,
                     TrainStreams& streams, ReplayBuffer* buffer) {
  if (epochs < 0 || episodes_per_epoch < 0)
    throw InvalidArgumentError("train: negative schedule");
  return run_cycles(agent, env, epochs, episodes_per_epoch, config, streams,
                    buffer);
}

TrainingReport finetune(DdpgAgent& agent, LeverEnv& env_fine, int episodes,
                        const AgentConfig& config_fine, TrainStreams& streams,
                        int episodes_per_cycle) {
  if (episodes < 0) throw InvalidArgumentError("finetune: negative episodes");
  if (episodes_per_cycle <= 0)
    throw InvalidArgumentError("finetune: episodes_per_cycle must be positive");
  const int cycles = (episodes + episodes_per_cycle - 1) / episodes_per_cycle;
  return run_cycles(agent, env_fine, cycles, episodes_per_cycle, config_fine,
                    streams, nullptr);
}

}  // namespace levershap
