#pragma once

#include <filesystem>
#include <vector>

#include "levershap/agent.hpp"
#include "levershap/lever_env.hpp"
#include "levershap/replay_buffer.hpp"

namespace levershap {

struct EpochStats {
  int epoch = 0;
  double mean_success = 0.0;
  double mean_final_error_rad = 0.0;
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

struct TrainingReport {
  std::vector<EpochStats> epochs;
};

// CSV columns: epoch,mean_success,mean_final_error_rad,actor_loss,critic_loss.
// Doubles are written with shortest-round-trip formatting so a fixed seed
// yields byte-identical files.
void write_report_csv(const TrainingReport& report,
                      const std::filesystem::path& path);

// Independent named streams derived from one root seed. Training never
// advances the eval stream and vice versa.
struct TrainStreams {
  Rng env;
  Rng agent;
  Rng her;
  Rng eval;

  static TrainStreams from_seed(std::uint64_t root_seed,
                                std::string_view stage = "");
};

struct RolloutResult {
  EpisodeTrace episode;
  bool final_success = false;
  double final_error = 0.0;
};

RolloutResult rollout_episode(const DdpgAgent& agent, LeverEnv& env,
                              bool explore, Curriculum curriculum,
                              Rng& env_rng, Rng& action_rng);

// Greedy success rate over n free-start episodes.
double evaluate_success(const DdpgAgent& agent, LeverEnv& env, int n_episodes,
                        Rng& eval_rng);

// Per epoch: episodes_per_epoch exploratory rollouts (alternating grasp-start
// curriculum), hindsight augmentation into the buffer, then
// config.updates_per_cycle optimizer cycles, then a 10-episode greedy
// evaluation.
TrainingReport train(DdpgAgent& agent, LeverEnv& env, int epochs,
                     int episodes_per_epoch, const AgentConfig& config,
                     TrainStreams& streams, ReplayBuffer* buffer = nullptr);

// Same loop over a fixed episode budget, grouped into cycles of
// episodes_per_cycle; meant for the fine-fidelity stage with its own
// learning rates.
TrainingReport finetune(DdpgAgent& agent, LeverEnv& env_fine, int episodes,
                        const AgentConfig& config_fine, TrainStreams& streams,
                        int episodes_per_cycle = 30);

}  // namespace levershap
