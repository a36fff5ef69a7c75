#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "levershap/agent.hpp"
#include "levershap/lever_env.hpp"

namespace levershap {

struct ScheduleConfig {
  int epochs = 50;
  int episodes_per_epoch = 30;
  int finetune_episodes = 300;
};

struct EvalConfig {
  int n_test_episodes = 5;
};

struct PathsConfig {
  std::string checkpoint_dir = "checkpoints";
  std::string log_dir = "logs";
};

// Full experiment description. An empty config file yields the defaults;
// unknown keys are rejected with the offending key path.
struct RunConfig {
  std::uint64_t seed = 7;
  EnvConfig env_coarse = EnvConfig::coarse();
  EnvConfig env_fine = EnvConfig::fine();
  AgentConfig agent;              // coarse-stage learning rates 0.001
  double lr_actor_fine = 0.0008;  // fine-stage learning rates
  double lr_critic_fine = 0.0008;
  ScheduleConfig schedule;
  EvalConfig eval;
  PathsConfig paths;

  AgentConfig fine_agent_config() const;
  void validate() const;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

}  // namespace levershap
