#pragma once

#include <filesystem>
#include <vector>

#include "levershap/transition.hpp"

namespace levershap {

// One evaluation step as logged to JSON-lines: the observation the policy
// acted on, the action taken, and the outcome of that step.
struct EpisodeStep {
  int t = 0;
  Observation observation{};
  std::array<double, kActionDim> action{};
  double reward = 0.0;
  double achieved_goal = 0.0;  // lever angle after the step
  double desired_goal = 0.0;
  bool is_success = false;
};

using EpisodeLog = std::vector<EpisodeStep>;

void write_episode_log(const EpisodeLog& log,
                       const std::filesystem::path& path);
EpisodeLog read_episode_log(const std::filesystem::path& path);

}  // namespace levershap
