#pragma once

#include <array>
#include <filesystem>
#include <vector>

namespace levershap {

inline constexpr int kStateDim = 20;
inline constexpr int kActionDim = 4;
// The desired goal occupies the final state slot; it is the only
// goal-dependent entry and the only one hindsight relabeling touches.
inline constexpr int kGoalSlot = 19;
inline constexpr int kLeverAngleSlot = 18;

// 20-dim state as the environment reports it; slot 19 carries the goal.
using Observation = std::array<double, kStateDim>;

struct Transition {
  Observation state;
  std::array<double, kActionDim> action;
  double reward;  // sparse: -1 or 0
  Observation next_state;
  double achieved_goal;       // lever angle at the step's start state (rad)
  double next_achieved_goal;  // lever angle after the step (rad)
  double desired_goal;        // rad
  bool done;
};

// Time-ordered steps of one episode: next_state of step t equals state of
// step t+1.
using EpisodeTrace = std::vector<Transition>;

// JSON-lines, one Transition per line, field names as in the struct.
void write_episode_trace(const EpisodeTrace& trace,
                         const std::filesystem::path& path);
EpisodeTrace read_episode_trace(const std::filesystem::path& path);

}  // namespace levershap
