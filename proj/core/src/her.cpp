#include "levershap/her.hpp"

#include "levershap/error.hpp"

namespace levershap {

std::vector<Transition> her_augment(const EpisodeTrace& episode, int k,
                                    const RewardFn& reward_fn, Rng& rng) {
  if (k < 0) throw InvalidArgumentError("her_augment: k must be >= 0");
  if (episode.empty())
    throw InvalidArgumentError("her_augment: episode is empty");

  std::vector<Transition> out;
  const std::size_t n = episode.size();
  out.reserve(n + static_cast<std::size_t>(k) * (n - 1));
  out.insert(out.end(), episode.begin(), episode.end());

  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (int j = 0; j < k; ++j) {
      // future index, uniform over strictly later steps
      const std::size_t future =
          t + 1 + static_cast<std::size_t>(rng.uniform_index(n - 1 - t));
      Transition copy = episode[t];
      const double goal = episode[future].achieved_goal;
      copy.desired_goal = goal;
      copy.state[kGoalSlot] = goal;
      copy.next_state[kGoalSlot] = goal;
      copy.reward = reward_fn(copy.next_achieved_goal, goal);
      out.push_back(copy);
    }
  }
  return out;
}

}  // namespace levershap
