#pragma once

#include <functional>

#include "levershap/rng.hpp"
#include "levershap/transition.hpp"

namespace levershap {

using RewardFn = std::function<double(double achieved, double desired)>;

// Hindsight relabeling with the "future" strategy. Returns the original
// transitions plus, for every transition that has at least one strictly later
// step, k copies whose desired goal is replaced by the achieved goal of a
// uniformly drawn later step of the same episode and whose reward is
// recomputed with reward_fn. The final step has no future and gets no copies.
// Copies differ from their originals only in the goal slot of state and
// next_state, in desired_goal, and in reward.
std::vector<Transition> her_augment(const EpisodeTrace& episode, int k,
                                    const RewardFn& reward_fn, Rng& rng);

}  // namespace levershap
