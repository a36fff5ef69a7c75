#pragma once

#include <optional>

#include "levershap/episode_log.hpp"
#include "levershap/mlp.hpp"
#include "levershap/normalizer.hpp"
#include "levershap/shap.hpp"

namespace levershap {

// Attributions for one episode: [step][action output].
using EpisodeAttributions = std::vector<std::vector<Attribution>>;

// Normalized observations of the given episodes, stacked row-wise.
// max_rows, when set, truncates to evenly spaced rows.
BackgroundDataset build_background(const std::vector<EpisodeLog>& episodes,
                                   const ObsNormalizer& normalizer,
                                   std::optional<int> max_rows = std::nullopt);

// Explains the deployed policy at every step of the episode: observations are
// normalized with the agent's frozen normalizer, then each of the actor's
// outputs is attributed against the background. The exact estimator is
// rejected for the 20-feature state.
EpisodeAttributions explain_episode(const Mlp& actor,
                                    const ObsNormalizer& normalizer,
                                    const EpisodeLog& episode,
                                    const BackgroundDataset& background,
                                    ShapEstimator estimator,
                                    int n_permutations = 200,
                                    Rng* rng = nullptr);

}  // namespace levershap
