#include "levershap/explain.hpp"

#include "levershap/deep_shap.hpp"
#include "levershap/error.hpp"

namespace levershap {

BackgroundDataset build_background(const std::vector<EpisodeLog>& episodes,
                                   const ObsNormalizer& normalizer,
                                   std::optional<int> max_rows) {
  std::size_t total = 0;
  for (const auto& ep : episodes) total += ep.size();
  if (total == 0)
    throw InvalidArgumentError("build_background: no observations");

  BackgroundDataset bg;
  bg.rows.resize(static_cast<Eigen::Index>(total), kStateDim);
  Eigen::Index row = 0;
  for (std::size_t e = 0; e < episodes.size(); ++e) {
    for (const EpisodeStep& step : episodes[e])
      bg.rows.row(row++) = normalizer.normalize(step.observation).transpose();
    bg.source_episodes.push_back("episode_" + std::to_string(e));
  }

  if (max_rows && *max_rows > 0 &&
      static_cast<Eigen::Index>(*max_rows) < bg.rows.rows()) {
    const Eigen::Index keep = *max_rows;
    Eigen::MatrixXd truncated(keep, kStateDim);
    for (Eigen::Index i = 0; i < keep; ++i) {
      // evenly spaced subsample
      const Eigen::Index src = i * bg.rows.rows() / keep;
      truncated.row(i) = bg.rows.row(src);
    }
    bg.rows = std::move(truncated);
  }
  return bg;
}

EpisodeAttributions explain_episode(const Mlp& actor,
                                    const ObsNormalizer& normalizer,
                                    const EpisodeLog& episode,
                                    const BackgroundDataset& background,
                                    ShapEstimator estimator,
                                    int n_permutations, Rng* rng) {
  if (actor.input_size() != kStateDim)
    throw ShapeError("explain_episode: actor input width must be 20");
  if (estimator == ShapEstimator::kExact && actor.input_size() > 15)
    throw BudgetExceededError(
        "explain_episode: exact enumeration over 20 features is infeasible; "
        "use the permutation or deep_rescale estimator");
  if (estimator == ShapEstimator::kPermutation && rng == nullptr)
    throw InvalidArgumentError(
        "explain_episode: permutation estimator needs an rng");

  const VectorModel model = [&actor](const Eigen::VectorXd& in) {
    return actor.forward(in);
  };

  EpisodeAttributions result;
  result.reserve(episode.size());
  for (const EpisodeStep& step : episode) {
    const Eigen::VectorXd x = normalizer.normalize(step.observation);
    std::vector<Attribution> per_output;
    per_output.reserve(actor.output_size());
    for (int out = 0; out < actor.output_size(); ++out) {
      switch (estimator) {
        case ShapEstimator::kDeepRescale:
          per_output.push_back(deep_shap(actor, x, background, out));
          break;
        case ShapEstimator::kPermutation:
          per_output.push_back(sampled_shapley(model, x, background, out,
                                               n_permutations, *rng));
          break;
        case ShapEstimator::kExact:
          per_output.push_back(exact_shapley(model, x, background, out));
          break;
      }
    }
    result.push_back(std::move(per_output));
  }
  return result;
}

}  // namespace levershap
