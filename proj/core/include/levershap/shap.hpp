#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "levershap/rng.hpp"

namespace levershap {

// Reference rows defining the expectation used for absent features. One row
// per observation, width M.
struct BackgroundDataset {
  Eigen::MatrixXd rows;  // (n_rows x M)
  std::vector<std::string> source_episodes;

  int feature_count() const { return static_cast<int>(rows.cols()); }
  int row_count() const { return static_cast<int>(rows.rows()); }
};

// true = feature present (taken from x), false = replaced by background.
using CoalitionMask = std::vector<bool>;

using VectorModel = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

enum class ShapEstimator { kExact, kPermutation, kDeepRescale };

struct Attribution {
  Eigen::VectorXd phi;
  double phi0 = 0.0;
  Eigen::VectorXd explained_input;
  int output_index = 0;
  ShapEstimator estimator = ShapEstimator::kExact;
};

// Interventional coalition value: mean over background rows of the model on
// the composite taking present features from x and absent ones from the row.
// Treats features as independent.
double coalition_value(const VectorModel& model, const Eigen::VectorXd& x,
                       const BackgroundDataset& background,
                       const CoalitionMask& mask, int output_index);

// Full enumeration over all 2^M coalitions, weighted by
// |S|! (M-|S|-1)! / M!. Guarded to M <= 15.
Attribution exact_shapley(const VectorModel& model, const Eigen::VectorXd& x,
                          const BackgroundDataset& background,
                          int output_index);

// Unbiased permutation-sampling estimate: marginal contributions accumulated
// in random insertion order, averaged over n_permutations.
Attribution sampled_shapley(const VectorModel& model, const Eigen::VectorXd& x,
                            const BackgroundDataset& background,
                            int output_index, int n_permutations, Rng& rng);

}  // namespace levershap
