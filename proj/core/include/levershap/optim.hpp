#pragma once

#include <Eigen/Dense>
#include <vector>

#include "levershap/mlp.hpp"

namespace levershap {

// Adam moment buffers for one Mlp. Moments start at zero; step_count
// increases by exactly one per accepted update.
struct AdamState {
  std::vector<Eigen::MatrixXd> weight_m, weight_v;
  std::vector<Eigen::VectorXd> bias_m, bias_v;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_mlp(const Mlp& mlp);
};

// One bias-corrected Adam update. Throws PoisonedUpdateError on non-finite
// gradients, leaving parameters and moments untouched.
void adam_step(Mlp& mlp, const ParamGrads& grads, AdamState& state,
               double learning_rate);

// target <- retain * target + (1 - retain) * source, parameterwise.
void polyak_update(Mlp& target, const Mlp& source, double retain);

}  // namespace levershap
