#pragma once

#include "levershap/mlp.hpp"
#include "levershap/shap.hpp"

namespace levershap {

// DeepLIFT-style multiplier propagation for dense networks, averaged over
// the background rows. Affine layers use the linear rule; relu/tanh units use
// the rescale rule (delta-output over delta-input, with the local gradient
// substituted when |delta-input| < 1e-6). Each per-reference attribution
// satisfies summation-to-delta, so phi0 + sum(phi) equals the model output
// at x exactly.
Attribution deep_shap(const Mlp& mlp, const Eigen::VectorXd& x,
                      const BackgroundDataset& background, int output_index);

}  // namespace levershap
