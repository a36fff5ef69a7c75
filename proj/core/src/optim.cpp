#include "levershap/optim.hpp"

#include <cmath>

#include "levershap/error.hpp"

namespace levershap {

AdamState AdamState::for_mlp(const Mlp& mlp) {
  AdamState s;
  for (const auto& w : mlp.weights()) {
    s.weight_m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    s.weight_v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : mlp.biases()) {
    s.bias_m.push_back(Eigen::VectorXd::Zero(b.size()));
    s.bias_v.push_back(Eigen::VectorXd::Zero(b.size()));
  }
  return s;
}

namespace {

void check_congruent(const Mlp& mlp, const ParamGrads& grads,
                     const AdamState& state) {
  const std::size_t layers = mlp.weights().size();
  if (grads.weights.size() != layers || grads.biases.size() != layers ||
      state.weight_m.size() != layers || state.bias_m.size() != layers)
    throw ShapeError("adam_step: layer count mismatch");
  for (std::size_t l = 0; l < layers; ++l) {
    if (grads.weights[l].rows() != mlp.weights()[l].rows() ||
        grads.weights[l].cols() != mlp.weights()[l].cols() ||
        grads.biases[l].size() != mlp.biases()[l].size())
      throw ShapeError("adam_step: gradient shape mismatch at layer " +
                       std::to_string(l));
  }
}

}  // namespace

void adam_step(Mlp& mlp, const ParamGrads& grads, AdamState& state,
               double learning_rate) {
  check_congruent(mlp, grads, state);
  if (!grads.all_finite())
    throw PoisonedUpdateError("adam_step: non-finite gradient, update refused");

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);

  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = state.beta1 * m + (1.0 - state.beta1) * grad;
    v = (state.beta2 * v.array() + (1.0 - state.beta2) * grad.array().square())
            .matrix();
    param.array() -=
        learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
  };

  for (std::size_t l = 0; l < mlp.weights().size(); ++l) {
    update(mlp.weights()[l], grads.weights[l], state.weight_m[l],
           state.weight_v[l]);
    update(mlp.biases()[l], grads.biases[l], state.bias_m[l], state.bias_v[l]);
  }
}

void polyak_update(Mlp& target, const Mlp& source, double retain) {
  if (!same_architecture(target, source))
    throw ShapeError("polyak_update: architecture mismatch");
  if (retain < 0.0 || retain > 1.0)
    throw InvalidArgumentError("polyak_update: retain must be in [0, 1]");
  for (std::size_t l = 0; l < target.weights().size(); ++l) {
    target.weights()[l] =
        retain * target.weights()[l] + (1.0 - retain) * source.weights()[l];
    target.biases()[l] =
        retain * target.biases()[l] + (1.0 - retain) * source.biases()[l];
  }
}

}  // namespace levershap
