#pragma once

#include <Eigen/Dense>
#include <vector>

#include "levershap/mlp.hpp"
#include "levershap/rng.hpp"
#include "levershap/transition.hpp"

namespace levershap::test {

// Small random network for gradient and estimator checks.
inline Mlp random_mlp(Rng& rng, int input, int output, int depth, int width,
                      Activation hidden = Activation::kRelu,
                      Activation out = Activation::kLinear) {
  std::vector<int> sizes;
  sizes.push_back(input);
  for (int i = 0; i < depth; ++i) sizes.push_back(width);
  sizes.push_back(output);
  Mlp mlp(sizes, hidden, out, rng.next_u64());
  return mlp;
}

inline Eigen::VectorXd random_vector(Rng& rng, int n, double lo = -1.0,
                                     double hi = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

// Central finite difference of loss(p) = g . mlp(x) with respect to every
// parameter; the independent oracle for backward().
struct FiniteDifferenceResult {
  double max_rel_err = 0.0;
};

inline double loss_of(const Mlp& mlp, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& g) {
  return g.dot(mlp.forward(x));
}

inline FiniteDifferenceResult check_gradients_fd(Mlp mlp,
                                                 const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& g,
                                                 double h = 1e-5) {
  ForwardCache cache;
  mlp.forward(static_cast<const Eigen::MatrixXd&>(x), &cache);
  const ParamGrads analytic = mlp.backward(cache, g);

  FiniteDifferenceResult result;
  auto accumulate = [&](double analytic_v, double* param) {
    const double saved = *param;
    *param = saved + h;
    const double up = loss_of(mlp, x, g);
    *param = saved - h;
    const double down = loss_of(mlp, x, g);
    *param = saved;
    const double fd = (up - down) / (2.0 * h);
    const double err = std::abs(analytic_v - fd);
    const double scale = std::max(std::abs(analytic_v), std::abs(fd));
    // absolute tolerance 1e-7 near zero, relative elsewhere
    if (err > 1e-7)
      result.max_rel_err = std::max(result.max_rel_err, err / scale);
  };

  for (int l = 0; l < mlp.layer_count(); ++l) {
    Eigen::MatrixXd& w = mlp.weights()[l];
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        accumulate(analytic.weights[l](i, j), &w(i, j));
    Eigen::VectorXd& b = mlp.biases()[l];
    for (Eigen::Index i = 0; i < b.size(); ++i)
      accumulate(analytic.biases[l](i), &b(i));
  }
  return result;
}

inline Transition make_transition(double achieved, double next_achieved,
                                  double desired, double reward) {
  Transition t{};
  t.state.fill(0.0);
  t.next_state.fill(0.0);
  t.action.fill(0.0);
  t.state[kLeverAngleSlot] = achieved;
  t.next_state[kLeverAngleSlot] = next_achieved;
  t.state[kGoalSlot] = desired;
  t.next_state[kGoalSlot] = desired;
  t.achieved_goal = achieved;
  t.next_achieved_goal = next_achieved;
  t.desired_goal = desired;
  t.reward = reward;
  t.done = false;
  return t;
}

}  // namespace levershap::test
