#include "levershap/shap.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "levershap/error.hpp"

namespace levershap {

namespace {

constexpr int kExactFeatureLimit = 15;

void check_inputs(const Eigen::VectorXd& x, const BackgroundDataset& background,
                  int output_index) {
  if (background.row_count() == 0)
    throw InvalidArgumentError("shap: background dataset is empty");
  if (background.feature_count() != x.size())
    throw ShapeError("shap: background width differs from explained input");
  if (output_index < 0)
    throw InvalidArgumentError("shap: output_index must be >= 0");
}

}  // namespace

double coalition_value(const VectorModel& model, const Eigen::VectorXd& x,
                       const BackgroundDataset& background,
                       const CoalitionMask& mask, int output_index) {
  check_inputs(x, background, output_index);
  if (static_cast<int>(mask.size()) != x.size())
    throw ShapeError("shap: mask length differs from explained input");

  double sum = 0.0;
  Eigen::VectorXd composite(x.size());
  for (int r = 0; r < background.row_count(); ++r) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      composite(i) = mask[static_cast<std::size_t>(i)] ? x(i)
                                                       : background.rows(r, i);
    sum += model(composite)(output_index);
  }
  return sum / background.row_count();
}

Attribution exact_shapley(const VectorModel& model, const Eigen::VectorXd& x,
                          const BackgroundDataset& background,
                          int output_index) {
  check_inputs(x, background, output_index);
  const int m = static_cast<int>(x.size());
  if (m > kExactFeatureLimit)
    throw BudgetExceededError(
        "exact_shapley: " + std::to_string(m) + " features would need 2^" +
        std::to_string(m) + " coalition evaluations; use sampled_shapley");

  // v(S) for every coalition, indexed by bitmask
  const std::size_t n_masks = std::size_t{1} << m;
  std::vector<double> value(n_masks);
  CoalitionMask mask(m);
  for (std::size_t bits = 0; bits < n_masks; ++bits) {
    for (int i = 0; i < m; ++i) mask[i] = (bits >> i) & 1u;
    value[bits] = coalition_value(model, x, background, mask, output_index);
  }

  // weight by coalition size: |S|! (M-|S|-1)! / M!
  std::vector<double> weight(m);
  for (int s = 0; s < m; ++s) {
    double w = 1.0;
    for (int i = 2; i <= s; ++i) w *= i;          // s!
    for (int i = 2; i <= m - s - 1; ++i) w *= i;  // (M-s-1)!
    for (int i = 2; i <= m; ++i) w /= i;          // / M!
    weight[s] = w;
  }

  Attribution out;
  out.phi = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t bits = 0; bits < n_masks; ++bits) {
      if (bits & bit) continue;
      const int size = std::popcount(bits);
      out.phi(i) += weight[size] * (value[bits | bit] - value[bits]);
    }
  }
  out.phi0 = value[0];
  out.explained_input = x;
  out.output_index = output_index;
  out.estimator = ShapEstimator::kExact;
  return out;
}

Attribution sampled_shapley(const VectorModel& model, const Eigen::VectorXd& x,
                            const BackgroundDataset& background,
                            int output_index, int n_permutations, Rng& rng) {
  check_inputs(x, background, output_index);
  if (n_permutations < 1)
    throw InvalidArgumentError("sampled_shapley: n_permutations must be >= 1");
  const int m = static_cast<int>(x.size());

  CoalitionMask mask(m, false);
  const double base =
      coalition_value(model, x, background, mask, output_index);

  std::vector<int> order(m);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(m);
  for (int p = 0; p < n_permutations; ++p) {
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates
    for (int i = m - 1; i > 0; --i) {
      const auto j = static_cast<int>(
          rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    std::fill(mask.begin(), mask.end(), false);
    double prev = base;
    for (const int feature : order) {
      mask[feature] = true;
      const double cur =
          coalition_value(model, x, background, mask, output_index);
      phi(feature) += cur - prev;
      prev = cur;
    }
  }

  Attribution out;
  out.phi = phi / n_permutations;
  out.phi0 = base;
  out.explained_input = x;
  out.output_index = output_index;
  out.estimator = ShapEstimator::kPermutation;
  return out;
}

}  // namespace levershap
