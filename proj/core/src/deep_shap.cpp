#include "levershap/deep_shap.hpp"

#include <cmath>

#include "levershap/error.hpp"

namespace levershap {

namespace {

constexpr double kRescaleEps = 1e-6;

double activation_derivative(Activation act, double z, double a) {
  switch (act) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - a * a;
    case Activation::kLinear:
      return 1.0;
  }
  throw UnsupportedModelError("deep_shap: unsupported activation");
}

}  // namespace

Attribution deep_shap(const Mlp& mlp, const Eigen::VectorXd& x,
                      const BackgroundDataset& background, int output_index) {
  if (background.row_count() == 0)
    throw InvalidArgumentError("deep_shap: background dataset is empty");
  if (background.feature_count() != x.size() || x.size() != mlp.input_size())
    throw ShapeError("deep_shap: input width mismatch");
  if (output_index < 0 || output_index >= mlp.output_size())
    throw InvalidArgumentError("deep_shap: output_index out of range");

  ForwardCache cache_x;
  mlp.forward(x, &cache_x);

  Eigen::VectorXd phi = Eigen::VectorXd::Zero(x.size());
  double phi0 = 0.0;
  const int layers = mlp.layer_count();

  for (int r = 0; r < background.row_count(); ++r) {
    const Eigen::VectorXd ref = background.rows.row(r).transpose();
    ForwardCache cache_ref;
    mlp.forward(ref, &cache_ref);
    phi0 += cache_ref.post.back()(output_index) / background.row_count();

    // multipliers on the output layer select the explained unit
    Eigen::VectorXd mult = Eigen::VectorXd::Zero(mlp.output_size());
    mult(output_index) = 1.0;

    for (int l = layers - 1; l >= 0; --l) {
      const Activation act = mlp.activation_at(l);
      // rescale rule through the nonlinearity
      Eigen::VectorXd scaled(mult.size());
      for (Eigen::Index u = 0; u < mult.size(); ++u) {
        const double dz = cache_x.pre[l](u) - cache_ref.pre[l](u);
        const double da = cache_x.post[l](u) - cache_ref.post[l](u);
        const double slope =
            std::abs(dz) < kRescaleEps
                ? activation_derivative(act, cache_x.pre[l](u),
                                        cache_x.post[l](u))
                : da / dz;
        scaled(u) = mult(u) * slope;
      }
      // linear rule through the affine layer
      mult = mlp.weights()[l].transpose() * scaled;
    }

    phi += mult.cwiseProduct(x - ref) / background.row_count();
  }

  Attribution out;
  out.phi = std::move(phi);
  out.phi0 = phi0;
  out.explained_input = x;
  out.output_index = output_index;
  out.estimator = ShapEstimator::kDeepRescale;
  return out;
}

}  // namespace levershap
