#include "levershap/mlp.hpp"

#include <cmath>

#include "levershap/error.hpp"
#include "levershap/rng.hpp"

namespace levershap {

bool ParamGrads::all_finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kTanh:
      return z.array().tanh().matrix();
    case Activation::kLinear:
      return z;
  }
  throw UnsupportedModelError("unknown activation");
}

namespace {

// Derivative expressed through pre- and post-activation values.
Eigen::ArrayXXd activation_grad(Activation act, const Eigen::MatrixXd& pre,
                                const Eigen::MatrixXd& post) {
  switch (act) {
    case Activation::kRelu:
      return (pre.array() > 0.0).cast<double>();
    case Activation::kTanh:
      return 1.0 - post.array().square();
    case Activation::kLinear:
      return Eigen::ArrayXXd::Ones(pre.rows(), pre.cols());
  }
  throw UnsupportedModelError("unknown activation");
}

}  // namespace

Mlp::Mlp(std::vector<int> layer_sizes, Activation hidden_activation,
         Activation output_activation, std::uint64_t seed)
    : layer_sizes_(std::move(layer_sizes)),
      hidden_(hidden_activation),
      output_(output_activation) {
  if (layer_sizes_.size() < 2)
    throw InvalidArgumentError("mlp: need at least input and output layer");
  for (const int n : layer_sizes_)
    if (n <= 0) throw InvalidArgumentError("mlp: layer sizes must be positive");

  Rng rng(seed);
  weights_.reserve(layer_sizes_.size() - 1);
  biases_.reserve(layer_sizes_.size() - 1);
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const int fan_in = layer_sizes_[l];
    const int fan_out = layer_sizes_[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i)
      for (int j = 0; j < fan_in; ++j) w(i, j) = rng.uniform(-bound, bound);
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& inputs,
                             ForwardCache* cache) const {
  if (inputs.rows() != input_size())
    throw ShapeError("mlp forward: input has " + std::to_string(inputs.rows()) +
                     " rows, expected " + std::to_string(input_size()));
  if (cache) {
    cache->input = inputs;
    cache->pre.clear();
    cache->post.clear();
    cache->pre.reserve(weights_.size());
    cache->post.reserve(weights_.size());
  }
  Eigen::MatrixXd a = inputs;
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::MatrixXd z = (weights_[l] * a).colwise() + biases_[l];
    a = apply_activation(activation_at(l), z);
    if (cache) {
      cache->pre.push_back(std::move(z));
      cache->post.push_back(a);
    }
  }
  return a;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input,
                             ForwardCache* cache) const {
  return forward(static_cast<const Eigen::MatrixXd&>(input), cache).col(0);
}

ParamGrads Mlp::backward(const ForwardCache& cache,
                         const Eigen::MatrixXd& output_grad,
                         Eigen::MatrixXd* input_grad) const {
  const int layers = layer_count();
  if (static_cast<int>(cache.pre.size()) != layers ||
      static_cast<int>(cache.post.size()) != layers ||
      cache.input.rows() != input_size())
    throw ShapeError("mlp backward: cache does not match this network");
  if (output_grad.rows() != output_size() ||
      output_grad.cols() != cache.input.cols())
    throw ShapeError("mlp backward: output_grad shape mismatch");

  ParamGrads grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);

  Eigen::MatrixXd upstream = output_grad;
  for (int l = layers - 1; l >= 0; --l) {
    const Eigen::MatrixXd dz =
        (upstream.array() *
         activation_grad(activation_at(l), cache.pre[l], cache.post[l]))
            .matrix();
    const Eigen::MatrixXd& below = l == 0 ? cache.input : cache.post[l - 1];
    grads.weights[l].noalias() = dz * below.transpose();
    grads.biases[l] = dz.rowwise().sum();
    if (l > 0 || input_grad) upstream.noalias() = weights_[l].transpose() * dz;
  }
  if (input_grad) *input_grad = std::move(upstream);
  return grads;
}

bool same_architecture(const Mlp& a, const Mlp& b) {
  return a.layer_sizes() == b.layer_sizes() &&
         a.hidden_activation() == b.hidden_activation() &&
         a.output_activation() == b.output_activation();
}

}  // namespace levershap
