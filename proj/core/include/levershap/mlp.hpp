#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace levershap {

enum class Activation { kRelu, kTanh, kLinear };

// Per-layer parameter gradients, shape-congruent with the owning Mlp.
struct ParamGrads {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  bool all_finite() const;
};

// Activations recorded by a forward pass; required by the matching backward
// pass. Columns index batch samples.
struct ForwardCache {
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> pre;   // z_l = W_l a_{l-1} + b_l
  std::vector<Eigen::MatrixXd> post;  // a_l = act_l(z_l)
};

// Dense fully connected network. weights[l] has shape
// (layer_sizes[l+1] x layer_sizes[l]); biases[l] has length layer_sizes[l+1].
// Hidden layers share one activation; the output layer has its own.
class Mlp {
 public:
  Mlp() = default;

  // Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
  // Deterministic for a fixed seed.
  Mlp(std::vector<int> layer_sizes, Activation hidden_activation,
      Activation output_activation, std::uint64_t seed);

  // Batched forward; inputs is (input_size x batch). Fills *cache when given.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& inputs,
                          ForwardCache* cache = nullptr) const;

  // Single-sample convenience overload.
  Eigen::VectorXd forward(const Eigen::VectorXd& input,
                          ForwardCache* cache = nullptr) const;

  // Backward pass for the loss whose d(loss)/d(output) is output_grad
  // (same shape as the forward output). The cache must come from a forward
  // call on this network. Optionally also yields d(loss)/d(input).
  ParamGrads backward(const ForwardCache& cache,
                      const Eigen::MatrixXd& output_grad,
                      Eigen::MatrixXd* input_grad = nullptr) const;

  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  int layer_count() const { return static_cast<int>(weights_.size()); }

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  std::vector<Eigen::MatrixXd>& weights() { return weights_; }
  const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
  std::vector<Eigen::VectorXd>& biases() { return biases_; }
  const std::vector<Eigen::VectorXd>& biases() const { return biases_; }

  Activation activation_at(int layer) const {
    return layer + 1 == layer_count() ? output_ : hidden_;
  }

 private:
  std::vector<int> layer_sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  Activation hidden_ = Activation::kRelu;
  Activation output_ = Activation::kLinear;
};

bool same_architecture(const Mlp& a, const Mlp& b);

// Applies an activation elementwise.
Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z);

}  // namespace levershap
