#include "levershap/normalizer.hpp"

#include <cmath>

#include "levershap/error.hpp"

namespace levershap {

ObsNormalizer::ObsNormalizer(int dim, double clip_range, int alias_slot,
                             int alias_source)
    : mean_(Eigen::VectorXd::Zero(dim)),
      m2_(Eigen::VectorXd::Zero(dim)),
      clip_(clip_range),
      alias_slot_(alias_slot),
      alias_source_(alias_source) {
  if (dim <= 0) throw InvalidArgumentError("normalizer: dim must be positive");
  if (clip_range <= 0.0)
    throw InvalidArgumentError("normalizer: clip_range must be positive");
}

void ObsNormalizer::update(std::span<const double> sample) {
  if (static_cast<int>(sample.size()) != dim())
    throw ShapeError("normalizer: sample width mismatch");
  count_ += 1.0;
  for (int i = 0; i < dim(); ++i) {
    const double delta = sample[i] - mean_(i);
    mean_(i) += delta / count_;
    m2_(i) += delta * (sample[i] - mean_(i));
  }
}

Eigen::VectorXd ObsNormalizer::variance() const {
  if (count_ < 1.0) return Eigen::VectorXd::Ones(dim());
  return m2_ / count_;
}

Eigen::VectorXd ObsNormalizer::mean() const {
  if (count_ < 1.0) return Eigen::VectorXd::Zero(dim());
  return mean_;
}

Eigen::VectorXd ObsNormalizer::normalize(std::span<const double> sample) const {
  if (static_cast<int>(sample.size()) != dim())
    throw ShapeError("normalizer: sample width mismatch");
  const Eigen::VectorXd mu = mean();
  const Eigen::VectorXd var = variance();
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) {
    const int j = i == alias_slot_ ? alias_source_ : i;
    const double sd = std::sqrt(var(j) + 1e-8);
    out(i) = std::clamp((sample[i] - mu(j)) / sd, -clip_, clip_);
  }
  return out;
}

void ObsNormalizer::set_statistics(const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& variance,
                                   double count) {
  if (mean.size() != mean_.size() || variance.size() != m2_.size())
    throw ShapeError("normalizer: statistics width mismatch");
  mean_ = mean;
  m2_ = variance * std::max(count, 1.0);
  count_ = count;
}

}  // namespace levershap
