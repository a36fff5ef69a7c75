#pragma once

#include <Eigen/Dense>
#include <span>

namespace levershap {

// Per-dimension running mean/variance (Welford) with clipped z-scoring.
// One dimension may be aliased to another's statistics, which lets the goal
// slot share the lever-angle statistics so relabeled goals normalize
// consistently.
class ObsNormalizer {
 public:
  explicit ObsNormalizer(int dim, double clip_range = 5.0, int alias_slot = -1,
                         int alias_source = -1);

  void update(std::span<const double> sample);

  Eigen::VectorXd normalize(std::span<const double> sample) const;

  int dim() const { return static_cast<int>(mean_.size()); }
  double clip_range() const { return clip_; }
  double count() const { return count_; }
  int alias_slot() const { return alias_slot_; }
  int alias_source() const { return alias_source_; }
  Eigen::VectorXd mean() const;
  Eigen::VectorXd variance() const;
  void set_statistics(const Eigen::VectorXd& mean,
                      const Eigen::VectorXd& variance, double count);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;
  double count_ = 0.0;
  double clip_;
  int alias_slot_;
  int alias_source_;
};

}  // namespace levershap
