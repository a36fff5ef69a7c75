#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "levershap/rng.hpp"
#include "levershap/transition.hpp"

namespace levershap {

enum class Fidelity { kCoarse, kFine };
enum class Curriculum { kFree, kGrasping, kAlternate };

inline constexpr double kFingerMax = 0.019;            // m, each finger
inline constexpr double kFingerClosedThreshold = 0.005;  // m
// Retracted start pose for joints 2-4; end effector sits near the arm base.
inline constexpr std::array<double, 3> kHomeJointAngles{1.7, -1.7, -1.7};

// Fidelity differences (lag, slip, handle length) are plain config values.
// The coarse preset disables lag (time constant 0) and slip (radius 0).
struct EnvConfig {
  Fidelity fidelity = Fidelity::kCoarse;
  double dt = 0.05;  // s
  int max_steps = 100;
  std::array<double, 3> link_lengths{0.128, 0.124, 0.126};  // m
  std::array<std::array<double, 2>, 3> joint_limits{
      {{-1.9, 1.9}, {-1.9, 1.9}, {-1.9, 1.9}}};  // rad, joints 2-4
  double lever_handle_length = 0.10;             // m
  double lever_angle_limit = 1.2;                // rad
  double grasp_radius = 0.03;                    // m
  double slip_radius = 0.0;      // m; 0 disables slip
  double lever_lag_time_constant = 0.0;  // s; 0 means instantaneous coupling
  std::array<double, 2> lever_base_range{0.15, 0.28};  // m, planar distance
  double success_tol = 0.025;  // rad
  double min_goal_gap = 0.4;   // rad
  std::array<double, 2> goal_range{-1.0, 1.0};  // rad
  double action_scale = 0.1;
  double finger_speed = 0.2;  // m/s
  // Pins the lever base instead of sampling it (fixed-rig evaluation).
  std::optional<std::array<double, 3>> fixed_lever_base;

  static EnvConfig coarse();
  static EnvConfig fine();
  void validate() const;
};

struct LeverWorld {
  std::array<double, 3> joint_angles{};      // joints 2-4, rad
  std::array<double, 3> joint_velocities{};  // rad/s
  std::array<double, 2> gripper_fingers{};   // m, mirrored pair
  std::array<double, 2> gripper_finger_velocities{};
  double base_yaw = 0.0;                // joint 1, fixed per episode
  std::array<double, 3> lever_base{};   // m, relative to the arm base
  double lever_angle = 0.0;             // rad
  double goal_angle = 0.0;              // rad
  bool grasped = false;
  double grasp_offset = 0.0;  // latched at grasp so the lever never jumps
  int step_count = 0;
};

// Fixed observation layout; slot 19 is the only goal-dependent entry.
extern const std::array<std::string, kStateDim> kObservationFeatureNames;

// Point in the arm's vertical working plane: r along the yaw direction,
// z vertical.
struct PlanarPoint {
  double r = 0.0;
  double z = 0.0;
};

// Sparse reward: 0 inside the tolerance, -1 otherwise (boundary fails).
double lever_reward(double achieved, double desired, double tol = 0.025);

// Yaw of the fixed base joint pointing the working plane at the lever.
double base_yaw_for(double lever_x, double lever_y);

// Serial-chain planar FK over joints 2-4 with the configured link lengths.
// All angles zero means fully extended along +r.
PlanarPoint forward_kinematics(const std::array<double, 3>& joint_angles,
                               const EnvConfig& cfg);

// Lifts an in-plane point to 3-D through the base yaw.
std::array<double, 3> lift_to_3d(const PlanarPoint& p, double yaw);

// Handle tip for a lever whose pivot sits at planar distance `base_distance`;
// at angle 0 the handle points straight up.
PlanarPoint handle_tip(double lever_angle, double base_distance,
                       const EnvConfig& cfg);

// Uniform start/goal angles, rejection-sampled until the gap exceeds
// min_goal_gap.
std::pair<double, double> sample_goal_pair(const EnvConfig& cfg, Rng& rng);

// Grasp/release and lever coupling. While grasped the commanded angle is the
// planar angle of the end effector about the pivot plus the latched offset,
// clamped to the angle limit; with a positive lag constant the lever follows
// first-order, otherwise instantly. Ungrasped levers hold their angle.
void lever_dynamics(LeverWorld& world, const PlanarPoint& ee,
                    bool gripper_closed, const EnvConfig& cfg);

// Joint angles placing the end effector on `target`, if one exists within
// the joint limits. Several approach directions are tried.
std::optional<std::array<double, 3>> solve_grasp_ik(const EnvConfig& cfg,
                                                    const PlanarPoint& target);

struct StepResult {
  Observation observation;
  double reward;
  bool done;
  double achieved_goal;
  bool is_success;
};

class LeverEnv {
 public:
  explicit LeverEnv(EnvConfig cfg);

  Observation reset(Rng& rng, Curriculum curriculum);
  // Pinned start/goal and lever base; free start. The goal-gap constraint is
  // deliberately not enforced here.
  Observation reset_scenario(double theta_start, double theta_goal,
                             const std::array<double, 3>& lever_base);
  // Rebuilds the world from the first observation of a logged episode
  // (velocities zero, grasp state re-derived), for bit-exact replay.
  Observation restore(const Observation& initial);

  StepResult step(const std::array<double, kActionDim>& action);

  Observation observe() const;
  const LeverWorld& world() const { return world_; }
  const EnvConfig& config() const { return cfg_; }
  int reset_count() const { return reset_count_; }
  int ik_fallback_count() const { return ik_fallbacks_; }

 private:
  void start_free();
  void start_grasping();
  double planar_base_distance() const;

  EnvConfig cfg_;
  LeverWorld world_;
  int reset_count_ = 0;
  int ik_fallbacks_ = 0;
};

}  // namespace levershap
