#include "levershap/lever_env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "levershap/error.hpp"

namespace levershap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

// Angle of a point about the pivot, measured from vertical. Zero when the
// handle points straight up, positive toward larger r.
double pivot_angle(const PlanarPoint& ee, double base_distance) {
  return std::atan2(ee.r - base_distance, ee.z);
}

}  // namespace

const std::array<std::string, kStateDim> kObservationFeatureNames = {
    "joint1_angle",  "joint2_angle", "joint3_angle", "joint4_angle",
    "joint1_vel",    "joint2_vel",   "joint3_vel",   "joint4_vel",
    "finger1_pos",   "finger2_pos",  "finger1_vel",  "finger2_vel",
    "lever_base_x",  "lever_base_y", "lever_base_z", "ee_rel_x",
    "ee_rel_y",      "ee_rel_z",     "lever_angle",  "goal_angle"};

EnvConfig EnvConfig::coarse() { return EnvConfig{}; }

EnvConfig EnvConfig::fine() {
  EnvConfig cfg;
  cfg.fidelity = Fidelity::kFine;
  cfg.lever_handle_length = 0.12;
  cfg.slip_radius = 0.05;
  cfg.lever_lag_time_constant = 0.1;
  return cfg;
}

void EnvConfig::validate() const {
  if (dt <= 0.0) throw ConfigError("env: dt must be positive");
  if (max_steps <= 0) throw ConfigError("env: max_steps must be positive");
  for (const double l : link_lengths)
    if (l <= 0.0) throw ConfigError("env: link lengths must be positive");
  for (const auto& lim : joint_limits)
    if (lim[0] >= lim[1]) throw ConfigError("env: joint limit lo must be < hi");
  if (success_tol <= 0.0) throw ConfigError("env: success_tol must be positive");
  if (goal_range[0] >= goal_range[1])
    throw ConfigError("env: goal_range lo must be < hi");
  if (min_goal_gap >= goal_range[1] - goal_range[0])
    throw ConfigError("env: min_goal_gap must be smaller than the goal range");
  if (lever_base_range[0] > lever_base_range[1])
    throw ConfigError("env: lever_base_range must be ordered");
  const double reach = link_lengths[0] + link_lengths[1] + link_lengths[2];
  if (lever_base_range[1] > reach)
    throw ConfigError("env: lever_base_range exceeds arm reach");
  if (lever_handle_length <= 0.0)
    throw ConfigError("env: lever_handle_length must be positive");
  if (grasp_radius <= 0.0) throw ConfigError("env: grasp_radius must be positive");
  if (action_scale <= 0.0) throw ConfigError("env: action_scale must be positive");
  if (finger_speed <= 0.0) throw ConfigError("env: finger_speed must be positive");
}

double lever_reward(double achieved, double desired, double tol) {
  return std::abs(achieved - desired) >= tol ? -1.0 : 0.0;
}

double base_yaw_for(double lever_x, double lever_y) {
  if (lever_x == 0.0 && lever_y == 0.0)
    throw DegeneratePoseError("lever base coincides with the arm base");
  return std::atan2(lever_y, lever_x);
}

PlanarPoint forward_kinematics(const std::array<double, 3>& joint_angles,
                               const EnvConfig& cfg) {
  PlanarPoint p;
  double phi = 0.0;
  for (int i = 0; i < 3; ++i) {
    phi += joint_angles[i];
    p.r += cfg.link_lengths[i] * std::cos(phi);
    p.z += cfg.link_lengths[i] * std::sin(phi);
  }
  return p;
}

std::array<double, 3> lift_to_3d(const PlanarPoint& p, double yaw) {
  return {p.r * std::cos(yaw), p.r * std::sin(yaw), p.z};
}

PlanarPoint handle_tip(double lever_angle, double base_distance,
                       const EnvConfig& cfg) {
  return {base_distance + cfg.lever_handle_length * std::sin(lever_angle),
          cfg.lever_handle_length * std::cos(lever_angle)};
}

std::pair<double, double> sample_goal_pair(const EnvConfig& cfg, Rng& rng) {
  for (;;) {
    const double start = rng.uniform(cfg.goal_range[0], cfg.goal_range[1]);
    const double goal = rng.uniform(cfg.goal_range[0], cfg.goal_range[1]);
    if (std::abs(start - goal) > cfg.min_goal_gap) return {start, goal};
  }
}

void lever_dynamics(LeverWorld& world, const PlanarPoint& ee,
                    bool gripper_closed, const EnvConfig& cfg) {
  const double d = std::hypot(world.lever_base[0], world.lever_base[1]);
  const PlanarPoint tip = handle_tip(world.lever_angle, d, cfg);
  const double dist = std::hypot(ee.r - tip.r, ee.z - tip.z);

  if (world.grasped) {
    const bool slipped = cfg.slip_radius > 0.0 && dist > cfg.slip_radius;
    if (!gripper_closed || slipped) {
      world.grasped = false;  // static friction holds the angle
      return;
    }
    const double commanded =
        clamp(pivot_angle(ee, d) + world.grasp_offset, -cfg.lever_angle_limit,
              cfg.lever_angle_limit);
    if (cfg.lever_lag_time_constant > 0.0) {
      const double alpha = 1.0 - std::exp(-cfg.dt / cfg.lever_lag_time_constant);
      world.lever_angle += (commanded - world.lever_angle) * alpha;
    } else {
      world.lever_angle = commanded;
    }
    return;
  }

  if (gripper_closed && dist < cfg.grasp_radius) {
    world.grasped = true;
    // Latch the angular offset so the lever is continuous at the grasp
    // instant; coupling begins on the next step.
    world.grasp_offset = world.lever_angle - pivot_angle(ee, d);
  }
}

std::optional<std::array<double, 3>> solve_grasp_ik(const EnvConfig& cfg,
                                                    const PlanarPoint& target) {
  const double l1 = cfg.link_lengths[0];
  const double l2 = cfg.link_lengths[1];
  const double l3 = cfg.link_lengths[2];
  const double ray = std::atan2(target.z, target.r);
  // sweep final-link orientations outward from the ray-aligned approach
  std::vector<double> approaches;
  approaches.push_back(ray);
  for (int k = 1; k <= 32; ++k) {
    approaches.push_back(ray + k * kPi / 32.0);
    approaches.push_back(ray - k * kPi / 32.0);
  }

  for (const double phi3 : approaches) {
    const PlanarPoint wrist{target.r - l3 * std::cos(phi3),
                            target.z - l3 * std::sin(phi3)};
    const double dist = std::hypot(wrist.r, wrist.z);
    if (dist > l1 + l2 || dist < std::abs(l1 - l2)) continue;
    const double c3 = clamp(
        (dist * dist - l1 * l1 - l2 * l2) / (2.0 * l1 * l2), -1.0, 1.0);
    for (const double elbow : {1.0, -1.0}) {
      const double theta3 = elbow * std::acos(c3);
      const double theta2 =
          std::atan2(wrist.z, wrist.r) -
          std::atan2(l2 * std::sin(theta3), l1 + l2 * std::cos(theta3));
      double theta4 = phi3 - theta2 - theta3;
      // wrap into (-pi, pi]
      theta4 = std::remainder(theta4, 2.0 * kPi);
      const std::array<double, 3> sol{theta2, theta3, theta4};
      bool ok = true;
      for (int i = 0; i < 3; ++i)
        ok = ok && sol[i] >= cfg.joint_limits[i][0] &&
             sol[i] <= cfg.joint_limits[i][1];
      if (!ok) continue;
      return sol;
    }
  }
  return std::nullopt;
}

LeverEnv::LeverEnv(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

double LeverEnv::planar_base_distance() const {
  return std::hypot(world_.lever_base[0], world_.lever_base[1]);
}

void LeverEnv::start_free() {
  world_.joint_angles = kHomeJointAngles;
  world_.gripper_fingers = {kFingerMax, kFingerMax};
  world_.grasped = false;
  world_.grasp_offset = 0.0;
}

void LeverEnv::start_grasping() {
  const double d = planar_base_distance();
  const PlanarPoint tip = handle_tip(world_.lever_angle, d, cfg_);
  const auto sol = solve_grasp_ik(cfg_, tip);
  if (!sol) {
    ++ik_fallbacks_;
    std::fprintf(stderr,
                 "levershap: grasp-start IK failed (tip r=%.3f z=%.3f), "
                 "falling back to free start\n",
                 tip.r, tip.z);
    start_free();
    return;
  }
  world_.joint_angles = *sol;
  world_.gripper_fingers = {0.002, 0.002};
  world_.grasped = true;
  const PlanarPoint ee = forward_kinematics(world_.joint_angles, cfg_);
  world_.grasp_offset = world_.lever_angle - std::atan2(ee.r - d, ee.z);
}

Observation LeverEnv::reset(Rng& rng, Curriculum curriculum) {
  ++reset_count_;
  world_ = LeverWorld{};

  if (cfg_.fixed_lever_base) {
    world_.lever_base = *cfg_.fixed_lever_base;
  } else {
    const double d =
        rng.uniform(cfg_.lever_base_range[0], cfg_.lever_base_range[1]);
    const double yaw = rng.uniform(-kPi, kPi);
    world_.lever_base = {d * std::cos(yaw), d * std::sin(yaw), 0.0};
  }
  world_.base_yaw = base_yaw_for(world_.lever_base[0], world_.lever_base[1]);

  const auto [start, goal] = sample_goal_pair(cfg_, rng);
  world_.lever_angle = start;
  world_.goal_angle = goal;

  const bool grasp_start =
      curriculum == Curriculum::kGrasping ||
      (curriculum == Curriculum::kAlternate && reset_count_ % 2 == 0);
  if (grasp_start)
    start_grasping();
  else
    start_free();
  return observe();
}

Observation LeverEnv::reset_scenario(double theta_start, double theta_goal,
                                     const std::array<double, 3>& lever_base) {
  ++reset_count_;
  world_ = LeverWorld{};
  world_.lever_base = lever_base;
  world_.base_yaw = base_yaw_for(lever_base[0], lever_base[1]);
  world_.lever_angle = theta_start;
  world_.goal_angle = theta_goal;
  start_free();
  return observe();
}

Observation LeverEnv::restore(const Observation& initial) {
  ++reset_count_;
  world_ = LeverWorld{};
  world_.base_yaw = initial[0];
  world_.joint_angles = {initial[1], initial[2], initial[3]};
  world_.gripper_fingers = {initial[8], initial[9]};
  world_.lever_base = {initial[12], initial[13], initial[14]};
  world_.lever_angle = initial[18];
  world_.goal_angle = initial[19];

  // Re-derive the grasp state with the same rule step() applies.
  const double d = planar_base_distance();
  const PlanarPoint ee = forward_kinematics(world_.joint_angles, cfg_);
  const PlanarPoint tip = handle_tip(world_.lever_angle, d, cfg_);
  const bool closed = world_.gripper_fingers[0] <= kFingerClosedThreshold;
  if (closed && std::hypot(ee.r - tip.r, ee.z - tip.z) < cfg_.grasp_radius) {
    world_.grasped = true;
    world_.grasp_offset = world_.lever_angle - std::atan2(ee.r - d, ee.z);
  }
  return observe();
}

StepResult LeverEnv::step(const std::array<double, kActionDim>& action) {
  world_.step_count += 1;

  std::array<double, kActionDim> a = action;
  for (double& v : a) {
    if (std::isnan(v)) v = 0.0;
    v = clamp(v, -1.0, 1.0);
  }

  for (int j = 0; j < 3; ++j) {
    const double target =
        clamp(world_.joint_angles[j] + cfg_.action_scale * a[j],
              cfg_.joint_limits[j][0], cfg_.joint_limits[j][1]);
    world_.joint_velocities[j] = (target - world_.joint_angles[j]) / cfg_.dt;
    world_.joint_angles[j] = target;
  }

  // a4 >= 0 opens the gripper, a4 < 0 closes it, at a fixed finger speed
  const double finger_target = a[3] >= 0.0 ? kFingerMax : 0.0;
  for (int f = 0; f < 2; ++f) {
    const double cur = world_.gripper_fingers[f];
    const double move = clamp(finger_target - cur, -cfg_.finger_speed * cfg_.dt,
                              cfg_.finger_speed * cfg_.dt);
    world_.gripper_finger_velocities[f] = move / cfg_.dt;
    world_.gripper_fingers[f] = cur + move;
  }

  const PlanarPoint ee = forward_kinematics(world_.joint_angles, cfg_);
  const bool closed = world_.gripper_fingers[0] <= kFingerClosedThreshold;
  lever_dynamics(world_, ee, closed, cfg_);

  StepResult result;
  result.observation = observe();
  result.achieved_goal = world_.lever_angle;
  result.reward =
      lever_reward(world_.lever_angle, world_.goal_angle, cfg_.success_tol);
  result.is_success =
      std::abs(world_.lever_angle - world_.goal_angle) < cfg_.success_tol;
  result.done = world_.step_count >= cfg_.max_steps;
  return result;
}

Observation LeverEnv::observe() const {
  Observation obs{};
  obs[0] = world_.base_yaw;
  obs[1] = world_.joint_angles[0];
  obs[2] = world_.joint_angles[1];
  obs[3] = world_.joint_angles[2];
  obs[4] = 0.0;  // joint 1 never moves
  obs[5] = world_.joint_velocities[0];
  obs[6] = world_.joint_velocities[1];
  obs[7] = world_.joint_velocities[2];
  obs[8] = world_.gripper_fingers[0];
  obs[9] = world_.gripper_fingers[1];
  obs[10] = world_.gripper_finger_velocities[0];
  obs[11] = world_.gripper_finger_velocities[1];
  obs[12] = world_.lever_base[0];
  obs[13] = world_.lever_base[1];
  obs[14] = world_.lever_base[2];
  const auto ee =
      lift_to_3d(forward_kinematics(world_.joint_angles, cfg_), world_.base_yaw);
  obs[15] = ee[0] - world_.lever_base[0];
  obs[16] = ee[1] - world_.lever_base[1];
  obs[17] = ee[2] - world_.lever_base[2];
  obs[18] = world_.lever_angle;
  obs[19] = world_.goal_angle;
  return obs;
}

}  // namespace levershap
