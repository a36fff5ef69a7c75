#include "levershap/run_config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& section) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key))
      throw ConfigError("config: unknown key '" +
                        (section.empty() ? key : section + "." + key) + "'");
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void parse_env_section(const json& obj, const std::string& section,
                       EnvConfig& env) {
  static const std::set<std::string> known{
      "dt",           "max_steps",       "link_lengths",
      "joint_limits", "lever_handle_length", "lever_angle_limit",
      "grasp_radius", "slip_radius",     "lever_lag_time_constant",
      "lever_base_range", "success_tol", "min_goal_gap",
      "goal_range",   "action_scale",    "finger_speed",
      "fixed_lever_base"};
  reject_unknown_keys(obj, known, section);
  read_field(obj, "dt", env.dt);
  read_field(obj, "max_steps", env.max_steps);
  read_field(obj, "link_lengths", env.link_lengths);
  read_field(obj, "joint_limits", env.joint_limits);
  read_field(obj, "lever_handle_length", env.lever_handle_length);
  read_field(obj, "lever_angle_limit", env.lever_angle_limit);
  read_field(obj, "grasp_radius", env.grasp_radius);
  read_field(obj, "slip_radius", env.slip_radius);
  read_field(obj, "lever_lag_time_constant", env.lever_lag_time_constant);
  read_field(obj, "lever_base_range", env.lever_base_range);
  read_field(obj, "success_tol", env.success_tol);
  read_field(obj, "min_goal_gap", env.min_goal_gap);
  read_field(obj, "goal_range", env.goal_range);
  read_field(obj, "action_scale", env.action_scale);
  read_field(obj, "finger_speed", env.finger_speed);
  if (obj.contains("fixed_lever_base")) {
    std::array<double, 3> base{};
    read_field(obj, "fixed_lever_base", base);
    env.fixed_lever_base = base;
  }
}

json env_section_to_json(const EnvConfig& env) {
  json obj;
  obj["dt"] = env.dt;
  obj["max_steps"] = env.max_steps;
  obj["link_lengths"] = env.link_lengths;
  obj["joint_limits"] = env.joint_limits;
  obj["lever_handle_length"] = env.lever_handle_length;
  obj["lever_angle_limit"] = env.lever_angle_limit;
  obj["grasp_radius"] = env.grasp_radius;
  obj["slip_radius"] = env.slip_radius;
  obj["lever_lag_time_constant"] = env.lever_lag_time_constant;
  obj["lever_base_range"] = env.lever_base_range;
  obj["success_tol"] = env.success_tol;
  obj["min_goal_gap"] = env.min_goal_gap;
  obj["goal_range"] = env.goal_range;
  obj["action_scale"] = env.action_scale;
  obj["finger_speed"] = env.finger_speed;
  if (env.fixed_lever_base) obj["fixed_lever_base"] = *env.fixed_lever_base;
  return obj;
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

AgentConfig RunConfig::fine_agent_config() const {
  AgentConfig fine = agent;
  fine.lr_actor = lr_actor_fine;
  fine.lr_critic = lr_critic_fine;
  return fine;
}

void RunConfig::validate() const {
  agent.validate();
  env_coarse.validate();
  env_fine.validate();
  if (lr_actor_fine <= 0.0 || lr_critic_fine <= 0.0)
    throw ConfigError("config: fine-stage learning rates must be positive");
  if (schedule.epochs < 0 || schedule.episodes_per_epoch <= 0 ||
      schedule.finetune_episodes < 0)
    throw ConfigError("config: schedule values must be positive");
  if (eval.n_test_episodes <= 0)
    throw ConfigError("config: eval.n_test_episodes must be positive");
  if (paths.checkpoint_dir.empty() || paths.log_dir.empty())
    throw ConfigError("config: paths must be non-empty");
}

RunConfig run_config_from_json(const std::string& text) {
  RunConfig config;

  // an empty or whitespace-only file means "all defaults"
  const bool blank =
      text.find_first_not_of(" \t\r\n") == std::string::npos;
  if (!blank) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("config: parse error at line " +
                        std::to_string(line_of_offset(text, e.byte)) + ": " +
                        e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");

    static const std::set<std::string> known{"seed",     "env",  "agent",
                                             "schedule", "eval", "paths"};
    reject_unknown_keys(doc, known, "");

    read_field(doc, "seed", config.seed);

    if (doc.contains("env")) {
      const json& env = doc.at("env");
      reject_unknown_keys(env, {"coarse", "fine"}, "env");
      if (env.contains("coarse"))
        parse_env_section(env.at("coarse"), "env.coarse", config.env_coarse);
      if (env.contains("fine"))
        parse_env_section(env.at("fine"), "env.fine", config.env_fine);
    }

    if (doc.contains("agent")) {
      const json& agent = doc.at("agent");
      static const std::set<std::string> agent_keys{
          "lr_actor",      "lr_critic",      "lr_actor_fine",
          "lr_critic_fine", "gamma",         "action_l2",
          "noise_eps",     "random_eps",     "her_k",
          "batch_size",    "polyak_retain",  "updates_per_cycle",
          "action_scale",  "obs_clip",       "buffer_capacity"};
      reject_unknown_keys(agent, agent_keys, "agent");
      read_field(agent, "lr_actor", config.agent.lr_actor);
      read_field(agent, "lr_critic", config.agent.lr_critic);
      read_field(agent, "lr_actor_fine", config.lr_actor_fine);
      read_field(agent, "lr_critic_fine", config.lr_critic_fine);
      read_field(agent, "gamma", config.agent.discount);
      read_field(agent, "action_l2", config.agent.action_l2);
      read_field(agent, "noise_eps", config.agent.noise_eps);
      read_field(agent, "random_eps", config.agent.random_eps);
      read_field(agent, "her_k", config.agent.her_k);
      read_field(agent, "batch_size", config.agent.batch_size);
      read_field(agent, "polyak_retain", config.agent.polyak_retain);
      read_field(agent, "updates_per_cycle", config.agent.updates_per_cycle);
      read_field(agent, "action_scale", config.agent.action_scale);
      read_field(agent, "obs_clip", config.agent.obs_clip);
      read_field(agent, "buffer_capacity", config.agent.buffer_capacity);
    }

    if (doc.contains("schedule")) {
      const json& schedule = doc.at("schedule");
      reject_unknown_keys(
          schedule, {"epochs", "episodes_per_epoch", "finetune_episodes"},
          "schedule");
      read_field(schedule, "epochs", config.schedule.epochs);
      read_field(schedule, "episodes_per_epoch",
                 config.schedule.episodes_per_epoch);
      read_field(schedule, "finetune_episodes",
                 config.schedule.finetune_episodes);
    }

    if (doc.contains("eval")) {
      reject_unknown_keys(doc.at("eval"), {"n_test_episodes"}, "eval");
      read_field(doc.at("eval"), "n_test_episodes", config.eval.n_test_episodes);
    }

    if (doc.contains("paths")) {
      reject_unknown_keys(doc.at("paths"), {"checkpoint_dir", "log_dir"},
                          "paths");
      read_field(doc.at("paths"), "checkpoint_dir", config.paths.checkpoint_dir);
      read_field(doc.at("paths"), "log_dir", config.paths.log_dir);
    }
  }

  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return run_config_from_json(text);
}

std::string run_config_to_json(const RunConfig& config) {
  json doc;
  doc["seed"] = config.seed;
  doc["env"]["coarse"] = env_section_to_json(config.env_coarse);
  doc["env"]["fine"] = env_section_to_json(config.env_fine);
  json agent;
  agent["lr_actor"] = config.agent.lr_actor;
  agent["lr_critic"] = config.agent.lr_critic;
  agent["lr_actor_fine"] = config.lr_actor_fine;
  agent["lr_critic_fine"] = config.lr_critic_fine;
  agent["gamma"] = config.agent.discount;
  agent["action_l2"] = config.agent.action_l2;
  agent["noise_eps"] = config.agent.noise_eps;
  agent["random_eps"] = config.agent.random_eps;
  agent["her_k"] = config.agent.her_k;
  agent["batch_size"] = config.agent.batch_size;
  agent["polyak_retain"] = config.agent.polyak_retain;
  agent["updates_per_cycle"] = config.agent.updates_per_cycle;
  agent["action_scale"] = config.agent.action_scale;
  agent["obs_clip"] = config.agent.obs_clip;
  agent["buffer_capacity"] = config.agent.buffer_capacity;
  doc["agent"] = std::move(agent);
  doc["schedule"]["epochs"] = config.schedule.epochs;
  doc["schedule"]["episodes_per_epoch"] = config.schedule.episodes_per_epoch;
  doc["schedule"]["finetune_episodes"] = config.schedule.finetune_episodes;
  doc["eval"]["n_test_episodes"] = config.eval.n_test_episodes;
  doc["paths"]["checkpoint_dir"] = config.paths.checkpoint_dir;
  doc["paths"]["log_dir"] = config.paths.log_dir;
  return doc.dump(2);
}

}  // namespace levershap
