#include "levershap/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "levershap/agent_io.hpp"
#include "levershap/episode_log.hpp"
#include "levershap/error.hpp"
#include "levershap/explain.hpp"
#include "levershap/force_plot.hpp"
#include "levershap/training.hpp"

namespace levershap {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

std::string fidelity_name(Fidelity f) {
  return f == Fidelity::kCoarse ? "coarse" : "fine";
}

// Places the lever base on the +x axis so the initial end-effector distance
// matches the scenario, clamped into the configured sampling range.
std::array<double, 3> scenario_lever_base(const EnvConfig& env,
                                          double ee_distance) {
  const PlanarPoint home = forward_kinematics(kHomeJointAngles, env);
  const double dz2 = ee_distance * ee_distance - home.z * home.z;
  const double delta = dz2 > 0.0 ? std::sqrt(dz2) : 0.0;
  const double lo = env.lever_base_range[0];
  const double hi = env.lever_base_range[1];
  for (const double candidate : {home.r + delta, home.r - delta}) {
    if (candidate >= lo && candidate <= hi) return {candidate, 0.0, 0.0};
  }
  const double clamped = std::clamp(home.r + delta, lo, hi);
  return {clamped, 0.0, 0.0};
}

}  // namespace

std::vector<EvalScenario> load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenarios: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("scenarios: " + path.string() + ": " + e.what());
  }
  if (!doc.contains("scenarios") || !doc["scenarios"].is_array())
    throw ConfigError("scenarios: expected top-level 'scenarios' array");
  std::vector<EvalScenario> out;
  for (const json& item : doc["scenarios"]) {
    EvalScenario s;
    try {
      s.gap = item.at("gap").get<double>();
      s.ee_distance = item.at("ee_distance").get<double>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("scenarios: bad entry: ") + e.what());
    }
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError("scenarios: file lists no scenarios");
  return out;
}

TrainOutputs cmd_train(const RunConfig& config) {
  config.validate();
  DdpgAgent agent(config.agent, config.seed);
  LeverEnv env(config.env_coarse);
  TrainStreams streams = TrainStreams::from_seed(config.seed, "coarse");

  const TrainingReport report =
      train(agent, env, config.schedule.epochs,
            config.schedule.episodes_per_epoch, config.agent, streams);

  TrainOutputs out;
  out.checkpoint_dir = std::filesystem::path(config.paths.checkpoint_dir) / "coarse";
  out.report_csv = std::filesystem::path(config.paths.log_dir) / "train_report.csv";
  ensure_dir(out.checkpoint_dir);
  ensure_dir(out.report_csv.parent_path());
  save_agent(agent, config, "coarse", out.checkpoint_dir);
  write_report_csv(report, out.report_csv);
  return out;
}

TrainOutputs cmd_finetune(const RunConfig& config,
                          const std::filesystem::path& checkpoint_dir) {
  config.validate();
  LoadedAgent loaded = load_agent(checkpoint_dir);
  LeverEnv env(config.env_fine);
  TrainStreams streams = TrainStreams::from_seed(config.seed, "fine");

  const TrainingReport report =
      finetune(loaded.agent, env, config.schedule.finetune_episodes,
               config.fine_agent_config(), streams);

  TrainOutputs out;
  out.checkpoint_dir = std::filesystem::path(config.paths.checkpoint_dir) / "fine";
  out.report_csv =
      std::filesystem::path(config.paths.log_dir) / "finetune_report.csv";
  ensure_dir(out.checkpoint_dir);
  ensure_dir(out.report_csv.parent_path());
  save_agent(loaded.agent, config, "fine", out.checkpoint_dir);
  write_report_csv(report, out.report_csv);
  std::fprintf(stderr, "finetune: stage=fine env=%s episodes=%d\n",
               fidelity_name(Fidelity::kFine).c_str(),
               config.schedule.finetune_episodes);
  return out;
}

EvalOutputs cmd_eval(const std::filesystem::path& checkpoint_dir,
                     Fidelity env_choice, std::optional<int> episodes,
                     const std::optional<std::filesystem::path>& scenario_file,
                     const std::optional<std::filesystem::path>& out_dir,
                     std::optional<std::uint64_t> seed) {
  LoadedAgent loaded = load_agent(checkpoint_dir);
  const RunConfig& config = loaded.config;
  const EnvConfig& env_config = env_choice == Fidelity::kCoarse
                                    ? config.env_coarse
                                    : config.env_fine;
  LeverEnv env(env_config);

  std::vector<EvalScenario> scenarios;
  if (scenario_file) scenarios = load_scenarios(*scenario_file);

  const int n_episodes = episodes.value_or(
      scenarios.empty() ? config.eval.n_test_episodes
                        : static_cast<int>(scenarios.size()));
  if (n_episodes <= 0)
    throw ConfigError("eval: episode count must be positive");

  const std::filesystem::path out =
      out_dir.value_or(std::filesystem::path(config.paths.log_dir) /
                       ("eval_" + fidelity_name(env_choice)));
  ensure_dir(out);

  Rng env_rng = named_stream(seed.value_or(config.seed), "eval.env");
  Rng greedy_rng(0);

  EvalOutputs result;
  result.error_csv = out / "error_trajectories.csv";
  std::ofstream csv(result.error_csv);
  if (!csv) throw IoError("cannot open " + result.error_csv.string());
  csv << "episode,step,error_rad\n";

  int successes = 0;
  for (int ep = 0; ep < n_episodes; ++ep) {
    Observation obs;
    if (!scenarios.empty()) {
      const EvalScenario& s = scenarios[ep % scenarios.size()];
      const double sign = ep % 2 == 0 ? 1.0 : -1.0;
      const double half = s.gap / 2.0;
      const double start =
          std::clamp(sign * half, env_config.goal_range[0], env_config.goal_range[1]);
      const double goal =
          std::clamp(-sign * half, env_config.goal_range[0], env_config.goal_range[1]);
      obs = env.reset_scenario(start, goal,
                               scenario_lever_base(env_config, s.ee_distance));
    } else {
      obs = env.reset(env_rng, Curriculum::kFree);
    }

    EpisodeLog log;
    csv << ep << ",0," << format_double(std::abs(obs[kLeverAngleSlot] - obs[kGoalSlot]))
        << '\n';
    bool success = false;
    for (int t = 0;; ++t) {
      const auto action = loaded.agent.select_action(obs, false, greedy_rng);
      const StepResult sr = env.step(action);
      EpisodeStep step;
      step.t = t;
      step.observation = obs;
      step.action = action;
      step.reward = sr.reward;
      step.achieved_goal = sr.achieved_goal;
      step.desired_goal = obs[kGoalSlot];
      step.is_success = sr.is_success;
      log.push_back(step);
      csv << ep << ',' << t + 1 << ','
          << format_double(std::abs(sr.achieved_goal - obs[kGoalSlot])) << '\n';
      obs = sr.observation;
      if (sr.done) {
        success = sr.is_success;
        break;
      }
    }
    successes += success ? 1 : 0;

    const auto log_path = out / ("episode_" + std::to_string(ep) + ".jsonl");
    write_episode_log(log, log_path);
    result.episode_logs.push_back(log_path);
  }
  if (!csv) throw IoError("write failed for " + result.error_csv.string());
  result.success_rate = static_cast<double>(successes) / n_episodes;
  return result;
}

ExplainOutputs cmd_explain(const std::filesystem::path& checkpoint_dir,
                           const std::vector<std::filesystem::path>& logs,
                           int explained_index, ShapEstimator estimator,
                           const std::optional<std::filesystem::path>& out_dir,
                           std::optional<int> background_max,
                           int n_permutations) {
  if (logs.size() != 5)
    throw ConfigError("explain: exactly 5 episode logs are required, got " +
                      std::to_string(logs.size()));
  if (explained_index < 0 || explained_index >= 5)
    throw ConfigError("explain: explained index must be in [0, 4]");

  LoadedAgent loaded = load_agent(checkpoint_dir);

  std::vector<EpisodeLog> background_logs;
  EpisodeLog explained;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    EpisodeLog log = read_episode_log(logs[i]);
    if (static_cast<int>(i) == explained_index)
      explained = std::move(log);
    else
      background_logs.push_back(std::move(log));
  }

  const BackgroundDataset background = build_background(
      background_logs, loaded.agent.normalizer(),
      background_max ? std::optional<int>(*background_max) : std::nullopt);

  Rng shap_rng = named_stream(loaded.config.seed, "explain");
  const EpisodeAttributions attributions = explain_episode(
      loaded.agent.actor(), loaded.agent.normalizer(), explained, background,
      estimator, n_permutations, &shap_rng);

  std::vector<Eigen::VectorXd> raw_inputs;
  raw_inputs.reserve(explained.size());
  for (const EpisodeStep& step : explained)
    raw_inputs.push_back(Eigen::Map<const Eigen::VectorXd>(
        step.observation.data(), kStateDim));

  const std::filesystem::path out = out_dir.value_or(
      std::filesystem::path(loaded.config.paths.log_dir) / "explain");
  ensure_dir(out);
  std::vector<std::string> names(kObservationFeatureNames.begin(),
                                 kObservationFeatureNames.end());
  export_force_plot(attributions, raw_inputs, names, out, "attributions");

  ExplainOutputs result;
  result.attribution_json = out / "attributions.json";
  for (int o = 0; o < kActionDim; ++o)
    result.svg_files.push_back(out / ("attributions_a" + std::to_string(o + 1) +
                                      ".svg"));
  return result;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Goal-conditioned lever manipulation: DDPG+HER training, "
               "two-stage transfer, and Shapley-value explanations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string checkpoint;
  std::string env_name = "coarse";
  std::string scenario_path;
  std::string out_path;
  std::string estimator_name = "deep_rescale";
  std::vector<std::string> log_paths;
  int episodes = -1;
  int explained_index = 0;
  int background_max = -1;
  int n_permutations = 200;
  std::int64_t seed_override = -1;

  CLI::App* train_cmd = app.add_subcommand("train", "Stage-1 training (coarse env)");
  train_cmd->add_option("--config", config_path, "Run config JSON")->required();

  CLI::App* finetune_cmd =
      app.add_subcommand("finetune", "Fine-stage transfer training");
  finetune_cmd->add_option("--config", config_path, "Run config JSON")->required();
  finetune_cmd->add_option("--checkpoint", checkpoint, "Checkpoint directory")
      ->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "Greedy evaluation episodes");
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint directory")
      ->required();
  eval_cmd->add_option("--env", env_name, "coarse or fine")
      ->check(CLI::IsMember({"coarse", "fine"}));
  eval_cmd->add_option("--scenarios", scenario_path, "Scenario JSON file");
  eval_cmd->add_option("--episodes", episodes, "Number of episodes");
  eval_cmd->add_option("--out", out_path, "Output directory");
  eval_cmd->add_option("--seed", seed_override, "Override the eval seed");

  CLI::App* explain_cmd =
      app.add_subcommand("explain", "Shapley attributions for one episode");
  explain_cmd->add_option("--checkpoint", checkpoint, "Checkpoint directory")
      ->required();
  explain_cmd
      ->add_option("--logs", log_paths, "Five episode JSON-lines logs")
      ->expected(5)
      ->required();
  explain_cmd->add_option("--explained", explained_index,
                          "Index of the explained log (0-4)");
  explain_cmd->add_option("--estimator", estimator_name,
                          "deep_rescale or permutation")
      ->check(CLI::IsMember({"deep_rescale", "permutation", "exact"}));
  explain_cmd->add_option("--background-max", background_max,
                          "Cap on background rows (even subsample)");
  explain_cmd->add_option("--permutations", n_permutations,
                          "Permutation count for the sampled estimator");
  explain_cmd->add_option("--out", out_path, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (train_cmd->parsed()) {
      const RunConfig config = load_run_config(config_path);
      const TrainOutputs out = cmd_train(config);
      std::printf("checkpoint: %s\nreport: %s\n",
                  out.checkpoint_dir.string().c_str(),
                  out.report_csv.string().c_str());
    } else if (finetune_cmd->parsed()) {
      const RunConfig config = load_run_config(config_path);
      const TrainOutputs out = cmd_finetune(config, checkpoint);
      std::printf("checkpoint: %s\nreport: %s\n",
                  out.checkpoint_dir.string().c_str(),
                  out.report_csv.string().c_str());
    } else if (eval_cmd->parsed()) {
      const EvalOutputs out = cmd_eval(
          checkpoint,
          env_name == "fine" ? Fidelity::kFine : Fidelity::kCoarse,
          episodes > 0 ? std::optional<int>(episodes) : std::nullopt,
          scenario_path.empty()
              ? std::nullopt
              : std::optional<std::filesystem::path>(scenario_path),
          out_path.empty() ? std::nullopt
                           : std::optional<std::filesystem::path>(out_path),
          seed_override >= 0
              ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(seed_override))
              : std::nullopt);
      std::printf("error csv: %s\nsuccess rate: %.2f\n",
                  out.error_csv.string().c_str(), out.success_rate);
    } else if (explain_cmd->parsed()) {
      ShapEstimator estimator = ShapEstimator::kDeepRescale;
      if (estimator_name == "permutation")
        estimator = ShapEstimator::kPermutation;
      else if (estimator_name == "exact")
        estimator = ShapEstimator::kExact;
      std::vector<std::filesystem::path> logs(log_paths.begin(),
                                              log_paths.end());
      const ExplainOutputs out = cmd_explain(
          checkpoint, logs, explained_index, estimator,
          out_path.empty() ? std::nullopt
                           : std::optional<std::filesystem::path>(out_path),
          background_max > 0 ? std::optional<int>(background_max) : std::nullopt,
          n_permutations);
      std::printf("attributions: %s\n", out.attribution_json.string().c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const LoadError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const BudgetExceededError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace levershap
