#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "levershap/run_config.hpp"
#include "levershap/shap.hpp"

namespace levershap {

// Scenario pinning for evaluation: the goal gap is realized symmetrically
// about zero and the lever base is placed so the initial end-effector
// distance matches, clamped into the sampling range when unreachable.
struct EvalScenario {
  double gap = 0.0;
  double ee_distance = 0.0;
};

std::vector<EvalScenario> load_scenarios(const std::filesystem::path& path);

struct TrainOutputs {
  std::filesystem::path checkpoint_dir;
  std::filesystem::path report_csv;
};

// Stage-1 training on the coarse environment.
TrainOutputs cmd_train(const RunConfig& config);

// Fine-stage transfer training starting from an existing checkpoint.
TrainOutputs cmd_finetune(const RunConfig& config,
                          const std::filesystem::path& checkpoint_dir);

struct EvalOutputs {
  std::filesystem::path error_csv;
  std::vector<std::filesystem::path> episode_logs;
  double success_rate = 0.0;
};

EvalOutputs cmd_eval(const std::filesystem::path& checkpoint_dir,
                     Fidelity env_choice, std::optional<int> episodes,
                     const std::optional<std::filesystem::path>& scenario_file,
                     const std::optional<std::filesystem::path>& out_dir,
                     std::optional<std::uint64_t> seed);

struct ExplainOutputs {
  std::filesystem::path attribution_json;
  std::vector<std::filesystem::path> svg_files;
};

// Background from the four non-explained logs, per-step attributions of the
// explained one.
ExplainOutputs cmd_explain(const std::filesystem::path& checkpoint_dir,
                           const std::vector<std::filesystem::path>& logs,
                           int explained_index, ShapEstimator estimator,
                           const std::optional<std::filesystem::path>& out_dir,
                           std::optional<int> background_max,
                           int n_permutations);

// Full argv interface; returns the process exit code
// (0 ok, 1 runtime failure, 2 usage or config error).
int run_cli(int argc, const char* const* argv);

}  // namespace levershap
