#pragma once

#include <filesystem>
#include <string>

#include "levershap/explain.hpp"

namespace levershap {

// Stacked-area force plot for one action output: positive attributions stack
// above the base-value line (class "pos"), negative ones below (class "neg"),
// step number on the x-axis. The model-output curve and the base line are
// drawn on top.
std::string force_plot_svg(const EpisodeAttributions& attributions,
                           int output_index,
                           const std::vector<std::string>& feature_names);

// JSON document {base_value: [per output], feature_names, per_step:
// [{step, output, features: [{index, name, value, phi}]}]}. `value` is the
// raw (unnormalized) feature value of the explained input at that step.
std::string attributions_json(const EpisodeAttributions& attributions,
                              const std::vector<Eigen::VectorXd>& raw_inputs,
                              const std::vector<std::string>& feature_names);

// Writes <prefix>.json plus one <prefix>_a<k>.svg per action output.
void export_force_plot(const EpisodeAttributions& attributions,
                       const std::vector<Eigen::VectorXd>& raw_inputs,
                       const std::vector<std::string>& feature_names,
                       const std::filesystem::path& out_dir,
                       const std::string& prefix = "force_plot");

}  // namespace levershap
