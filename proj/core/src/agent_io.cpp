#include "levershap/agent_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "levershap/checkpoint.hpp"
#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

namespace {

constexpr int kMetaFormatVersion = 1;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace

void save_normalizer(const ObsNormalizer& normalizer,
                     const std::filesystem::path& path) {
  json doc;
  doc["format_version"] = 1;
  const Eigen::VectorXd mean = normalizer.mean();
  const Eigen::VectorXd var = normalizer.variance();
  std::vector<double> mean_v(mean.data(), mean.data() + mean.size());
  std::vector<double> var_v(var.data(), var.data() + var.size());
  doc["mean"] = mean_v;
  doc["variance"] = var_v;
  doc["count"] = normalizer.count();
  doc["clip_range"] = normalizer.clip_range();
  doc["alias_slot"] = normalizer.alias_slot();
  doc["alias_source"] = normalizer.alias_source();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump() << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

void load_normalizer_into(ObsNormalizer& normalizer,
                          const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    const auto mean_v = doc.at("mean").get<std::vector<double>>();
    const auto var_v = doc.at("variance").get<std::vector<double>>();
    if (static_cast<int>(mean_v.size()) != normalizer.dim())
      throw LoadError("normalizer statistics width mismatch");
    Eigen::VectorXd mean =
        Eigen::Map<const Eigen::VectorXd>(mean_v.data(), mean_v.size());
    Eigen::VectorXd var =
        Eigen::Map<const Eigen::VectorXd>(var_v.data(), var_v.size());
    normalizer.set_statistics(mean, var, doc.at("count").get<double>());
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

void save_agent(const DdpgAgent& agent, const RunConfig& config,
                const std::string& stage, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint dir " + dir.string());

  save_mlp(agent.actor(), dir / "actor.json");
  save_mlp(agent.critic(), dir / "critic.json");
  save_mlp(agent.target_actor(), dir / "actor_target.json");
  save_mlp(agent.target_critic(), dir / "critic_target.json");
  save_normalizer(agent.normalizer(), dir / "normalizer.json");

  json meta;
  meta["format_version"] = kMetaFormatVersion;
  meta["stage"] = stage;
  meta["seed"] = config.seed;
  meta["run_config"] = json::parse(run_config_to_json(config));
  std::ofstream out(dir / "meta.json");
  if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

LoadedAgent load_agent(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "meta.json"))
    throw LoadError("checkpoint " + dir.string() + " is missing meta.json");
  const json meta = read_json_file(dir / "meta.json");
  if (!meta.contains("format_version") ||
      meta["format_version"].get<int>() != kMetaFormatVersion)
    throw LoadError("checkpoint " + dir.string() +
                    ": unsupported format_version");

  RunConfig config;
  std::string stage;
  try {
    config = run_config_from_json(meta.at("run_config").dump());
    stage = meta.at("stage").get<std::string>();
  } catch (const json::exception& e) {
    throw LoadError(dir.string() + "/meta.json: " + e.what());
  }

  LoadedAgent loaded{DdpgAgent(config.agent, config.seed), config, stage};
  loaded.agent.load_networks(load_mlp(dir / "actor.json"),
                             load_mlp(dir / "critic.json"),
                             load_mlp(dir / "actor_target.json"),
                             load_mlp(dir / "critic_target.json"));
  load_normalizer_into(loaded.agent.normalizer(), dir / "normalizer.json");
  return loaded;
}

}  // namespace levershap
