#include "levershap/episode_log.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

void write_episode_log(const EpisodeLog& log,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const EpisodeStep& step : log) {
    json line;
    line["t"] = step.t;
    line["observation"] = step.observation;
    line["action"] = step.action;
    line["reward"] = step.reward;
    line["achieved_goal"] = step.achieved_goal;
    line["desired_goal"] = step.desired_goal;
    line["is_success"] = step.is_success;
    out << line.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

EpisodeLog read_episode_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open episode log " + path.string());
  EpisodeLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json doc = json::parse(line);
      EpisodeStep step;
      step.t = doc.at("t").get<int>();
      step.observation = doc.at("observation").get<Observation>();
      step.action = doc.at("action").get<std::array<double, kActionDim>>();
      step.reward = doc.at("reward").get<double>();
      step.achieved_goal = doc.at("achieved_goal").get<double>();
      step.desired_goal = doc.at("desired_goal").get<double>();
      step.is_success = doc.at("is_success").get<bool>();
      log.push_back(step);
    } catch (const json::exception& e) {
      throw LoadError("episode log " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

}  // namespace levershap
