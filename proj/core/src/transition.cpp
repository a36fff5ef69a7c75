#include "levershap/transition.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "levershap/error.hpp"

namespace levershap {

using nlohmann::json;

void write_episode_trace(const EpisodeTrace& trace,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const Transition& t : trace) {
    json line;
    line["state"] = t.state;
    line["action"] = t.action;
    line["reward"] = t.reward;
    line["next_state"] = t.next_state;
    line["achieved_goal"] = t.achieved_goal;
    line["next_achieved_goal"] = t.next_achieved_goal;
    line["desired_goal"] = t.desired_goal;
    line["done"] = t.done;
    out << line.dump() << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

EpisodeTrace read_episode_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open episode trace " + path.string());
  EpisodeTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
      Transition t;
      t.state = doc.at("state").get<std::array<double, kStateDim>>();
      t.action = doc.at("action").get<std::array<double, kActionDim>>();
      t.reward = doc.at("reward").get<double>();
      t.next_state = doc.at("next_state").get<std::array<double, kStateDim>>();
      t.achieved_goal = doc.at("achieved_goal").get<double>();
      t.next_achieved_goal = doc.at("next_achieved_goal").get<double>();
      t.desired_goal = doc.at("desired_goal").get<double>();
      t.done = doc.at("done").get<bool>();
      trace.push_back(t);
    } catch (const json::exception& e) {
      throw LoadError("episode trace " + path.string() + " line " +
                      std::to_string(line_no) + ": " + e.what());
    }
  }
  return trace;
}

}  // namespace levershap
