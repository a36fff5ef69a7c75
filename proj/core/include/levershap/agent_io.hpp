#pragma once

#include <filesystem>
#include <string>

#include "levershap/agent.hpp"
#include "levershap/run_config.hpp"

namespace levershap {

// Checkpoint directory layout: one JSON per network (actor, critic,
// actor_target, critic_target), normalizer.json, and meta.json carrying the
// resolved run config, stage tag and seed.

void save_agent(const DdpgAgent& agent, const RunConfig& config,
                const std::string& stage, const std::filesystem::path& dir);

struct LoadedAgent {
  DdpgAgent agent;
  RunConfig config;
  std::string stage;
};

LoadedAgent load_agent(const std::filesystem::path& dir);

void save_normalizer(const ObsNormalizer& normalizer,
                     const std::filesystem::path& path);
void load_normalizer_into(ObsNormalizer& normalizer,
                          const std::filesystem::path& path);

}  // namespace levershap
