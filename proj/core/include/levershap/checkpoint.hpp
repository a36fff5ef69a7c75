#pragma once

#include <filesystem>
#include <string>

#include "levershap/mlp.hpp"

namespace levershap {

// Checkpoint records are JSON with a format_version field. Floating point is
// written with shortest-round-trip precision, so save/load is bit-faithful.

std::string mlp_to_json(const Mlp& mlp);
Mlp mlp_from_json(const std::string& text);

void save_mlp(const Mlp& mlp, const std::filesystem::path& path);
Mlp load_mlp(const std::filesystem::path& path);

}  // namespace levershap
