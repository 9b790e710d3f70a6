// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ash/agent/episode.hpp"
#include "json.hpp"

namespace ash::agent {

/// One JSON Lines record per episode. See docs/trajectory_log.md for the schema.
nlohmann::ordered_json episode_to_json(const Episode& ep, std::size_t index);
/// Throws ParseError.
Episode episode_from_json(const nlohmann::json& j);

std::string episode_log_line(const Episode& ep, std::size_t index);

void write_trajectory_log(const std::filesystem::path& path, const std::vector<Episode>& episodes);
std::vector<Episode> read_trajectory_log(const std::filesystem::path& path);

}  // namespace ash::agent
