// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ash/shop/types.hpp"
#include "json.hpp"

namespace ash::shop {

/// "Find me a(n) {attributes} {category} with {option values}, and price lower
/// than {cap} dollars", dropping the option and price clauses when empty.
std::string render_instruction(const GoalSpec& goal);

/// Each goal is derived from a sampled target product, so every returned goal
/// is solvable. `solvable` is still computed by scoring the whole catalog.
std::vector<GoalSpec> generate_goals(const Catalog& catalog, std::uint64_t seed, std::size_t n);

/// Highest score any (product, option selection) in the catalog reaches.
double best_achievable_score(const Catalog& catalog, const GoalSpec& goal);

std::vector<GoalSpec> load_goals(const std::filesystem::path& path);
std::vector<GoalSpec> parse_goals(std::string_view text);
std::string serialize_goals(const std::vector<GoalSpec>& goals);
void save_goals(const std::vector<GoalSpec>& goals, const std::filesystem::path& path);


nlohmann::ordered_json goal_to_json(const GoalSpec& goal);
/// Throws ParseError.
GoalSpec goal_from_json(const nlohmann::json& j);

}  // namespace ash::shop
