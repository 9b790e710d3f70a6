// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ash/action.hpp"
#include "ash/shop/types.hpp"

namespace ash::shop {

inline constexpr std::size_t kResultsPerPage = 10;
inline constexpr std::string_view kInvalidBanner = "Invalid action!";
inline constexpr std::string_view kThinkResponse = "OK.";

std::pair<PageState, Observation> reset(const Catalog& catalog, const GoalSpec& goal);

/// Applies one action. Invalid actions leave the state untouched and re-render
/// the page under an "Invalid action!" banner. Throws SteppedAfterDone.
StepOutcome step(const PageState& state, const Action& action, const Catalog& catalog, const GoalSpec& goal);

/// Token-overlap ranking: score desc, then id asc; zero-overlap products are
/// dropped. Throws EmptyQuery when the query has no tokens.
std::vector<std::string> search_rank(const Catalog& catalog, std::string_view query);

Observation render(const PageState& state, const Catalog& catalog, const GoalSpec& goal);

/// Matched goal components over component count, zeroed on a category mismatch.
double score(const Purchase& purchase, const GoalSpec& goal, const Catalog& catalog);

/// The selection a buyer should make on `product` for `goal`: every required
/// option value the product offers.
SelectedOptions best_selection(const Product& product, const GoalSpec& goal);

}  // namespace ash::shop
