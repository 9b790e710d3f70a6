// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ash/action.hpp"
#include "ash/mode.hpp"
#include "ash/shop/types.hpp"

namespace ash::agent {

struct Limits {
    std::size_t max_steps = 20;
    std::size_t max_invalid_streak = 5;

    void validate() const {
        if (max_steps < 1 || max_invalid_streak < 1) throw std::invalid_argument("limits must be >= 1");
    }
};

/// Unparseable policy outputs in a row that end an episode.
inline constexpr std::size_t kMaxUnparseableStreak = 3;

enum class Termination { Purchased, StepLimit, InvalidStreak, PolicyError };

std::string_view to_string(Termination t);
std::optional<Termination> termination_from_string(std::string_view s);

/// One (observation, summary, action) triple. `action` is absent when the
/// policy output could not be parsed; `raw_output` keeps what it said.
struct StepRecord {
    std::size_t index = 0;
    std::string raw_observation;
    std::optional<std::string> summarized_observation;
    std::optional<Action> action;
    std::string raw_output;
    bool valid = false;
    std::optional<std::string> summarizer_prompt_digest;
    std::optional<std::string> actor_prompt_digest;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct Episode {
    GoalSpec goal;
    Mode mode = Mode::ReAct;
    std::vector<StepRecord> steps;
    Termination termination = Termination::StepLimit;
    /// 0 unless the episode ended in a purchase.
    double score = 0.0;
    std::size_t step_count = 0;
    std::optional<Purchase> purchase;
    /// Failure message for PolicyError terminations.
    std::string error;

    friend bool operator==(const Episode&, const Episode&) = default;
};

}  // namespace ash::agent
