// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "ash/llm/backend.hpp"
#include "ash/mode.hpp"
#include "ash/prompt/prompting.hpp"
#include "ash/shop/types.hpp"

namespace ash::agent {

struct Decision {
    std::string raw;
    std::optional<std::string> prompt_digest;
};

/// Chooses the next action. `history` is what the actor is allowed to see
/// (summaries in ASH modes); `page` is the raw rendering of the current page.
class Policy {
public:
    virtual ~Policy() = default;
    virtual Decision decide(const GoalSpec& goal, std::span<const prompt::HistoryEntry> history,
                            const Observation& page) = 0;
};

/// Actor prompt + backend completion. Reads only the goal and `history`.
class LlmPolicy : public Policy {
public:
    LlmPolicy(const prompt::TemplateSet& templates, llm::Backend& backend, llm::CompletionParams params, Mode mode)
        : templates_(templates), backend_(backend), params_(std::move(params)), mode_(mode) {}

    Decision decide(const GoalSpec& goal, std::span<const prompt::HistoryEntry> history,
                    const Observation& page) override;

private:
    const prompt::TemplateSet& templates_;
    llm::Backend& backend_;
    llm::CompletionParams params_;
    Mode mode_;
};

class NoProductFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reference policy with full catalog access. Searches for the goal's
/// category and attributes (then the category alone), pages through results
/// to the catalog-wide best product, selects the required options and buys.
/// Stateless: progress is read back from the action history.
class OraclePolicy : public Policy {
public:
    explicit OraclePolicy(const Catalog& catalog) : catalog_(catalog) {}

    Decision decide(const GoalSpec& goal, std::span<const prompt::HistoryEntry> history,
                    const Observation& page) override;

    /// Highest-scoring product under its best selection, ties by id; null for an empty catalog.
    static const Product* best_product(const Catalog& catalog, const GoalSpec& goal);

private:
    const Catalog& catalog_;
};

}  // namespace ash::agent
