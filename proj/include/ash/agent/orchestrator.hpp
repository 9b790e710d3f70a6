// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "ash/agent/episode.hpp"
#include "ash/agent/policy.hpp"
#include "ash/llm/backend.hpp"
#include "ash/prompt/prompting.hpp"

namespace ash::agent {

/// Per-episode memo of summaries keyed by request digest.
class SummaryCache {
public:
    const prompt::SummarizedObservation* find(const std::string& key) const;
    void put(const std::string& key, prompt::SummarizedObservation s);
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, prompt::SummarizedObservation> entries_;
};

struct SummaryResult {
    prompt::SummarizedObservation summary;
    std::string prompt_digest;
    bool cache_hit = false;
};

/// Stateless summarizer call: the prompt depends only on (goal, prev_action, obs).
/// Throws std::invalid_argument on a Done page; propagates EmptySummary and backend errors.
SummaryResult summarize(const GoalSpec& goal, const std::optional<Action>& prev_action, const Observation& obs,
                        const prompt::SummarizerTemplates& templates, llm::Backend& backend,
                        const llm::CompletionParams& params, SummaryCache& cache);

struct SummarizerConfig {
    const prompt::SummarizerTemplates* templates = nullptr;
    llm::Backend* backend = nullptr;
    llm::CompletionParams params;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Runs one episode to termination. In Ash and ActAsh modes `summarizer`
/// must be set. Failures are reported through Episode::termination.
Episode run_episode(const Catalog& catalog, const GoalSpec& goal, Mode mode, Policy& policy, const Limits& limits,
                    const SummarizerConfig* summarizer = nullptr, const StepObserver& on_step = {});

}  // namespace ash::agent
