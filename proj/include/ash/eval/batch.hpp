// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ash/agent/orchestrator.hpp"
#include "ash/eval/config.hpp"
#include "ash/eval/report.hpp"
#include "ash/llm/transcript.hpp"

namespace ash::eval {

using PolicyFactory = std::function<std::unique_ptr<agent::Policy>()>;

/// Runs every goal once with at most `workers` episodes in flight. Output
/// order follows `goals` whatever the completion order.
std::vector<agent::Episode> run_episodes(const Catalog& catalog, const std::vector<GoalSpec>& goals, Mode mode,
                                         const agent::Limits& limits, const PolicyFactory& make_policy,
                                         const agent::SummarizerConfig* summarizer, std::size_t workers);

/// Backend stack described by a BackendConfig, owning whatever it wraps.
class BackendStack {
public:
    explicit BackendStack(const BackendConfig& config);
    llm::Backend& backend() { return *top_; }

private:
    std::unique_ptr<llm::Backend> inner_;
    std::optional<llm::TranscriptStore> store_;
    std::unique_ptr<llm::Backend> top_;
};

struct Inputs {
    Catalog catalog;
    std::vector<GoalSpec> goals;
};

/// Loads or generates the catalog and goal set. Throws ConfigError / ParseError.
Inputs load_inputs(const RunConfig& config);

struct BatchResult {
    std::vector<agent::Episode> episodes;
    AggregateReport report;
};

inline constexpr const char* kTrajectoryFile = "trajectories.jsonl";

/// Validates the config, runs the batch and, when output_dir is set, writes
/// trajectories.jsonl plus the report files there.
BatchResult run_batch(const RunConfig& config);

}  // namespace ash::eval
