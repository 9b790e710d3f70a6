// SPDX-License-Identifier: Apache-2.0
#include "ash/eval/batch.hpp"

#include <atomic>
#include <thread>

#include "ash/agent/trajectory_log.hpp"
#include "ash/llm/heuristic_model.hpp"
#include "ash/llm/remote.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/goals.hpp"

namespace ash::eval {

std::vector<agent::Episode> run_episodes(const Catalog& catalog, const std::vector<GoalSpec>& goals, Mode mode,
                                         const agent::Limits& limits, const PolicyFactory& make_policy,
                                         const agent::SummarizerConfig* summarizer, std::size_t workers) {
    std::vector<agent::Episode> out(goals.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < goals.size(); i = next++) {
            auto policy = make_policy();
            out[i] = agent::run_episode(catalog, goals[i], mode, *policy, limits, summarizer);
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, goals.size()));
    if (workers == 1) {
        work();
        return out;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return out;
}

namespace {

std::unique_ptr<llm::Backend> make_leaf(BackendKind kind, const BackendConfig& config) {
    switch (kind) {
        case BackendKind::Scripted:
            return std::make_unique<llm::ScriptedBackend>(llm::ScriptedBackend::Responder(llm::heuristic_response));
        case BackendKind::Remote:
            return std::make_unique<llm::RemoteBackend>(config.remote);
        default:
            throw ConfigError("backend '" + std::string(to_string(kind)) + "' cannot be used here");
    }
}

}  // namespace

BackendStack::BackendStack(const BackendConfig& config) {
    switch (config.kind) {
        case BackendKind::Scripted:
        case BackendKind::Remote:
            top_ = make_leaf(config.kind, config);
            break;
        case BackendKind::Record:
            if (!config.transcript) throw ConfigError("record backend needs a transcript path");
            inner_ = make_leaf(config.record_inner, config);
            store_.emplace(llm::TranscriptStore::open_for_record(*config.transcript));
            top_ = std::make_unique<llm::RecordingBackend>(*inner_, *store_);
            break;
        case BackendKind::Replay:
            if (!config.transcript) throw ConfigError("replay backend needs a transcript path");
            store_.emplace(llm::TranscriptStore::open_for_replay(*config.transcript));
            top_ = std::make_unique<llm::ReplayBackend>(*store_);
            break;
    }
}

Inputs load_inputs(const RunConfig& config) {
    Inputs in;
    in.catalog = config.catalog.file ? shop::load_catalog(*config.catalog.file)
                                     : shop::generate_catalog(config.catalog.seed, config.catalog.size);
    in.goals = config.goals.file
                   ? shop::load_goals(*config.goals.file)
                   : shop::generate_goals(in.catalog, config.goals.seed.value_or(config.seed), config.goals.count);
    if (in.goals.empty()) throw ConfigError("goal set is empty");
    return in;
}

BatchResult run_batch(const RunConfig& config) {
    config.validate();
    auto inputs = load_inputs(config);

    const bool needs_backend = config.policy == PolicyKind::Llm || uses_summarizer(config.mode);
    std::optional<prompt::TemplateSet> templates;
    std::optional<BackendStack> stack;
    if (needs_backend) {
        templates.emplace(prompt::TemplateSet::load(config.templates));
        stack.emplace(config.backend);
    }

    agent::SummarizerConfig summarizer;
    const agent::SummarizerConfig* summarizer_ptr = nullptr;
    if (uses_summarizer(config.mode)) {
        summarizer = {&templates->summarizer, &stack->backend(), config.params};
        summarizer_ptr = &summarizer;
    }

    PolicyFactory factory;
    if (config.policy == PolicyKind::Oracle) {
        factory = [&] { return std::make_unique<agent::OraclePolicy>(inputs.catalog); };
    } else {
        factory = [&] {
            return std::make_unique<agent::LlmPolicy>(*templates, stack->backend(), config.params, config.mode);
        };
    }

    BatchResult result;
    result.episodes = run_episodes(inputs.catalog, inputs.goals, config.mode, config.limits, factory, summarizer_ptr,
                                   config.workers);
    AggregateOptions opts;
    opts.bucket_edges = config.bucket_edges;
    opts.invalid_window = config.limits.max_invalid_streak;
    result.report = aggregate(result.episodes, opts);

    if (config.output_dir) {
        std::filesystem::create_directories(*config.output_dir);
        agent::write_trajectory_log(*config.output_dir / kTrajectoryFile, result.episodes);
        write_report(result.report, result.episodes, *config.output_dir);
    }
    return result;
}

}  // namespace ash::eval
