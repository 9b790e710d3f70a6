// SPDX-License-Identifier: Apache-2.0
#include "ash/agent/orchestrator.hpp"

#include "ash/shop/env.hpp"

namespace ash::agent {

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::Purchased: return "Purchased";
        case Termination::StepLimit: return "StepLimit";
        case Termination::InvalidStreak: return "InvalidStreak";
        case Termination::PolicyError: return "PolicyError";
    }
    return "";
}

std::optional<Termination> termination_from_string(std::string_view s) {
    for (auto t : {Termination::Purchased, Termination::StepLimit, Termination::InvalidStreak, Termination::PolicyError}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

const prompt::SummarizedObservation* SummaryCache::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void SummaryCache::put(const std::string& key, prompt::SummarizedObservation s) { entries_.emplace(key, std::move(s)); }

SummaryResult summarize(const GoalSpec& goal, const std::optional<Action>& prev_action, const Observation& obs,
                        const prompt::SummarizerTemplates& templates, llm::Backend& backend,
                        const llm::CompletionParams& params, SummaryCache& cache) {
    if (obs.page_type == PageType::Done) throw std::invalid_argument("summarize: finished pages are not summarized");
    auto prompt = prompt::build_summarizer_prompt(goal, prev_action, obs, templates);
    auto key = llm::digest(prompt, params);
    if (const auto* hit = cache.find(key)) return SummaryResult{*hit, key, true};

    auto summary = prompt::parse_summary(backend.complete(prompt, params));
    summary.source_page_type = obs.page_type;
    summary.derived_from = prompt::summary_source_digest(goal, prev_action, obs);
    cache.put(key, summary);
    return SummaryResult{std::move(summary), std::move(key), false};
}

namespace {

/// How the observation for the next step came about.
enum class Arrival { Fresh, AfterThink, AfterInvalid };

}  // namespace

Episode run_episode(const Catalog& catalog, const GoalSpec& goal, Mode mode, Policy& policy, const Limits& limits,
                    const SummarizerConfig* summarizer, const StepObserver& on_step) {
    limits.validate();
    const bool ash = uses_summarizer(mode);
    if (ash && (!summarizer || !summarizer->templates || !summarizer->backend)) {
        throw std::invalid_argument("run_episode: mode " + std::string(to_string(mode)) + " needs a summarizer");
    }

    Episode ep;
    ep.goal = goal;
    ep.mode = mode;

    auto [state, page] = shop::reset(catalog, goal);
    std::string raw_text = page.text;
    std::optional<Action> prev_action;
    Arrival arrival = Arrival::Fresh;
    std::vector<prompt::HistoryEntry> history;
    SummaryCache cache;
    std::size_t invalid_streak = 0;
    std::size_t unparseable_streak = 0;

    auto finish = [&](Termination t) {
        ep.termination = t;
        ep.step_count = ep.steps.size();
        if (t != Termination::Purchased) ep.score = 0.0;
        return ep;
    };

    for (std::size_t t = 0; t < limits.max_steps; ++t) {
        StepRecord rec;
        rec.index = t;
        rec.raw_observation = raw_text;

        std::string visible;
        if (!ash) {
            visible = raw_text;
        } else if (arrival == Arrival::Fresh) {
            try {
                auto r = summarize(goal, prev_action, page, *summarizer->templates, *summarizer->backend,
                                   summarizer->params, cache);
                visible = r.summary.text;
                rec.summarized_observation = r.summary.text;
                rec.summarizer_prompt_digest = r.prompt_digest;
            } catch (const std::exception& e) {
                ep.error = std::string("summarizer: ") + e.what();
                return finish(Termination::PolicyError);
            }
        } else if (arrival == Arrival::AfterThink) {
            visible = std::string(shop::kThinkResponse);
        } else {
            visible = std::string(shop::kInvalidBanner);
        }
        history.push_back({prev_action, visible});

        Decision decision;
        try {
            decision = policy.decide(goal, history, page);
        } catch (const std::exception& e) {
            ep.error = std::string("policy: ") + e.what();
            return finish(Termination::PolicyError);
        }
        rec.raw_output = decision.raw;
        rec.actor_prompt_digest = decision.prompt_digest;

        std::optional<Action> action;
        try {
            action = prompt::parse_actor_output(decision.raw);
        } catch (const ActionSyntaxError&) {
        }

        if (!action) {
            ++unparseable_streak;
            ++invalid_streak;
            rec.valid = false;
            ep.steps.push_back(std::move(rec));
            if (on_step) on_step(ep.steps.back());
            prev_action.reset();
            raw_text = std::string(shop::kInvalidBanner) + "\n" + page.text;
            arrival = Arrival::AfterInvalid;
            if (unparseable_streak >= kMaxUnparseableStreak) {
                ep.error = "policy produced " + std::to_string(unparseable_streak) + " unparseable outputs in a row";
                return finish(Termination::PolicyError);
            }
        } else {
            unparseable_streak = 0;
            auto out = shop::step(state, *action, catalog, goal);
            rec.action = *action;
            rec.valid = out.valid;
            ep.steps.push_back(std::move(rec));
            if (on_step) on_step(ep.steps.back());
            prev_action = *action;
            raw_text = out.observation.text;

            if (!out.valid) {
                ++invalid_streak;
                arrival = Arrival::AfterInvalid;
            } else {
                invalid_streak = 0;
                if (is_think(*action)) {
                    arrival = Arrival::AfterThink;
                } else {
                    arrival = Arrival::Fresh;
                    state = out.next_state;
                    page = out.observation;
                }
            }
            if (out.done) {
                const auto& done = std::get<Done>(out.next_state);
                ep.purchase = Purchase{done.product_id, done.selected_options};
                ep.score = *out.score;
                return finish(Termination::Purchased);
            }
        }
        if (invalid_streak >= limits.max_invalid_streak) return finish(Termination::InvalidStreak);
    }
    return finish(Termination::StepLimit);
}

}  // namespace ash::agent
