// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>

#include "ash/agent/orchestrator.hpp"
#include "ash/common/text.hpp"
#include "ash/llm/heuristic_model.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/env.hpp"
#include "ash/shop/goals.hpp"
#include "oracles.hpp"

using namespace ash;
using namespace ash::agent;

namespace {

// Emits fixed raw outputs; the last one repeats.
class ScriptPolicy : public Policy {
public:
    explicit ScriptPolicy(std::vector<std::string> outputs) : outputs_(std::move(outputs)) {}
    Decision decide(const GoalSpec&, std::span<const prompt::HistoryEntry> history, const Observation&) override {
        histories.emplace_back(history.begin(), history.end());
        auto i = std::min(calls_++, outputs_.size() - 1);
        return Decision{outputs_[i], std::nullopt};
    }
    std::vector<std::vector<prompt::HistoryEntry>> histories;

private:
    std::vector<std::string> outputs_;
    std::size_t calls_ = 0;
};

class Throwing : public Policy {
public:
    Decision decide(const GoalSpec&, std::span<const prompt::HistoryEntry>, const Observation&) override {
        throw llm::BackendUnavailable("down");
    }
};

class Fixture : public ::testing::Test {
protected:
    Catalog catalog = shop::generate_catalog(7, 200);
    std::vector<GoalSpec> goals = shop::generate_goals(catalog, 0, 100);
    prompt::TemplateSet templates = prompt::TemplateSet::load(ash::testing::template_dir());
    Limits limits;
};

}  // namespace

TEST(Limits, Validation) {
    EXPECT_THROW((Limits{0, 5}.validate()), std::invalid_argument);
    EXPECT_THROW((Limits{20, 0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW(Limits{}.validate());
    EXPECT_EQ(Limits{}.max_steps, 20u);
    EXPECT_EQ(Limits{}.max_invalid_streak, 5u);
}

TEST_F(Fixture, AlwaysInvalidStopsAtFive) {
    ScriptPolicy p({"click[NoSuchButton]"});
    auto ep = run_episode(catalog, goals[0], Mode::ReAct, p, limits);
    EXPECT_EQ(ep.termination, Termination::InvalidStreak);
    EXPECT_EQ(ep.step_count, 5u);
    EXPECT_EQ(ep.steps.size(), 5u);
    EXPECT_EQ(ep.score, 0.0);
    for (const auto& s : ep.steps) EXPECT_FALSE(s.valid);
    // Raw modes see the banner followed by the page.
    EXPECT_EQ(p.histories.back().back().observation_text.rfind("Invalid action!\nInstruction: ", 0), 0u);
}

TEST_F(Fixture, ThinkOnlyStopsAtTwenty) {
    ScriptPolicy p({"think[still thinking]"});
    auto ep = run_episode(catalog, goals[0], Mode::ReAct, p, limits);
    EXPECT_EQ(ep.termination, Termination::StepLimit);
    EXPECT_EQ(ep.step_count, 20u);
    EXPECT_EQ(p.histories.back().back().observation_text, "OK.");
}

TEST_F(Fixture, InvalidStreakResetsOnValidAction) {
    std::vector<std::string> outs;
    for (int r = 0; r < 4; ++r) {
        for (int i = 0; i < 4; ++i) outs.push_back("click[nope]");
        outs.push_back("think[reset]");
    }
    outs.push_back("click[nope]");
    ScriptPolicy p(outs);
    auto ep = run_episode(catalog, goals[0], Mode::ReAct, p, limits);
    EXPECT_EQ(ep.termination, Termination::StepLimit);
    EXPECT_EQ(ep.step_count, 20u);

    Limits tight{30, 5};
    ScriptPolicy q(outs);
    auto ep2 = run_episode(catalog, goals[0], Mode::ReAct, q, tight);
    EXPECT_EQ(ep2.termination, Termination::InvalidStreak);
    EXPECT_EQ(ep2.step_count, 25u);
}

TEST_F(Fixture, UnparseableOutputsEndInPolicyError) {
    ScriptPolicy p({"I would like to buy it"});
    auto ep = run_episode(catalog, goals[0], Mode::ReAct, p, limits);
    EXPECT_EQ(ep.termination, Termination::PolicyError);
    EXPECT_EQ(ep.step_count, 3u);
    EXPECT_FALSE(ep.steps[0].action);
    EXPECT_EQ(ep.steps[0].raw_output, "I would like to buy it");
    EXPECT_FALSE(ep.error.empty());

    ScriptPolicy q({"garbage", "garbage", "think[ok]", "garbage", "garbage", "think[ok]"});
    auto ep2 = run_episode(catalog, goals[0], Mode::ReAct, q, limits);
    EXPECT_EQ(ep2.termination, Termination::StepLimit);
}

TEST_F(Fixture, PolicyExceptionIsPolicyError) {
    Throwing t;
    auto ep = run_episode(catalog, goals[0], Mode::Act, t, limits);
    EXPECT_EQ(ep.termination, Termination::PolicyError);
    EXPECT_EQ(ep.step_count, 0u);
    EXPECT_NE(ep.error.find("down"), std::string::npos);
}

TEST_F(Fixture, AshModeNeedsSummarizer) {
    ScriptPolicy p({"think[x]"});
    EXPECT_THROW(run_episode(catalog, goals[0], Mode::Ash, p, limits), std::invalid_argument);
}

TEST_F(Fixture, OracleSolvesEveryGeneratedGoal) {
    for (const auto& g : goals) {
        OraclePolicy oracle(catalog);
        auto ep = run_episode(catalog, g, Mode::Act, oracle, limits);
        ASSERT_EQ(ep.termination, Termination::Purchased) << g.id << ": " << ep.error;
        EXPECT_EQ(ep.score, 1.0) << g.id;
        EXPECT_EQ(ep.steps.back().action, Action(Click{"Buy Now"}));
        EXPECT_LE(ep.step_count, limits.max_steps);
        for (const auto& s : ep.steps) EXPECT_TRUE(s.valid);
    }
}

TEST_F(Fixture, OracleMatchesExhaustiveBestOnRandomGoals) {
    // Goals aimed at one product but scored against everything else too.
    auto other = shop::generate_goals(shop::generate_catalog(99, 200), 3, 40);
    for (auto g : other) {
        g.solvable = false;
        OraclePolicy oracle(catalog);
        auto ep = run_episode(catalog, g, Mode::Act, oracle, Limits{60, 5});
        double best = ash::testing::brute_force_best(catalog, g);
        if (best == 0.0) {
            EXPECT_NE(ep.termination, Termination::Purchased);
            continue;
        }
        ASSERT_EQ(ep.termination, Termination::Purchased) << g.instruction_text << ": " << ep.error;
        EXPECT_EQ(ep.score, best) << g.instruction_text;
    }
}

TEST(OracleFixture, PartialGoalReachesBestAchievable) {
    auto c = shop::load_catalog(ash::testing::fixture("partial_catalog.json"));
    auto g = shop::load_goals(ash::testing::fixture("partial_goal.json")).at(0);
    OraclePolicy oracle(c);
    auto ep = run_episode(c, g, Mode::Act, oracle, Limits{});
    EXPECT_EQ(ep.termination, Termination::Purchased);
    EXPECT_EQ(ep.score, 0.75);
    EXPECT_EQ(ep.purchase->product_id, "D1");
}

TEST(OracleFixture, EmptyCatalogSearchesTwiceThenFails) {
    Catalog empty;
    GoalSpec g;
    g.target_category = "candle";
    g.required_attributes = {"soy wax"};
    g.instruction_text = shop::render_instruction(g);
    OraclePolicy oracle(empty);
    auto [state, obs] = shop::reset(empty, g);
    std::vector<prompt::HistoryEntry> h{{std::nullopt, obs.text}};
    int searches = 0;
    for (int i = 0; i < 6; ++i) {
        Decision d;
        try {
            d = oracle.decide(g, h, obs);
        } catch (const NoProductFound&) {
            break;
        }
        auto a = parse_action(d.raw);
        if (std::holds_alternative<Search>(a)) ++searches;
        auto out = shop::step(state, a, empty, g);
        state = out.next_state;
        obs = out.observation;
        h.push_back({a, obs.text});
    }
    EXPECT_EQ(searches, 2);
    EXPECT_THROW(oracle.decide(g, h, obs), NoProductFound);
    auto ep = run_episode(empty, g, Mode::Act, oracle, Limits{});
    EXPECT_EQ(ep.termination, Termination::PolicyError);
}

TEST_F(Fixture, SummarizeCachesByTriple) {
    llm::ScriptedBackend backend(llm::ScriptedBackend::Responder(llm::heuristic_response));
    SummaryCache cache;
    llm::CompletionParams params;
    const auto& g = goals[0];
    auto [state, obs] = shop::reset(catalog, g);
    auto a = summarize(g, std::nullopt, obs, templates.summarizer, backend, params, cache);
    auto b = summarize(g, std::nullopt, obs, templates.summarizer, backend, params, cache);
    EXPECT_EQ(backend.calls(), 1u);
    EXPECT_FALSE(a.cache_hit);
    EXPECT_TRUE(b.cache_hit);
    EXPECT_EQ(a.summary.text, b.summary.text);
    EXPECT_EQ(a.summary.source_page_type, PageType::SearchPage);
    EXPECT_EQ(a.summary.derived_from, prompt::summary_source_digest(g, std::nullopt, obs));

    summarize(g, Action(Click{"Back to Search"}), obs, templates.summarizer, backend, params, cache);
    EXPECT_EQ(backend.calls(), 2u);

    Observation done;
    done.page_type = PageType::Done;
    EXPECT_THROW(summarize(g, std::nullopt, done, templates.summarizer, backend, params, cache), std::invalid_argument);
}

TEST_F(Fixture, SummarizerFailureIsPolicyError) {
    llm::ScriptedBackend empty(llm::ScriptedBackend::Responder([](std::string_view) { return std::string("  "); }));
    SummarizerConfig sc{&templates.summarizer, &empty, {}};
    ScriptPolicy p({"think[x]"});
    auto ep = run_episode(catalog, goals[0], Mode::Ash, p, limits, &sc);
    EXPECT_EQ(ep.termination, Termination::PolicyError);
    EXPECT_NE(ep.error.find("summarizer"), std::string::npos);
}

TEST_F(Fixture, AshActorNeverSeesRawPages) {
    for (auto mode : {Mode::Ash, Mode::ActAsh}) {
        for (std::size_t i = 0; i < 15; ++i) {
            llm::ScriptedBackend summarizer(llm::ScriptedBackend::Responder(llm::heuristic_response));
            llm::ScriptedBackend actor(llm::ScriptedBackend::Responder(llm::heuristic_response));
            SummarizerConfig sc{&templates.summarizer, &summarizer, {}};
            LlmPolicy policy(templates, actor, {}, mode);
            auto ep = run_episode(catalog, goals[i], mode, policy, limits, &sc);
            auto prompts = actor.prompts();
            ASSERT_EQ(prompts.size(), ep.steps.size());
            for (const auto& s : ep.steps) {
                const auto& raw = s.raw_observation;
                if (raw.size() <= std::string("Invalid action!").size()) continue;
                for (const auto& p : prompts) EXPECT_EQ(p.find(raw), std::string::npos) << "raw page leaked";
            }
            // A summary is recorded for every step that landed on a new page.
            for (std::size_t k = 0; k < ep.steps.size(); ++k) {
                bool after_page_change = k == 0 || (ep.steps[k - 1].valid && ep.steps[k - 1].action &&
                                                    !is_think(*ep.steps[k - 1].action));
                EXPECT_EQ(ep.steps[k].summarized_observation.has_value(), after_page_change) << k;
                EXPECT_EQ(ep.steps[k].summarizer_prompt_digest.has_value(), after_page_change) << k;
            }
        }
    }
}

TEST_F(Fixture, RawModesRecordNoSummaries) {
    llm::ScriptedBackend actor(llm::ScriptedBackend::Responder(llm::heuristic_response));
    LlmPolicy policy(templates, actor, {}, Mode::ReAct);
    auto ep = run_episode(catalog, goals[1], Mode::ReAct, policy, limits);
    EXPECT_EQ(ep.termination, Termination::Purchased);
    for (const auto& s : ep.steps) {
        EXPECT_FALSE(s.summarized_observation);
        EXPECT_TRUE(s.actor_prompt_digest);
    }
}

TEST_F(Fixture, AshInvalidStepShowsBannerOnly) {
    llm::ScriptedBackend summarizer(llm::ScriptedBackend::Responder(llm::heuristic_response));
    SummarizerConfig sc{&templates.summarizer, &summarizer, {}};
    ScriptPolicy p({"click[nope]", "think[x]"});
    run_episode(catalog, goals[0], Mode::Ash, p, Limits{3, 5}, &sc);
    ASSERT_EQ(p.histories.size(), 3u);
    EXPECT_EQ(p.histories[1].back().observation_text, "Invalid action!");
    EXPECT_EQ(p.histories[2].back().observation_text, "OK.");
    EXPECT_EQ(summarizer.calls(), 1u) << "neither invalid nor think steps reach the summarizer";
}

TEST_F(Fixture, EpisodeInvariants) {
    for (auto mode : {Mode::Act, Mode::ReAct, Mode::Ash, Mode::ActAsh}) {
        llm::ScriptedBackend backend(llm::ScriptedBackend::Responder(llm::heuristic_response));
        SummarizerConfig sc{&templates.summarizer, &backend, {}};
        for (std::size_t i = 0; i < 20; ++i) {
            LlmPolicy policy(templates, backend, {}, mode);
            auto ep = run_episode(catalog, goals[i], mode, policy, limits, &sc);
            EXPECT_EQ(ep.step_count, ep.steps.size());
            EXPECT_LE(ep.step_count, limits.max_steps);
            EXPECT_EQ(ep.purchase.has_value(), ep.termination == Termination::Purchased);
            if (ep.termination == Termination::Purchased) {
                EXPECT_EQ(ep.steps.back().action, Action(Click{"Buy Now"}));
            } else {
                EXPECT_EQ(ep.score, 0.0);
            }
            for (std::size_t k = 0; k < ep.steps.size(); ++k) EXPECT_EQ(ep.steps[k].index, k);
        }
    }
}

TEST_F(Fixture, ObserverSeesEveryStep) {
    OraclePolicy oracle(catalog);
    std::vector<std::size_t> seen;
    auto ep = run_episode(catalog, goals[2], Mode::Act, oracle, limits, nullptr,
                          [&](const StepRecord& s) { seen.push_back(s.index); });
    EXPECT_EQ(seen.size(), ep.steps.size());
}

// Whitespace-token counts of the actor prompts on the context fixture,
// measured once and frozen.
TEST(ContextFixture, FrozenActorPromptSizes) {
    auto c = shop::load_catalog(ash::testing::fixture("context/catalog.json"));
    auto g = shop::load_goals(ash::testing::fixture("context/goal.json")).at(0);
    std::vector<std::string> actions;
    std::ifstream in(ash::testing::fixture("context/actions.txt"));
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) actions.push_back(line);
    }
    auto templates = prompt::TemplateSet::load(ash::testing::template_dir());
    auto sizes = [&](Mode mode) {
        llm::ScriptedBackend actor(actions);
        llm::ScriptedBackend summarizer(llm::ScriptedBackend::Responder(llm::heuristic_response));
        SummarizerConfig sc{&templates.summarizer, &summarizer, {}};
        LlmPolicy policy(templates, actor, {}, mode);
        run_episode(c, g, mode, policy, Limits{actions.size(), 5}, &sc);
        std::vector<std::size_t> out;
        for (const auto& p : actor.prompts()) out.push_back(count_whitespace_tokens(p));
        return out;
    };
    EXPECT_EQ(sizes(Mode::ReAct),
              (std::vector<std::size_t>{272, 404, 471, 556, 615, 668, 727, 854, 918, 977, 1038, 1119}));
    EXPECT_EQ(sizes(Mode::Ash),
              (std::vector<std::size_t>{190, 220, 267, 281, 320, 334, 373, 398, 443, 483, 525, 539}));
}
