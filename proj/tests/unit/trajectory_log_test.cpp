// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ash/agent/orchestrator.hpp"
#include "ash/agent/trajectory_log.hpp"
#include "ash/llm/heuristic_model.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/goals.hpp"
#include "ash/shop/types.hpp"
#include "oracles.hpp"

using namespace ash;
using namespace ash::agent;

namespace {

std::vector<Episode> sample_episodes() {
    auto catalog = shop::generate_catalog(7, 120);
    auto goals = shop::generate_goals(catalog, 1, 6);
    auto templates = prompt::TemplateSet::load(ash::testing::template_dir());
    std::vector<Episode> out;
    for (auto mode : {Mode::Act, Mode::Ash}) {
        for (const auto& g : goals) {
            llm::ScriptedBackend backend(llm::ScriptedBackend::Responder(llm::heuristic_response));
            SummarizerConfig sc{&templates.summarizer, &backend, {}};
            LlmPolicy policy(templates, backend, {}, mode);
            out.push_back(run_episode(catalog, g, mode, policy, Limits{}, &sc));
        }
    }
    // An unparseable step and a policy error.
    Episode bad;
    bad.goal = goals[0];
    bad.mode = Mode::ReAct;
    StepRecord s;
    s.raw_observation = "Invalid action!\nline\twith tab \"quoted\"";
    s.raw_output = "no brackets here";
    bad.steps = {s, s, s};
    for (std::size_t i = 0; i < 3; ++i) bad.steps[i].index = i;
    bad.step_count = 3;
    bad.termination = Termination::PolicyError;
    bad.error = "policy produced 3 unparseable outputs in a row";
    out.push_back(bad);
    return out;
}

}  // namespace

TEST(TrajectoryLog, JsonRoundTrip) {
    auto eps = sample_episodes();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        auto j = episode_to_json(eps[i], i);
        EXPECT_EQ(j["episode"], i);
        auto back = episode_from_json(nlohmann::json::parse(j.dump()));
        EXPECT_EQ(back, eps[i]) << i;
    }
}

TEST(TrajectoryLog, FileRoundTripAndStableBytes) {
    auto eps = sample_episodes();
    auto dir = std::filesystem::temp_directory_path() / "ash_traj_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "t.jsonl";
    write_trajectory_log(path, eps);
    auto back = read_trajectory_log(path);
    ASSERT_EQ(back.size(), eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) EXPECT_EQ(back[i], eps[i]);

    std::ifstream in(path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(line, episode_log_line(eps[n], n));
        ++n;
    }
    EXPECT_EQ(n, eps.size());
    std::filesystem::remove_all(dir);
}

TEST(TrajectoryLog, FieldsPresent) {
    auto eps = sample_episodes();
    auto j = episode_to_json(eps.back(), 0);
    for (const char* k : {"episode", "goal", "mode", "termination", "score", "step_count", "steps"}) {
        EXPECT_TRUE(j.contains(k)) << k;
    }
    EXPECT_EQ(j["termination"], "PolicyError");
    EXPECT_TRUE(j["steps"][0]["action"].is_null());
    EXPECT_EQ(j["steps"][0]["raw_output"], "no brackets here");
}

TEST(TrajectoryLog, RejectsMalformedRecords) {
    auto eps = sample_episodes();
    auto j = nlohmann::json::parse(episode_to_json(eps[0], 0).dump());
    auto bad = j;
    bad["termination"] = "Exploded";
    EXPECT_THROW(episode_from_json(bad), ParseError);
    bad = j;
    bad.erase("steps");
    EXPECT_THROW(episode_from_json(bad), ParseError);
    bad = j;
    bad["steps"][0]["action"] = "jump[x]";
    EXPECT_THROW(episode_from_json(bad), ParseError);

    auto path = std::filesystem::temp_directory_path() / "ash_bad.jsonl";
    {
        std::ofstream out(path);
        out << episode_log_line(eps[0], 0) << "\n{not json\n";
    }
    EXPECT_THROW(read_trajectory_log(path), ParseError);
    std::filesystem::remove(path);
    EXPECT_THROW(read_trajectory_log("/nonexistent/x.jsonl"), ParseError);
}
