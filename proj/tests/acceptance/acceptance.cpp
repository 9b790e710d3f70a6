// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ash/action.hpp"
#include "ash/agent/orchestrator.hpp"
#include "ash/agent/trajectory_log.hpp"
#include "ash/common/text.hpp"
#include "ash/eval/batch.hpp"
#include "ash/llm/heuristic_model.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/env.hpp"
#include "ash/shop/goals.hpp"
#include "oracles.hpp"

using namespace ash;
using agent::Termination;

namespace {

// Pinned thresholds.
constexpr double kOracleBudgetSeconds = 10.0;
constexpr std::size_t kScorePairs = 1000;
constexpr std::size_t kRoundTrips = 10000;
constexpr double kMinFinalReduction = 0.40;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

prompt::TemplateSet templates() { return prompt::TemplateSet::load(ash::testing::template_dir()); }

llm::ScriptedBackend heuristic() { return llm::ScriptedBackend(llm::ScriptedBackend::Responder(llm::heuristic_response)); }

// Replays fixed outputs, repeating the last one.
class ScriptPolicy : public agent::Policy {
public:
    explicit ScriptPolicy(std::vector<std::string> outputs) : outputs_(std::move(outputs)) {}
    agent::Decision decide(const GoalSpec&, std::span<const prompt::HistoryEntry>, const Observation&) override {
        return {outputs_[std::min(calls_++, outputs_.size() - 1)], std::nullopt};
    }

private:
    std::vector<std::string> outputs_;
    std::size_t calls_ = 0;
};

Outcome oracle_end_to_end() {
    auto c = eval::default_run_config();
    c.templates = ash::testing::template_dir();
    c.catalog = {std::nullopt, 7, 200};
    c.goals.count = 100;
    c.policy = eval::PolicyKind::Oracle;
    c.mode = Mode::Act;
    auto t0 = std::chrono::steady_clock::now();
    auto inputs = eval::load_inputs(c);
    auto r = eval::run_batch(c);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t solvable = 0;
    for (const auto& g : inputs.goals) solvable += g.solvable;
    bool ok = solvable == 100 && r.report.episode_count == 100 && r.report.success_rate_pct == 100.0 &&
              r.report.avg_score == 100.0 && secs < kOracleBudgetSeconds;
    return {ok, "solvable=" + std::to_string(solvable) + " success_rate_pct=" + fmt(r.report.success_rate_pct) +
                    " avg_score=" + fmt(r.report.avg_score) + " time=" + fmt(secs) + "s"};
}

Outcome score_equivalence() {
    std::mt19937_64 rng(2024);
    std::size_t checked = 0, mismatches = 0;
    for (std::uint64_t cs = 0; checked < kScorePairs; ++cs) {
        auto catalog = shop::generate_catalog(cs + 1, 60);
        auto goals = shop::generate_goals(catalog, cs + 100, 50);
        for (const auto& g : goals) {
            const auto& p = catalog.products[rng() % catalog.products.size()];
            auto selections = ash::testing::all_selections(p);
            const auto& sel = selections[rng() % selections.size()];
            double got = shop::score(Purchase{p.id, sel}, g, catalog);
            double want = ash::testing::brute_force_score(p, sel, g);
            mismatches += got != want;
            ++checked;
        }
    }
    return {mismatches == 0 && checked >= kScorePairs,
            std::to_string(checked) + " pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome termination() {
    auto catalog = shop::generate_catalog(7, 200);
    auto goal = shop::generate_goals(catalog, 0, 1).at(0);
    ScriptPolicy invalid({"click[No Such Button]"});
    auto a = agent::run_episode(catalog, goal, Mode::ReAct, invalid, agent::Limits{});
    ScriptPolicy think({"think[still deciding]"});
    auto b = agent::run_episode(catalog, goal, Mode::ReAct, think, agent::Limits{});
    bool ok = a.termination == Termination::InvalidStreak && a.step_count == 5 &&
              b.termination == Termination::StepLimit && b.step_count == 20;
    return {ok, "always-invalid: " + std::string(agent::to_string(a.termination)) + " at " +
                    std::to_string(a.step_count) + "; think-only: " + std::string(agent::to_string(b.termination)) +
                    " at " + std::to_string(b.step_count)};
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

struct ContextFixture {
    Catalog catalog = shop::load_catalog(ash::testing::fixture("context/catalog.json"));
    GoalSpec goal = shop::load_goals(ash::testing::fixture("context/goal.json")).at(0);
    std::vector<std::string> actions = read_lines(ash::testing::fixture("context/actions.txt"));
};

Outcome statelessness() {
    ContextFixture fx;
    auto ts = templates();
    const agent::Limits limits{10, 5};

    auto run = [&](const std::vector<std::string>& script) {
        auto summarizer = heuristic();
        agent::SummarizerConfig sc{&ts.summarizer, &summarizer, {}};
        ScriptPolicy policy(script);
        auto ep = agent::run_episode(fx.catalog, fx.goal, Mode::Ash, policy, agent::Limits{script.size(), 5}, &sc);
        return std::make_pair(ep, summarizer.prompts());
    };

    std::vector<std::string> base(fx.actions.begin(), fx.actions.begin() + limits.max_steps);
    auto [ep, prompts] = run(base);

    // Identical (prev_action, page) triples must give identical prompt digests.
    std::map<std::pair<std::string, std::string>, std::string> seen;
    std::size_t repeats = 0, conflicts = 0, summarized = 0;
    std::optional<Action> prev;
    for (const auto& s : ep.steps) {
        if (s.summarizer_prompt_digest) {
            ++summarized;
            auto key = std::make_pair(prev ? canonicalize(*prev) : "", s.raw_observation);
            auto [it, fresh] = seen.emplace(key, *s.summarizer_prompt_digest);
            if (!fresh) {
                ++repeats;
                conflicts += it->second != *s.summarizer_prompt_digest;
            }
        }
        prev = s.action;
    }

    // The same walk with think steps interleaved carries a longer history;
    // the summarizer must see exactly the same prompts.
    std::vector<std::string> padded;
    for (const auto& a : base) {
        padded.push_back("think[considering the options so far on this page]");
        padded.push_back(a);
    }
    auto [ep2, prompts2] = run(padded);

    bool ok = ep.step_count == limits.max_steps && repeats > 0 && conflicts == 0 && prompts == prompts2 &&
              ep2.step_count == padded.size();
    return {ok, std::to_string(ep.step_count) + " steps, " + std::to_string(summarized) + " summarized, " +
                    std::to_string(repeats) + " repeated triples, " + std::to_string(conflicts) +
                    " conflicts, padded-history prompts " + (prompts == prompts2 ? "identical" : "differ")};
}

Outcome context_reduction() {
    ContextFixture fx;
    auto ts = templates();
    const agent::Limits limits{fx.actions.size(), 5};

    auto actor_prompts = [&](Mode mode) {
        llm::ScriptedBackend actor(fx.actions);
        auto summarizer = heuristic();
        agent::SummarizerConfig sc{&ts.summarizer, &summarizer, {}};
        agent::LlmPolicy policy(ts, actor, {}, mode);
        auto ep = agent::run_episode(fx.catalog, fx.goal, mode, policy, limits, &sc);
        for (const auto& s : ep.steps) {
            if (!s.valid) throw std::runtime_error("fixture step " + std::to_string(s.index) + " invalid");
        }
        return actor.prompts();
    };

    auto react = actor_prompts(Mode::ReAct);
    auto ash_prompts = actor_prompts(Mode::Ash);
    if (react.size() != fx.actions.size() || ash_prompts.size() != fx.actions.size()) {
        return {false, "fixture did not run to completion"};
    }
    bool every_step = true;
    std::string series;
    for (std::size_t i = 0; i < react.size(); ++i) {
        auto r = count_whitespace_tokens(react[i]);
        auto a = count_whitespace_tokens(ash_prompts[i]);
        // Steps are numbered from 1; the first sees a single observation.
        if (i + 1 >= 2 && a >= r) every_step = false;
        series += (i ? " " : "") + std::to_string(a) + "/" + std::to_string(r);
    }
    double rf = static_cast<double>(count_whitespace_tokens(react.back()));
    double af = static_cast<double>(count_whitespace_tokens(ash_prompts.back()));
    double reduction = 1.0 - af / rf;
    bool ok = every_step && reduction >= kMinFinalReduction;
    return {ok, "final reduction " + fmt(reduction * 100) + "% (ash/react tokens per step: " + series + ")"};
}

Outcome determinism() {
    auto dir = std::filesystem::temp_directory_path() / "ash_acceptance_replay";
    std::filesystem::remove_all(dir);
    auto c = eval::default_run_config();
    c.templates = ash::testing::template_dir();
    c.mode = Mode::Ash;
    c.backend.kind = eval::BackendKind::Record;
    c.backend.record_inner = eval::BackendKind::Scripted;
    c.backend.transcript = dir / "transcript.jsonl";
    c.output_dir = dir / "record";
    eval::run_batch(c);

    c.backend.kind = eval::BackendKind::Replay;
    std::vector<std::pair<std::string, std::size_t>> runs = {{"a", 1}, {"b", 1}, {"c", 4}};
    for (const auto& [name, workers] : runs) {
        c.workers = workers;
        c.output_dir = dir / name;
        eval::run_batch(c);
    }
    std::size_t compared = 0, differing = 0;
    for (const char* f : {eval::kTrajectoryFile, eval::kReportFile, eval::kEpisodesFile, eval::kBucketsFile}) {
        auto ref = slurp(dir / "a" / f);
        for (const char* other : {"b", "c", "record"}) {
            ++compared;
            differing += slurp(dir / other / f) != ref;
        }
    }
    std::filesystem::remove_all(dir);
    return {differing == 0, std::to_string(compared) + " file comparisons, " + std::to_string(differing) + " differ"};
}

Action random_action(std::mt19937_64& rng) {
    static const std::string alphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 ,.<>-+&'\"/()$%:;!?";
    std::size_t len = 1 + rng() % 40;
    std::string payload;
    for (std::size_t i = 0; i < len; ++i) payload.push_back(alphabet[rng() % alphabet.size()]);
    payload = std::string(trim(payload));
    if (payload.empty()) payload = "x";
    switch (rng() % 3) {
        case 0: return Search{payload};
        case 1: return Click{payload};
        default: return Think{payload};
    }
}

Outcome grammar_round_trip() {
    std::mt19937_64 rng(99);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < kRoundTrips; ++i) {
        auto a = random_action(rng);
        try {
            failures += parse_action(canonicalize(a)) != a;
        } catch (const ActionSyntaxError&) {
            ++failures;
        }
    }
    return {failures == 0, std::to_string(kRoundTrips) + " actions, " + std::to_string(failures) + " failures"};
}

Outcome metric_fixture() {
    auto eps = agent::read_trajectory_log(ash::testing::fixture("aggregate_episodes.jsonl"));
    auto got = eval::aggregate(eps);
    std::ifstream in(ash::testing::fixture("expected_report.json"));
    auto want = eval::report_from_json(nlohmann::json::parse(in));
    return {got == want, got == want ? "report matches" : "got " + eval::report_to_json(got).dump()};
}

Outcome mode_ablation() {
    auto ts = templates();
    auto catalog = shop::generate_catalog(7, 200);
    auto goals = shop::generate_goals(catalog, 0, 20);
    std::set<std::vector<std::string>> exemplar_sets;
    std::string detail;
    bool ok = true;
    for (auto mode : {Mode::Act, Mode::ReAct, Mode::Ash, Mode::ActAsh}) {
        exemplar_sets.insert(ts.actor_for(mode).exemplars);
        auto actor = heuristic();
        auto summarizer = heuristic();
        agent::SummarizerConfig sc{&ts.summarizer, &summarizer, {}};
        std::size_t purchased = 0, errors = 0;
        for (const auto& g : goals) {
            agent::LlmPolicy policy(ts, actor, {}, mode);
            auto ep = agent::run_episode(catalog, g, mode, policy, agent::Limits{}, &sc);
            purchased += ep.termination == Termination::Purchased;
            errors += ep.termination == Termination::PolicyError;
        }
        std::size_t think_prompts = 0;
        for (const auto& p : actor.prompts()) think_prompts += p.find("think[") != std::string::npos;
        bool mode_ok = errors == 0 && purchased > 0 && (allows_think(mode) || think_prompts == 0) &&
                       (uses_summarizer(mode) == (summarizer.calls() > 0));
        ok = ok && mode_ok;
        detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(mode)) + " purchased " +
                  std::to_string(purchased) + "/" + std::to_string(goals.size()) + ", prompts with think[ " +
                  std::to_string(think_prompts);
    }
    ok = ok && exemplar_sets.size() == 4;
    return {ok, detail + "; distinct exemplar sets " + std::to_string(exemplar_sets.size())};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"oracle end-to-end", oracle_end_to_end},
        {"score oracle equivalence", score_equivalence},
        {"termination fixtures", termination},
        {"summarizer statelessness", statelessness},
        {"context reduction", context_reduction},
        {"replay determinism", determinism},
        {"grammar round-trip", grammar_round_trip},
        {"metric fixture", metric_fixture},
        {"mode ablation plumbing", mode_ablation},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
