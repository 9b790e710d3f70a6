// SPDX-License-Identifier: Apache-2.0
#include "ash/cli/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ash/agent/orchestrator.hpp"
#include "ash/agent/trajectory_log.hpp"
#include "ash/common/text.hpp"
#include "ash/eval/batch.hpp"
#include "ash/eval/config.hpp"
#include "ash/eval/report.hpp"
#include "ash/llm/backend.hpp"
#include "ash/prompt/prompting.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/goals.hpp"

namespace ash::cli {

namespace {

// Flags shared by run / eval / replay. Unset flags leave the config file value alone.
struct RunFlags {
    std::string config;
    std::optional<std::string> mode, policy, backend, inner, transcript, replay, record;
    std::optional<std::string> catalog, goals, templates, out_dir, base_url, model, buckets;
    std::optional<std::uint64_t> catalog_seed, goal_seed, seed;
    std::optional<std::size_t> catalog_size, goal_count, workers, max_steps, max_invalid;
    std::optional<int> max_tokens;
    std::optional<double> temperature;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
    app->add_option("--config", f.config, "JSON run config; flags override its fields");
    app->add_option("--mode", f.mode, "act | react | ash | act_ash");
    app->add_option("--policy", f.policy, "llm | oracle");
    app->add_option("--backend", f.backend, "scripted | remote | record | replay");
    app->add_option("--record-inner", f.inner, "backend wrapped by record: remote | scripted");
    app->add_option("--transcript", f.transcript, "transcript file for record / replay");
    app->add_option("--replay", f.replay, "shorthand for --backend replay --transcript FILE");
    app->add_option("--record", f.record, "shorthand for --backend record --transcript FILE");
    app->add_option("--catalog", f.catalog, "catalog JSON file");
    app->add_option("--catalog-seed", f.catalog_seed, "generator seed when no catalog file is given");
    app->add_option("--catalog-size", f.catalog_size, "generated catalog size");
    app->add_option("--goals", f.goals, "goal set JSON file");
    app->add_option("--goal-seed", f.goal_seed, "goal generator seed (defaults to --seed)");
    app->add_option("--goal-count", f.goal_count, "generated goal count");
    app->add_option("--templates", f.templates, "prompt template directory");
    app->add_option("--base-url", f.base_url, "completion endpoint base URL");
    app->add_option("--model", f.model, "model name");
    app->add_option("--temperature", f.temperature, "sampling temperature");
    app->add_option("--max-tokens", f.max_tokens, "completion token cap");
    app->add_option("--max-steps", f.max_steps, "episode step cap");
    app->add_option("--max-invalid-streak", f.max_invalid, "consecutive invalid actions before termination");
    app->add_option("--seed", f.seed, "run seed");
    app->add_option("--buckets", f.buckets, "length bucket edges, e.g. 5,8,11,14");
}

eval::BackendKind backend_kind(const std::string& s) {
    auto k = eval::parse_backend_kind(s);
    if (!k) throw eval::ConfigError("unknown backend '" + s + "'");
    return *k;
}

eval::RunConfig resolve(const RunFlags& f) {
    auto c = f.config.empty() ? eval::default_run_config() : eval::load_run_config(f.config);
    if (f.mode) {
        auto m = parse_mode(*f.mode);
        if (!m) throw eval::ConfigError("unknown mode '" + *f.mode + "'");
        c.mode = *m;
    }
    if (f.policy) {
        auto p = eval::parse_policy_kind(*f.policy);
        if (!p) throw eval::ConfigError("unknown policy '" + *f.policy + "'");
        c.policy = *p;
    }
    if (f.backend) c.backend.kind = backend_kind(*f.backend);
    if (f.inner) c.backend.record_inner = backend_kind(*f.inner);
    if (f.transcript) c.backend.transcript = *f.transcript;
    if (f.replay) {
        c.backend.kind = eval::BackendKind::Replay;
        c.backend.transcript = *f.replay;
    }
    if (f.record) {
        c.backend.kind = eval::BackendKind::Record;
        c.backend.transcript = *f.record;
    }
    if (f.catalog) c.catalog.file = *f.catalog;
    if (f.catalog_seed) c.catalog.seed = *f.catalog_seed;
    if (f.catalog_size) c.catalog.size = *f.catalog_size;
    if (f.goals) c.goals.file = *f.goals;
    if (f.goal_seed) c.goals.seed = *f.goal_seed;
    if (f.goal_count) c.goals.count = *f.goal_count;
    if (f.templates) c.templates = *f.templates;
    if (f.out_dir) c.output_dir = *f.out_dir;
    if (f.base_url) c.backend.remote.base_url = *f.base_url;
    if (f.model) {
        c.backend.remote.model_name = *f.model;
        c.params.model_name = *f.model;
    }
    if (f.temperature) c.params.temperature = *f.temperature;
    if (f.max_tokens) c.params.max_tokens = *f.max_tokens;
    if (f.max_steps) c.limits.max_steps = *f.max_steps;
    if (f.max_invalid) c.limits.max_invalid_streak = *f.max_invalid;
    if (f.seed) c.seed = *f.seed;
    if (f.workers) c.workers = *f.workers;
    if (f.buckets) {
        try {
            c.bucket_edges = eval::parse_bucket_edges(*f.buckets);
        } catch (const std::invalid_argument& e) {
            throw eval::ConfigError(e.what());
        }
    }
    return c;
}

void write_text(const std::optional<std::string>& path, const std::string& text, std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + *path);
    f << text;
    if (!f.flush()) throw std::runtime_error("write failed: " + *path);
}

void print_report(const eval::AggregateReport& report, std::ostream& out) {
    out << eval::report_to_json(report).dump(2) << "\n";
}

std::string action_text(const agent::StepRecord& s) {
    return s.action ? canonicalize(*s.action) : "(unparseable) " + s.raw_output;
}

void print_step(const agent::StepRecord& s, std::ostream& out) {
    out << "=== step " << s.index << " ===\n";
    out << "Observation:\n" << s.raw_observation << "\n";
    if (s.summarized_observation) out << "Summary:\n" << *s.summarized_observation << "\n";
    out << "Action: " << action_text(s) << (s.valid ? "" : "  [invalid]") << "\n";
    out.flush();
}

// Breaks a block into lines no wider than `width`, hard-wrapping long ones.
std::vector<std::string> wrap(std::string_view text, std::size_t width) {
    std::vector<std::string> lines;
    for (const auto& line : split_lines(text)) {
        if (line.empty()) {
            lines.emplace_back();
            continue;
        }
        for (std::size_t i = 0; i < line.size(); i += width) lines.push_back(line.substr(i, width));
    }
    return lines;
}

void print_side_by_side(const agent::Episode& ep, std::size_t index, std::size_t width, std::ostream& out) {
    out << "Episode " << index << "  goal " << ep.goal.id << "  mode " << to_string(ep.mode) << "\n";
    out << "Instruction: " << ep.goal.instruction_text << "\n";
    out << "Termination: " << agent::to_string(ep.termination) << "  score " << ep.score << "  steps "
        << ep.step_count << "\n";
    if (!ep.error.empty()) out << "Error: " << ep.error << "\n";
    const std::string rule(width * 2 + 3, '-');
    for (const auto& s : ep.steps) {
        out << "\n" << rule << "\n";
        out << "Step " << s.index << "  " << action_text(s) << (s.valid ? "" : "  [invalid]") << "\n";
        out << rule << "\n";
        out << std::left << std::setw(static_cast<int>(width)) << "RAW" << " | SUMMARIZED\n";
        auto left = wrap(s.raw_observation, width);
        auto right = s.summarized_observation ? wrap(*s.summarized_observation, width)
                                              : std::vector<std::string>{"(not summarized)"};
        for (std::size_t i = 0; i < std::max(left.size(), right.size()); ++i) {
            const std::string& l = i < left.size() ? left[i] : std::string();
            const std::string& r = i < right.size() ? right[i] : std::string();
            std::string row = l + std::string(width - l.size(), ' ') + " | " + r;
            while (!row.empty() && row.back() == ' ') row.pop_back();
            out << row << "\n";
        }
    }
}

int cmd_run(const eval::RunConfig& c, std::size_t goal_index, const std::optional<std::string>& goal_id,
            const std::optional<std::string>& log, std::ostream& out) {
    c.validate();
    auto inputs = eval::load_inputs(c);
    const GoalSpec* goal = nullptr;
    if (goal_id) {
        for (const auto& g : inputs.goals) {
            if (g.id == *goal_id) goal = &g;
        }
        if (!goal) throw eval::ConfigError("no goal with id " + *goal_id);
    } else {
        if (goal_index >= inputs.goals.size()) {
            throw eval::ConfigError("goal index " + std::to_string(goal_index) + " out of range (" +
                                    std::to_string(inputs.goals.size()) + " goals)");
        }
        goal = &inputs.goals[goal_index];
    }

    const bool needs_backend = c.policy == eval::PolicyKind::Llm || uses_summarizer(c.mode);
    std::optional<prompt::TemplateSet> templates;
    std::optional<eval::BackendStack> stack;
    if (needs_backend) {
        templates.emplace(prompt::TemplateSet::load(c.templates));
        stack.emplace(c.backend);
    }
    agent::SummarizerConfig summarizer;
    if (uses_summarizer(c.mode)) summarizer = {&templates->summarizer, &stack->backend(), c.params};
    std::unique_ptr<agent::Policy> policy;
    if (c.policy == eval::PolicyKind::Oracle) {
        policy = std::make_unique<agent::OraclePolicy>(inputs.catalog);
    } else {
        policy = std::make_unique<agent::LlmPolicy>(*templates, stack->backend(), c.params, c.mode);
    }

    out << "Goal " << goal->id << ": " << goal->instruction_text << "\n";
    auto ep = agent::run_episode(inputs.catalog, *goal, c.mode, *policy, c.limits,
                                 uses_summarizer(c.mode) ? &summarizer : nullptr,
                                 [&](const agent::StepRecord& s) { print_step(s, out); });
    out << "=== " << agent::to_string(ep.termination) << " after " << ep.step_count << " steps, score " << ep.score
        << " ===\n";
    if (!ep.error.empty()) out << "Error: " << ep.error << "\n";
    if (log) agent::write_trajectory_log(*log, {ep});
    return kExitOk;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw eval::ConfigError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ash: summarizer/actor web-shop agent and evaluation harness", "ash"};
    app.require_subcommand(1);

    auto* gen_catalog = app.add_subcommand("gen-catalog", "Generate a product catalog");
    std::uint64_t gc_seed = 7;
    std::size_t gc_size = 200;
    std::optional<std::string> gc_out;
    gen_catalog->add_option("--seed", gc_seed, "generator seed");
    gen_catalog->add_option("--size", gc_size, "number of products")->check(CLI::PositiveNumber);
    gen_catalog->add_option("--out", gc_out, "output file (stdout if omitted)");

    auto* gen_goals = app.add_subcommand("gen-goals", "Generate a goal set for a catalog");
    std::optional<std::string> gg_catalog, gg_out;
    std::uint64_t gg_catalog_seed = 7, gg_seed = 0;
    std::size_t gg_catalog_size = 200, gg_count = 100;
    gen_goals->add_option("--catalog", gg_catalog, "catalog JSON file");
    gen_goals->add_option("--catalog-seed", gg_catalog_seed, "generator seed when no catalog file is given");
    gen_goals->add_option("--catalog-size", gg_catalog_size, "generated catalog size");
    gen_goals->add_option("--seed", gg_seed, "goal generator seed");
    gen_goals->add_option("--count", gg_count, "number of goals")->check(CLI::PositiveNumber);
    gen_goals->add_option("--out", gg_out, "output file (stdout if omitted)");

    auto* run = app.add_subcommand("run", "Run one episode with a live step trace");
    RunFlags run_flags;
    std::size_t run_goal_index = 0;
    std::optional<std::string> run_goal_id, run_log;
    add_run_flags(run, run_flags);
    run->add_option("--goal-index", run_goal_index, "0-based index into the goal set");
    run->add_option("--goal-id", run_goal_id, "goal id (overrides --goal-index)");
    run->add_option("--log", run_log, "write the episode as a one-line trajectory log");

    auto* evalc = app.add_subcommand("eval", "Run a batch and write the report");
    RunFlags eval_flags;
    add_run_flags(evalc, eval_flags);
    evalc->add_option("--out", eval_flags.out_dir, "output directory");
    evalc->add_option("--workers", eval_flags.workers, "parallel episodes");

    auto* replay = app.add_subcommand("replay", "Re-run a batch from a recorded transcript");
    RunFlags replay_flags;
    std::optional<std::string> replay_check;
    add_run_flags(replay, replay_flags);
    replay->add_option("--out", replay_flags.out_dir, "output directory");
    replay->add_option("--workers", replay_flags.workers, "parallel episodes");
    replay->add_option("--check", replay_check, "trajectory log the re-run must reproduce byte for byte");

    auto* inspect = app.add_subcommand("inspect", "Show an episode with raw and summarized observations side by side");
    std::string in_log;
    std::size_t in_episode = 0, in_width = 60;
    inspect->add_option("log", in_log, "trajectory log (JSONL)")->required();
    inspect->add_option("--episode", in_episode, "0-based episode index");
    inspect->add_option("--width", in_width, "column width")->check(CLI::Range(10, 400));

    auto* report = app.add_subcommand("report", "Re-aggregate trajectory logs");
    std::vector<std::string> rp_logs;
    std::string rp_buckets = "5,8,11,14";
    std::optional<std::string> rp_out;
    report->add_option("logs", rp_logs, "trajectory logs (JSONL)")->required();
    report->add_option("--buckets", rp_buckets, "length bucket edges");
    report->add_option("--out", rp_out, "directory for report.json / episodes.csv / buckets.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfig;
    }

    try {
        if (*gen_catalog) {
            write_text(gc_out, shop::serialize_catalog(shop::generate_catalog(gc_seed, gc_size)), out);
        } else if (*gen_goals) {
            auto catalog = gg_catalog ? shop::load_catalog(*gg_catalog)
                                      : shop::generate_catalog(gg_catalog_seed, gg_catalog_size);
            write_text(gg_out, shop::serialize_goals(shop::generate_goals(catalog, gg_seed, gg_count)), out);
        } else if (*run) {
            return cmd_run(resolve(run_flags), run_goal_index, run_goal_id, run_log, out);
        } else if (*evalc) {
            print_report(eval::run_batch(resolve(eval_flags)).report, out);
        } else if (*replay) {
            auto c = resolve(replay_flags);
            if (c.backend.kind != eval::BackendKind::Replay) {
                if (!c.backend.transcript) throw eval::ConfigError("replay needs --transcript or --replay");
                c.backend.kind = eval::BackendKind::Replay;
            }
            auto result = eval::run_batch(c);
            print_report(result.report, out);
            if (replay_check) {
                std::string expected = read_file(*replay_check);
                std::string actual;
                for (std::size_t i = 0; i < result.episodes.size(); ++i) {
                    actual += agent::episode_log_line(result.episodes[i], i) + "\n";
                }
                if (expected != actual) {
                    err << "replay diverged from " << *replay_check << "\n";
                    return kExitRuntime;
                }
                err << "replay matches " << *replay_check << "\n";
            }
        } else if (*inspect) {
            auto episodes = agent::read_trajectory_log(in_log);
            if (in_episode >= episodes.size()) {
                err << "error: episode " << in_episode << " out of range (" << episodes.size() << " episodes)\n";
                return kExitConfig;
            }
            print_side_by_side(episodes[in_episode], in_episode, in_width, out);
        } else if (*report) {
            eval::AggregateOptions opts;
            try {
                opts.bucket_edges = eval::parse_bucket_edges(rp_buckets);
            } catch (const std::invalid_argument& e) {
                throw eval::ConfigError(e.what());
            }
            std::vector<agent::Episode> episodes;
            for (const auto& p : rp_logs) {
                if (!std::filesystem::exists(p)) throw eval::ConfigError("log not found: " + p);
                auto part = agent::read_trajectory_log(p);
                episodes.insert(episodes.end(), part.begin(), part.end());
            }
            auto r = eval::aggregate(episodes, opts);
            if (rp_out) {
                std::filesystem::create_directories(*rp_out);
                eval::write_report(r, episodes, *rp_out);
            }
            print_report(r, out);
        }
    } catch (const eval::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const prompt::TemplateError& e) {
        err << "template error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace ash::cli
