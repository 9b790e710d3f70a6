// SPDX-License-Identifier: Apache-2.0
#include "ash/agent/trajectory_log.hpp"

#include <fstream>

#include "ash/shop/goals.hpp"

namespace ash::agent {

using ojson = nlohmann::ordered_json;

namespace {

ojson opt_string(const std::optional<std::string>& s) { return s ? ojson(*s) : ojson(); }

ojson selection_to_json(const SelectedOptions& sel) {
    ojson o = ojson::object();
    for (const auto& [k, v] : sel) o[k] = v;
    return o;
}

std::optional<std::string> read_opt_string(const nlohmann::json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(path + "." + key, "expected a string or null");
    return it->get<std::string>();
}

template <typename T>
T read(const nlohmann::json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(path + "." + key, "missing field");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(path + "." + key, "wrong type");
    }
}

}  // namespace

ojson episode_to_json(const Episode& ep, std::size_t index) {
    ojson j;
    j["episode"] = index;
    j["goal"] = shop::goal_to_json(ep.goal);
    j["mode"] = std::string(to_string(ep.mode));
    j["termination"] = std::string(to_string(ep.termination));
    j["score"] = ep.score;
    j["step_count"] = ep.step_count;
    if (ep.purchase) {
        j["purchase"] = ojson{{"product_id", ep.purchase->product_id},
                              {"selected_options", selection_to_json(ep.purchase->selected_options)}};
    } else {
        j["purchase"] = nullptr;
    }
    j["error"] = ep.error;
    auto steps = ojson::array();
    for (const auto& s : ep.steps) {
        ojson r;
        r["index"] = s.index;
        r["raw_observation"] = s.raw_observation;
        r["summarized_observation"] = opt_string(s.summarized_observation);
        r["action"] = s.action ? ojson(canonicalize(*s.action)) : ojson();
        r["raw_output"] = s.raw_output;
        r["valid"] = s.valid;
        r["summarizer_prompt_digest"] = opt_string(s.summarizer_prompt_digest);
        r["actor_prompt_digest"] = opt_string(s.actor_prompt_digest);
        steps.push_back(std::move(r));
    }
    j["steps"] = std::move(steps);
    return j;
}

Episode episode_from_json(const nlohmann::json& j) {
    const std::string path = "episode";
    if (!j.is_object()) throw ParseError(path, "expected an object");
    Episode ep;
    if (!j.contains("goal")) throw ParseError(path + ".goal", "missing field");
    ep.goal = shop::goal_from_json(j["goal"]);
    auto mode = parse_mode(read<std::string>(j, "mode", path));
    if (!mode) throw ParseError(path + ".mode", "unknown mode");
    ep.mode = *mode;
    auto term = termination_from_string(read<std::string>(j, "termination", path));
    if (!term) throw ParseError(path + ".termination", "unknown termination");
    ep.termination = *term;
    ep.score = read<double>(j, "score", path);
    ep.step_count = read<std::size_t>(j, "step_count", path);
    if (auto it = j.find("purchase"); it != j.end() && !it->is_null()) {
        Purchase p;
        p.product_id = read<std::string>(*it, "product_id", path + ".purchase");
        p.selected_options = read<SelectedOptions>(*it, "selected_options", path + ".purchase");
        ep.purchase = std::move(p);
    }
    if (j.contains("error")) ep.error = read<std::string>(j, "error", path);
    if (!j.contains("steps") || !j["steps"].is_array()) throw ParseError(path + ".steps", "expected an array");
    const auto& steps = j["steps"];
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& r = steps[i];
        auto spath = path + ".steps[" + std::to_string(i) + "]";
        StepRecord s;
        s.index = read<std::size_t>(r, "index", spath);
        s.raw_observation = read<std::string>(r, "raw_observation", spath);
        s.summarized_observation = read_opt_string(r, "summarized_observation", spath);
        if (auto a = read_opt_string(r, "action", spath)) {
            try {
                s.action = parse_action(*a);
            } catch (const ActionSyntaxError& e) {
                throw ParseError(spath + ".action", e.what());
            }
        }
        s.raw_output = read<std::string>(r, "raw_output", spath);
        s.valid = read<bool>(r, "valid", spath);
        s.summarizer_prompt_digest = read_opt_string(r, "summarizer_prompt_digest", spath);
        s.actor_prompt_digest = read_opt_string(r, "actor_prompt_digest", spath);
        ep.steps.push_back(std::move(s));
    }
    return ep;
}

std::string episode_log_line(const Episode& ep, std::size_t index) { return episode_to_json(ep, index).dump(); }

void write_trajectory_log(const std::filesystem::path& path, const std::vector<Episode>& episodes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write trajectory log " + path.string());
    for (std::size_t i = 0; i < episodes.size(); ++i) out << episode_log_line(episodes[i], i) << '\n';
    if (!out) throw std::runtime_error("failed writing trajectory log " + path.string());
}

std::vector<Episode> read_trajectory_log(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open trajectory log");
    std::vector<Episode> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(episode_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno), e.what());
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno), e.what());
        }
    }
    return out;
}

}  // namespace ash::agent
