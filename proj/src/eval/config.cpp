// SPDX-License-Identifier: Apache-2.0
#include "ash/eval/config.hpp"

#include <fstream>
#include <sstream>

#include "ash/common/text.hpp"

#ifndef ASH_DEFAULT_TEMPLATE_DIR
#define ASH_DEFAULT_TEMPLATE_DIR "templates/default"
#endif

namespace ash::eval {

std::string_view to_string(BackendKind k) {
    switch (k) {
        case BackendKind::Scripted: return "scripted";
        case BackendKind::Remote: return "remote";
        case BackendKind::Record: return "record";
        case BackendKind::Replay: return "replay";
    }
    return "";
}

std::optional<BackendKind> parse_backend_kind(std::string_view s) {
    for (auto k : {BackendKind::Scripted, BackendKind::Remote, BackendKind::Record, BackendKind::Replay}) {
        if (iequals(s, to_string(k))) return k;
    }
    return std::nullopt;
}

std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
    if (iequals(s, "llm")) return PolicyKind::Llm;
    if (iequals(s, "oracle")) return PolicyKind::Oracle;
    return std::nullopt;
}

RunConfig default_run_config() {
    RunConfig c;
    c.templates = ASH_DEFAULT_TEMPLATE_DIR;
    return c;
}

void RunConfig::validate() const {
    if (workers < 1) throw ConfigError("workers must be >= 1");
    try {
        limits.validate();
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (bucket_edges.empty()) throw ConfigError("bucket_edges must not be empty");
    for (std::size_t i = 0; i < bucket_edges.size(); ++i) {
        if (bucket_edges[i] < 1 || (i && bucket_edges[i] <= bucket_edges[i - 1])) {
            throw ConfigError("bucket_edges must be >= 1 and strictly increasing");
        }
    }
    if (catalog.file && !std::filesystem::exists(*catalog.file)) {
        throw ConfigError("catalog file not found: " + catalog.file->string());
    }
    if (!catalog.file && catalog.size < 1) throw ConfigError("catalog size must be >= 1");
    if (goals.file && !std::filesystem::exists(*goals.file)) {
        throw ConfigError("goal file not found: " + goals.file->string());
    }
    if (!std::filesystem::is_directory(templates)) throw ConfigError("template directory not found: " + templates.string());
    const bool needs_backend = policy == PolicyKind::Llm || uses_summarizer(mode);
    if (needs_backend && (backend.kind == BackendKind::Replay || backend.kind == BackendKind::Record) && !backend.transcript) {
        throw ConfigError("backend '" + std::string(to_string(backend.kind)) + "' needs a transcript path");
    }
    if (needs_backend && backend.kind == BackendKind::Replay && !std::filesystem::exists(*backend.transcript)) {
        throw ConfigError("transcript not found: " + backend.transcript->string());
    }
    if (backend.kind == BackendKind::Record && backend.record_inner != BackendKind::Remote &&
        backend.record_inner != BackendKind::Scripted) {
        throw ConfigError("record backend can only wrap 'remote' or 'scripted'");
    }
}

namespace {

template <typename T>
T get(const nlohmann::json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("config field " + where + "." + key + " has the wrong type");
    }
}

}  // namespace

void apply_config_json(RunConfig& c, const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "$");
    if (j.contains("catalog")) {
        const auto& s = j.at("catalog");
        if (s.contains("path")) c.catalog.file = get<std::string>(s, "path", "catalog");
        if (s.contains("seed")) c.catalog.seed = get<std::uint64_t>(s, "seed", "catalog");
        if (s.contains("size")) c.catalog.size = get<std::size_t>(s, "size", "catalog");
    }
    if (j.contains("goals")) {
        const auto& s = j.at("goals");
        if (s.contains("path")) c.goals.file = get<std::string>(s, "path", "goals");
        if (s.contains("seed")) c.goals.seed = get<std::uint64_t>(s, "seed", "goals");
        if (s.contains("count")) c.goals.count = get<std::size_t>(s, "count", "goals");
    }
    if (j.contains("mode")) {
        auto m = parse_mode(get<std::string>(j, "mode", "$"));
        if (!m) throw ConfigError("unknown mode in config");
        c.mode = *m;
    }
    if (j.contains("policy")) {
        auto p = parse_policy_kind(get<std::string>(j, "policy", "$"));
        if (!p) throw ConfigError("unknown policy in config (llm | oracle)");
        c.policy = *p;
    }
    if (j.contains("limits")) {
        const auto& s = j.at("limits");
        if (s.contains("max_steps")) c.limits.max_steps = get<std::size_t>(s, "max_steps", "limits");
        if (s.contains("max_invalid_streak")) c.limits.max_invalid_streak = get<std::size_t>(s, "max_invalid_streak", "limits");
    }
    if (j.contains("params")) {
        const auto& s = j.at("params");
        if (s.contains("temperature")) c.params.temperature = get<double>(s, "temperature", "params");
        if (s.contains("max_tokens")) c.params.max_tokens = get<int>(s, "max_tokens", "params");
        if (s.contains("stop")) c.params.stop_sequences = get<std::vector<std::string>>(s, "stop", "params");
        if (s.contains("model_name")) c.params.model_name = get<std::string>(s, "model_name", "params");
    }
    if (j.contains("backend")) {
        const auto& s = j.at("backend");
        if (s.contains("kind")) {
            auto k = parse_backend_kind(get<std::string>(s, "kind", "backend"));
            if (!k) throw ConfigError("unknown backend kind in config");
            c.backend.kind = *k;
        }
        if (s.contains("inner")) {
            auto k = parse_backend_kind(get<std::string>(s, "inner", "backend"));
            if (!k) throw ConfigError("unknown backend.inner in config");
            c.backend.record_inner = *k;
        }
        if (s.contains("transcript")) c.backend.transcript = get<std::string>(s, "transcript", "backend");
        auto& r = c.backend.remote;
        if (s.contains("base_url")) r.base_url = get<std::string>(s, "base_url", "backend");
        if (s.contains("model_name")) r.model_name = get<std::string>(s, "model_name", "backend");
        if (s.contains("timeout_seconds")) r.timeout_seconds = get<double>(s, "timeout_seconds", "backend");
        if (s.contains("max_concurrency")) r.max_concurrency = get<int>(s, "max_concurrency", "backend");
        if (s.contains("requests_per_minute")) r.requests_per_minute = get<int>(s, "requests_per_minute", "backend");
        if (s.contains("api_key_env")) r.api_key_env = get<std::string>(s, "api_key_env", "backend");
    }
    if (j.contains("templates")) c.templates = get<std::string>(j, "templates", "$");
    if (j.contains("workers")) c.workers = get<std::size_t>(j, "workers", "$");
    if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", "$");
    if (j.contains("bucket_edges")) c.bucket_edges = get<std::vector<std::size_t>>(j, "bucket_edges", "$");
    if (c.params.model_name.empty()) c.params.model_name = c.backend.remote.model_name;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    auto c = default_run_config();
    apply_config_json(c, j);
    // Relative paths in a config file resolve against the file's directory.
    auto base = path.parent_path();
    auto rebase = [&](std::filesystem::path& p) {
        if (p.is_relative() && !base.empty()) p = base / p;
    };
    if (c.catalog.file) rebase(*c.catalog.file);
    if (c.goals.file) rebase(*c.goals.file);
    if (c.backend.transcript) rebase(*c.backend.transcript);
    if (c.output_dir) rebase(*c.output_dir);
    if (j.contains("templates")) rebase(c.templates);
    return c;
}

}  // namespace ash::eval
