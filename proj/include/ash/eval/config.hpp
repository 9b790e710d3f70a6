// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ash/agent/episode.hpp"
#include "ash/llm/backend.hpp"
#include "ash/llm/remote.hpp"
#include "ash/mode.hpp"
#include "json.hpp"

namespace ash::eval {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CatalogSource {
    std::optional<std::filesystem::path> file;
    std::uint64_t seed = 7;
    std::size_t size = 200;
};

struct GoalSource {
    std::optional<std::filesystem::path> file;
    /// Generator seed; falls back to RunConfig::seed.
    std::optional<std::uint64_t> seed;
    std::size_t count = 100;
};

enum class PolicyKind { Llm, Oracle };
/// Scripted runs the built-in heuristic model; Record wraps `record_inner`.
enum class BackendKind { Scripted, Remote, Record, Replay };

struct BackendConfig {
    BackendKind kind = BackendKind::Scripted;
    BackendKind record_inner = BackendKind::Remote;
    llm::RemoteConfig remote;
    std::optional<std::filesystem::path> transcript;
};

struct RunConfig {
    CatalogSource catalog;
    GoalSource goals;
    Mode mode = Mode::Ash;
    agent::Limits limits;
    PolicyKind policy = PolicyKind::Llm;
    BackendConfig backend;
    llm::CompletionParams params;
    std::filesystem::path templates;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> output_dir;
    std::uint64_t seed = 0;
    std::vector<std::size_t> bucket_edges = {5, 8, 11, 14};

    /// Checks ranges and that every referenced input path exists. Throws ConfigError.
    void validate() const;
};

/// Built-in defaults with the template directory set to the shipped set.
RunConfig default_run_config();

/// Overlays the fields present in `j` onto `config`. Throws ConfigError.
void apply_config_json(RunConfig& config, const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

std::string_view to_string(BackendKind k);
std::optional<BackendKind> parse_backend_kind(std::string_view s);
std::optional<PolicyKind> parse_policy_kind(std::string_view s);

}  // namespace ash::eval
