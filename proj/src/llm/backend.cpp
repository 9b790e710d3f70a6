// SPDX-License-Identifier: Apache-2.0
#include "ash/llm/backend.hpp"

#include <charconv>
#include <cmath>

#include "ash/common/digest.hpp"
#include "json.hpp"

namespace ash::llm {

void CompletionParams::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("temperature must be a finite value >= 0");
    }
    if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

namespace {

std::string shortest_decimal(double v) {
    if (v == 0.0) return "0";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

std::string canonical_params(const CompletionParams& params) {
    std::string out = "{\"max_tokens\":" + std::to_string(params.max_tokens);
    out += ",\"model\":" + nlohmann::json(params.model_name).dump();
    out += ",\"stop\":" + nlohmann::json(params.stop_sequences).dump();
    out += ",\"temperature\":" + shortest_decimal(params.temperature) + "}";
    return out;
}

std::string digest(std::string_view prompt, const CompletionParams& params) {
    std::string bytes(prompt);
    bytes.push_back('\0');
    bytes += canonical_params(params);
    return sha256_hex(bytes);
}

ReplayMiss::ReplayMiss(std::string digest, std::string_view prompt)
    : BackendError("no recorded completion for digest " + digest + " (prompt starts: \"" +
                   std::string(prompt.substr(0, 120)) + (prompt.size() > 120 ? "...\")" : "\")")),
      digest_(std::move(digest)) {}

ScriptedBackend::ScriptedBackend(std::vector<std::string> queue) : queue_(queue.begin(), queue.end()) {}

ScriptedBackend::ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

std::string ScriptedBackend::complete(std::string_view prompt, const CompletionParams& params) {
    params.validate();
    std::lock_guard lock(mu_);
    prompts_.emplace_back(prompt);
    if (responder_) return responder_(prompt);
    if (queue_.empty()) throw QueueExhausted();
    auto out = std::move(queue_.front());
    queue_.pop_front();
    return out;
}

std::size_t ScriptedBackend::calls() const {
    std::lock_guard lock(mu_);
    return prompts_.size();
}

std::vector<std::string> ScriptedBackend::prompts() const {
    std::lock_guard lock(mu_);
    return prompts_;
}

}  // namespace ash::llm
