// SPDX-License-Identifier: Apache-2.0
#include "ash/llm/remote.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace ash::llm {

struct RemoteBackend::Slot {
    explicit Slot(RemoteBackend& b) : backend(b) { backend.acquire_slot(); }
    ~Slot() { backend.release_slot(); }
    RemoteBackend& backend;
};

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)) {
    if (config_.max_concurrency < 1) throw std::invalid_argument("max_concurrency must be >= 1");
    if (config_.max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
    if (!config_.sleep) config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };

    auto url = config_.base_url;
    while (!url.empty() && url.back() == '/') url.pop_back();
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("base_url needs a scheme: " + config_.base_url);
    auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = (path_start == std::string::npos ? std::string() : url.substr(path_start)) + "/completions";
}

void RemoteBackend::acquire_slot() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < config_.max_concurrency; });
    ++in_flight_;
}

void RemoteBackend::release_slot() {
    {
        std::lock_guard lock(mu_);
        --in_flight_;
    }
    cv_.notify_one();
}

void RemoteBackend::wait_for_rate() {
    if (config_.requests_per_minute <= 0) return;
    using clock = std::chrono::steady_clock;
    for (;;) {
        std::chrono::milliseconds wait{0};
        {
            std::lock_guard lock(mu_);
            auto now = clock::now();
            while (!recent_.empty() && now - recent_.front() >= std::chrono::minutes(1)) recent_.pop_front();
            if (static_cast<int>(recent_.size()) < config_.requests_per_minute) {
                recent_.push_back(now);
                return;
            }
            wait = std::chrono::duration_cast<std::chrono::milliseconds>(recent_.front() + std::chrono::minutes(1) - now) +
                   std::chrono::milliseconds(1);
        }
        config_.sleep(wait);
    }
}

std::string RemoteBackend::complete(std::string_view prompt, const CompletionParams& params) {
    params.validate();
    if (prompt.empty()) throw std::invalid_argument("prompt must not be empty");

    nlohmann::json body = {
        {"model", params.model_name.empty() ? config_.model_name : params.model_name},
        {"prompt", std::string(prompt)},
        {"temperature", params.temperature},
        {"max_tokens", params.max_tokens},
        {"stop", params.stop_sequences},
    };
    auto payload = body.dump();

    httplib::Headers headers;
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    Slot slot(*this);
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = config_.backoff_base.count() * std::pow(config_.backoff_factor, attempt - 2);
            config_.sleep(std::chrono::milliseconds(static_cast<long long>(delay)));
        }
        wait_for_rate();

        httplib::Client client(scheme_host_port_);
        auto secs = std::chrono::duration<double>(config_.timeout_seconds);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));
        client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(secs));

        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw AuthError("completion endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw BackendError("completion request failed with HTTP " + std::to_string(res->status) + ": " +
                               res->body.substr(0, 200));
        }
        try {
            auto doc = nlohmann::json::parse(res->body);
            return doc.at("choices").at(0).at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(std::string("malformed completion response: ") + e.what());
        }
    }
    throw BackendUnavailable("completion endpoint unavailable after " + std::to_string(config_.max_attempts) +
                             " attempts (" + last_error + ")");
}

}  // namespace ash::llm
