// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>
#include <string>

#include "ash/llm/backend.hpp"

namespace ash::llm {

struct RemoteConfig {
    /// Requests go to base_url + "/completions".
    std::string base_url = "http://127.0.0.1:8000/v1";
    std::string model_name;
    double timeout_seconds = 60.0;
    int max_concurrency = 4;
    /// 0 disables the limiter.
    int requests_per_minute = 0;
    /// Name of the environment variable holding the bearer token.
    std::string api_key_env = "ASH_API_KEY";

    int max_attempts = 5;
    std::chrono::milliseconds backoff_base{1000};
    double backoff_factor = 2.0;
    /// Replaceable so tests can observe the backoff schedule without waiting.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// HTTP completion client. POSTs {model, prompt, temperature, max_tokens,
/// stop} and reads choices[0].text. Timeouts, connection failures, 429 and
/// 5xx are retried with exponential backoff; 401/403 raise AuthError; any
/// other 4xx fails at once.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteConfig config);
    std::string complete(std::string_view prompt, const CompletionParams& params) override;

private:
    struct Slot;
    void acquire_slot();
    void release_slot();
    void wait_for_rate();

    RemoteConfig config_;
    std::string scheme_host_port_;
    std::string path_;

    std::mutex mu_;
    std::condition_variable cv_;
    int in_flight_ = 0;
    std::deque<std::chrono::steady_clock::time_point> recent_;
};

}  // namespace ash::llm
