// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ash::llm {

/// Decoding parameters. Defaults are greedy decoding with a 500-token cap.
struct CompletionParams {
    double temperature = 0.0;
    int max_tokens = 500;
    std::vector<std::string> stop_sequences;
    std::string model_name;

    /// Throws std::invalid_argument on temperature < 0 or max_tokens < 1.
    void validate() const;
};

/// Fixed-field-order rendering with shortest round-trip decimals, e.g.
/// {"max_tokens":500,"model":"m","stop":[],"temperature":0}.
std::string canonical_params(const CompletionParams& params);

/// SHA-256 over the prompt bytes, a NUL separator, and canonical_params.
std::string digest(std::string_view prompt, const CompletionParams& params);

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Retries exhausted on transient failures.
class BackendUnavailable : public BackendError {
public:
    using BackendError::BackendError;
};

class AuthError : public BackendError {
public:
    using BackendError::BackendError;
};

class ReplayMiss : public BackendError {
public:
    ReplayMiss(std::string digest, std::string_view prompt);
    const std::string& digest() const { return digest_; }

private:
    std::string digest_;
};

class QueueExhausted : public BackendError {
public:
    QueueExhausted() : BackendError("scripted backend has no queued responses left") {}
};

/// Text-completion interface shared by every backend. Implementations are
/// safe to call from several episodes at once.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(std::string_view prompt, const CompletionParams& params) = 0;
};

/// In-memory stub: either a queue of canned responses or a response function.
class ScriptedBackend : public Backend {
public:
    using Responder = std::function<std::string(std::string_view prompt)>;

    explicit ScriptedBackend(std::vector<std::string> queue);
    explicit ScriptedBackend(Responder responder);

    std::string complete(std::string_view prompt, const CompletionParams& params) override;

    std::size_t calls() const;
    std::vector<std::string> prompts() const;

private:
    mutable std::mutex mu_;
    std::deque<std::string> queue_;
    Responder responder_;
    std::vector<std::string> prompts_;
};

}  // namespace ash::llm
