// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "ash/llm/backend.hpp"

namespace ash::llm {

/// Append-only map from request digest to completion text.
///
/// On disk: one record per line, `<digest>\t<n>:<escaped>`, where `escaped`
/// is the completion with `\` `\n` `\r` `\t` written as two-byte escapes and
/// `n` is the byte length of `escaped`. When a digest repeats, the first
/// record wins.
class TranscriptStore {
public:
    enum class Mode { Record, Replay };

    /// Replay mode; the file must exist. Throws BackendError on a malformed record.
    static TranscriptStore open_for_replay(const std::filesystem::path& path);
    /// Record mode; existing records are loaded and new ones appended.
    static TranscriptStore open_for_record(const std::filesystem::path& path);
    /// Replay store over in-memory records, no file.
    static TranscriptStore from_records(std::map<std::string, std::string> records);

    TranscriptStore(TranscriptStore&& other) noexcept;

    Mode mode() const { return mode_; }
    std::optional<std::string> find(const std::string& digest) const;
    /// No-op when the digest is already present. Throws BackendError in Replay mode.
    void append(const std::string& digest, const std::string& completion);
    std::size_t size() const;

    static std::string encode_record(std::string_view digest, std::string_view completion);
    /// Returns false on a malformed line.
    static bool decode_record(std::string_view line, std::string& digest, std::string& completion);

private:
    TranscriptStore(Mode mode, std::filesystem::path path) : mode_(mode), path_(std::move(path)) {}
    void load();

    Mode mode_;
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> entries_;
};

/// Serves from the store when it can, otherwise asks `inner` and records the answer.
class RecordingBackend : public Backend {
public:
    RecordingBackend(Backend& inner, TranscriptStore& store) : inner_(inner), store_(store) {}
    std::string complete(std::string_view prompt, const CompletionParams& params) override;

private:
    Backend& inner_;
    TranscriptStore& store_;
};

/// Read-only; throws ReplayMiss for unknown requests.
class ReplayBackend : public Backend {
public:
    explicit ReplayBackend(const TranscriptStore& store) : store_(store) {}
    std::string complete(std::string_view prompt, const CompletionParams& params) override;

private:
    const TranscriptStore& store_;
};

}  // namespace ash::llm
