// SPDX-License-Identifier: Apache-2.0
#include "ash/llm/transcript.hpp"

#include <charconv>
#include <fstream>

namespace ash::llm {

TranscriptStore TranscriptStore::open_for_replay(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw BackendError("transcript not found: " + path.string());
    TranscriptStore store(Mode::Replay, path);
    store.load();
    return store;
}

TranscriptStore TranscriptStore::open_for_record(const std::filesystem::path& path) {
    TranscriptStore store(Mode::Record, path);
    if (std::filesystem::exists(path)) {
        store.load();
    } else if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    return store;
}

TranscriptStore TranscriptStore::from_records(std::map<std::string, std::string> records) {
    TranscriptStore store(Mode::Replay, {});
    store.entries_ = std::move(records);
    return store;
}

TranscriptStore::TranscriptStore(TranscriptStore&& other) noexcept
    : mode_(other.mode_), path_(std::move(other.path_)), entries_(std::move(other.entries_)) {}

void TranscriptStore::load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw BackendError("cannot read transcript " + path_.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string d, c;
        if (!decode_record(line, d, c)) {
            throw BackendError(path_.string() + ":" + std::to_string(lineno) + ": malformed transcript record");
        }
        entries_.emplace(std::move(d), std::move(c));
    }
}

std::optional<std::string> TranscriptStore::find(const std::string& digest) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void TranscriptStore::append(const std::string& digest, const std::string& completion) {
    if (mode_ == Mode::Replay) throw BackendError("transcript opened for replay is read-only");
    std::lock_guard lock(mu_);
    if (!entries_.emplace(digest, completion).second) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw BackendError("cannot append to transcript " + path_.string());
    out << encode_record(digest, completion) << '\n';
    out.flush();
}

std::size_t TranscriptStore::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::string TranscriptStore::encode_record(std::string_view digest, std::string_view completion) {
    std::string escaped;
    escaped.reserve(completion.size());
    for (char c : completion) {
        switch (c) {
            case '\\': escaped += "\\\\"; break;
            case '\n': escaped += "\\n"; break;
            case '\r': escaped += "\\r"; break;
            case '\t': escaped += "\\t"; break;
            default: escaped.push_back(c);
        }
    }
    std::string out(digest);
    out += '\t';
    out += std::to_string(escaped.size());
    out += ':';
    out += escaped;
    return out;
}

bool TranscriptStore::decode_record(std::string_view line, std::string& digest, std::string& completion) {
    if (!line.empty() && line.back() == '\r') return false;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) return false;
    auto colon = line.find(':', tab + 1);
    if (colon == std::string_view::npos) return false;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(line.data() + tab + 1, line.data() + colon, n);
    if (ec != std::errc{} || ptr != line.data() + colon) return false;
    auto escaped = line.substr(colon + 1);
    if (escaped.size() != n) return false;

    std::string out;
    for (std::size_t i = 0; i < escaped.size(); ++i) {
        if (escaped[i] != '\\') {
            out.push_back(escaped[i]);
            continue;
        }
        if (++i >= escaped.size()) return false;
        switch (escaped[i]) {
            case '\\': out.push_back('\\'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 't': out.push_back('\t'); break;
            default: return false;
        }
    }
    digest.assign(line.substr(0, tab));
    completion = std::move(out);
    return true;
}

std::string RecordingBackend::complete(std::string_view prompt, const CompletionParams& params) {
    auto key = digest(prompt, params);
    if (auto hit = store_.find(key)) return *hit;
    auto text = inner_.complete(prompt, params);
    store_.append(key, text);
    // A concurrent writer may have won the race; the stored record is authoritative.
    return *store_.find(key);
}

std::string ReplayBackend::complete(std::string_view prompt, const CompletionParams& params) {
    params.validate();
    auto key = digest(prompt, params);
    if (auto hit = store_.find(key)) return *hit;
    throw ReplayMiss(key, prompt);
}

}  // namespace ash::llm
