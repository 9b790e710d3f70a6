// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ash/agent/episode.hpp"
#include "json.hpp"

namespace ash::eval {

inline const std::vector<std::size_t> kDefaultBucketEdges = {5, 8, 11, 14};

struct LengthBucket {
    std::string range;  // "1-5", ..., "15+"
    std::size_t count = 0;
    /// Mean score x100 over the bucket; absent when the bucket is empty.
    std::optional<double> avg_score;

    friend bool operator==(const LengthBucket&, const LengthBucket&) = default;
};

struct AggregateReport {
    std::size_t episode_count = 0;
    double avg_score = 0.0;          // 100 x mean score
    double success_rate_pct = 0.0;   // episodes scoring exactly 1.0
    double avg_steps = 0.0;
    std::vector<LengthBucket> length_buckets;
    std::size_t failed_count = 0;
    /// Share of failed episodes that ended repeating invalid actions; 0 when nothing failed.
    double invalid_failure_pct = 0.0;

    friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

class EmptyInput : public std::invalid_argument {
public:
    EmptyInput() : std::invalid_argument("aggregate: no episodes") {}
};

struct AggregateOptions {
    /// Upper bounds of every bucket but the last; strictly increasing, >= 1.
    std::vector<std::size_t> bucket_edges = kDefaultBucketEdges;
    /// A StepLimit failure whose last `invalid_window` actions were all
    /// invalid counts as an invalid-action failure.
    std::size_t invalid_window = 5;
};

/// Throws EmptyInput, or std::invalid_argument on bad edges.
AggregateReport aggregate(const std::vector<agent::Episode>& episodes, const AggregateOptions& options = {});

bool is_invalid_action_failure(const agent::Episode& ep, std::size_t invalid_window);

std::vector<std::string> bucket_labels(const std::vector<std::size_t>& edges);

/// Parses "5,8,11,14". Throws std::invalid_argument.
std::vector<std::size_t> parse_bucket_edges(const std::string& text);

nlohmann::ordered_json report_to_json(const AggregateReport& report);
AggregateReport report_from_json(const nlohmann::json& j);

inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kEpisodesFile = "episodes.csv";
inline constexpr const char* kBucketsFile = "buckets.csv";

/// Writes report.json, episodes.csv and buckets.csv into `dir` (created if
/// needed). No timestamps, so reruns are byte-identical.
std::vector<std::filesystem::path> write_report(const AggregateReport& report,
                                                const std::vector<agent::Episode>& episodes,
                                                const std::filesystem::path& dir);

std::string episodes_csv(const std::vector<agent::Episode>& episodes);
std::string buckets_csv(const AggregateReport& report);

}  // namespace ash::eval
