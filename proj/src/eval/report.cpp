// SPDX-License-Identifier: Apache-2.0
#include "ash/eval/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ash/common/text.hpp"

namespace ash::eval {

std::vector<std::string> bucket_labels(const std::vector<std::size_t>& edges) {
    std::vector<std::string> out;
    std::size_t lo = 1;
    for (auto e : edges) {
        out.push_back(lo == e ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(e));
        lo = e + 1;
    }
    out.push_back(std::to_string(lo) + "+");
    return out;
}

namespace {

void check_edges(const std::vector<std::size_t>& edges) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (edges[i] < 1 || (i > 0 && edges[i] <= edges[i - 1])) {
            throw std::invalid_argument("bucket edges must be >= 1 and strictly increasing");
        }
    }
}

}  // namespace

std::vector<std::size_t> parse_bucket_edges(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto t = trim(part);
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc{} || p != t.data() + t.size()) {
            throw std::invalid_argument("bad bucket edge '" + std::string(t) + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("no bucket edges given");
    check_edges(out);
    return out;
}

bool is_invalid_action_failure(const agent::Episode& ep, std::size_t invalid_window) {
    using agent::Termination;
    if (ep.termination == Termination::InvalidStreak) return true;
    if (ep.termination != Termination::StepLimit || invalid_window == 0 || ep.steps.size() < invalid_window) return false;
    for (std::size_t i = ep.steps.size() - invalid_window; i < ep.steps.size(); ++i) {
        if (ep.steps[i].valid) return false;
    }
    return true;
}

AggregateReport aggregate(const std::vector<agent::Episode>& episodes, const AggregateOptions& options) {
    if (episodes.empty()) throw EmptyInput();
    check_edges(options.bucket_edges);

    const auto n = static_cast<double>(episodes.size());
    const auto labels = bucket_labels(options.bucket_edges);
    std::vector<std::size_t> counts(labels.size(), 0);
    std::vector<double> sums(labels.size(), 0.0);

    double score_sum = 0.0, step_sum = 0.0;
    std::size_t successes = 0, failed = 0, invalid_failures = 0;
    for (const auto& ep : episodes) {
        score_sum += ep.score;
        step_sum += static_cast<double>(ep.step_count);
        if (ep.score == 1.0) {
            ++successes;
        } else {
            ++failed;
            if (is_invalid_action_failure(ep, options.invalid_window)) ++invalid_failures;
        }
        std::size_t b = 0;
        while (b < options.bucket_edges.size() && ep.step_count > options.bucket_edges[b]) ++b;
        ++counts[b];
        sums[b] += ep.score;
    }

    AggregateReport r;
    r.episode_count = episodes.size();
    r.avg_score = 100.0 * score_sum / n;
    r.success_rate_pct = 100.0 * static_cast<double>(successes) / n;
    r.avg_steps = step_sum / n;
    r.failed_count = failed;
    r.invalid_failure_pct = failed == 0 ? 0.0 : 100.0 * static_cast<double>(invalid_failures) / static_cast<double>(failed);
    for (std::size_t b = 0; b < labels.size(); ++b) {
        LengthBucket lb{labels[b], counts[b], std::nullopt};
        if (counts[b] > 0) lb.avg_score = 100.0 * sums[b] / static_cast<double>(counts[b]);
        r.length_buckets.push_back(std::move(lb));
    }
    return r;
}

nlohmann::ordered_json report_to_json(const AggregateReport& r) {
    nlohmann::ordered_json j;
    j["episode_count"] = r.episode_count;
    j["avg_score"] = r.avg_score;
    j["success_rate_pct"] = r.success_rate_pct;
    j["avg_steps"] = r.avg_steps;
    j["failed_count"] = r.failed_count;
    j["invalid_failure_pct"] = r.invalid_failure_pct;
    auto buckets = nlohmann::ordered_json::array();
    for (const auto& b : r.length_buckets) {
        nlohmann::ordered_json o;
        o["range"] = b.range;
        o["count"] = b.count;
        o["avg_score"] = b.avg_score ? nlohmann::ordered_json(*b.avg_score) : nlohmann::ordered_json();
        buckets.push_back(std::move(o));
    }
    j["length_buckets"] = std::move(buckets);
    return j;
}

AggregateReport report_from_json(const nlohmann::json& j) {
    AggregateReport r;
    r.episode_count = j.at("episode_count").get<std::size_t>();
    r.avg_score = j.at("avg_score").get<double>();
    r.success_rate_pct = j.at("success_rate_pct").get<double>();
    r.avg_steps = j.at("avg_steps").get<double>();
    r.failed_count = j.at("failed_count").get<std::size_t>();
    r.invalid_failure_pct = j.at("invalid_failure_pct").get<double>();
    for (const auto& b : j.at("length_buckets")) {
        LengthBucket lb;
        lb.range = b.at("range").get<std::string>();
        lb.count = b.at("count").get<std::size_t>();
        if (!b.at("avg_score").is_null()) lb.avg_score = b.at("avg_score").get<double>();
        r.length_buckets.push_back(std::move(lb));
    }
    return r;
}

namespace {

std::string number(double v) { return nlohmann::json(v).dump(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string episodes_csv(const std::vector<agent::Episode>& episodes) {
    std::string out = "goal_id,mode,score,steps,termination\n";
    for (const auto& ep : episodes) {
        out += csv_field(ep.goal.id) + "," + std::string(to_string(ep.mode)) + "," + number(ep.score) + "," +
               std::to_string(ep.step_count) + "," + std::string(agent::to_string(ep.termination)) + "\n";
    }
    return out;
}

std::string buckets_csv(const AggregateReport& report) {
    std::string out = "range,count,avg_score\n";
    for (const auto& b : report.length_buckets) {
        out += b.range + "," + std::to_string(b.count) + "," + (b.avg_score ? number(*b.avg_score) : "") + "\n";
    }
    return out;
}

std::vector<std::filesystem::path> write_report(const AggregateReport& report,
                                                const std::vector<agent::Episode>& episodes,
                                                const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files = {dir / kReportFile, dir / kEpisodesFile, dir / kBucketsFile};
    write_file(files[0], report_to_json(report).dump(2) + "\n");
    write_file(files[1], episodes_csv(episodes));
    write_file(files[2], buckets_csv(report));
    return files;
}

}  // namespace ash::eval
