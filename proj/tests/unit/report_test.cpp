// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ash/agent/trajectory_log.hpp"
#include "ash/eval/report.hpp"
#include "oracles.hpp"

using namespace ash;
using namespace ash::agent;
using namespace ash::eval;

namespace {

constexpr double kTol = 1e-9;

std::vector<Episode> fixture_episodes() { return read_trajectory_log(ash::testing::fixture("aggregate_episodes.jsonl")); }

AggregateReport expected_report() {
    std::ifstream in(ash::testing::fixture("expected_report.json"));
    return report_from_json(nlohmann::json::parse(in));
}

void expect_near(const AggregateReport& a, const AggregateReport& b) {
    EXPECT_EQ(a.episode_count, b.episode_count);
    EXPECT_NEAR(a.avg_score, b.avg_score, kTol);
    EXPECT_NEAR(a.success_rate_pct, b.success_rate_pct, kTol);
    EXPECT_NEAR(a.avg_steps, b.avg_steps, kTol);
    EXPECT_EQ(a.failed_count, b.failed_count);
    EXPECT_NEAR(a.invalid_failure_pct, b.invalid_failure_pct, kTol);
    ASSERT_EQ(a.length_buckets.size(), b.length_buckets.size());
    for (std::size_t i = 0; i < a.length_buckets.size(); ++i) {
        EXPECT_EQ(a.length_buckets[i].range, b.length_buckets[i].range);
        EXPECT_EQ(a.length_buckets[i].count, b.length_buckets[i].count);
        ASSERT_EQ(a.length_buckets[i].avg_score.has_value(), b.length_buckets[i].avg_score.has_value());
        if (a.length_buckets[i].avg_score) {
            EXPECT_NEAR(*a.length_buckets[i].avg_score, *b.length_buckets[i].avg_score, kTol);
        }
    }
}

Episode simple(double score, std::size_t steps, Termination t) {
    Episode e;
    e.goal.id = "x";
    e.score = score;
    e.step_count = steps;
    e.termination = t;
    for (std::size_t i = 0; i < steps; ++i) {
        StepRecord s;
        s.index = i;
        s.valid = true;
        s.action = Click{"Next >"};
        e.steps.push_back(s);
    }
    return e;
}

}  // namespace

TEST(Report, MatchesHandComputedFixture) {
    auto eps = fixture_episodes();
    ASSERT_EQ(eps.size(), 10u);
    expect_near(aggregate(eps), expected_report());
}

TEST(Report, InvalidFailureClassification) {
    auto eps = fixture_episodes();
    std::vector<std::string> flagged;
    for (const auto& e : eps) {
        if (is_invalid_action_failure(e, 5)) flagged.push_back(e.goal.id);
    }
    EXPECT_EQ(flagged, (std::vector<std::string>{"g05", "g06"}));
    // A shorter window also catches the run that ended with four invalid steps.
    EXPECT_TRUE(is_invalid_action_failure(eps[6], 4));
}

TEST(Report, SingleEpisode) {
    auto r = aggregate({simple(0.5, 7, Termination::Purchased)});
    EXPECT_EQ(r.episode_count, 1u);
    EXPECT_NEAR(r.avg_score, 50.0, kTol);
    EXPECT_EQ(r.success_rate_pct, 0.0);
    EXPECT_EQ(r.avg_steps, 7.0);
    EXPECT_EQ(r.failed_count, 1u);
    EXPECT_EQ(r.invalid_failure_pct, 0.0);
    EXPECT_EQ(r.length_buckets[1].count, 1u);
    EXPECT_FALSE(r.length_buckets[0].avg_score);
}

TEST(Report, AllSuccessfulHasZeroInvalidShare) {
    auto r = aggregate({simple(1.0, 3, Termination::Purchased), simple(1.0, 9, Termination::Purchased)});
    EXPECT_EQ(r.failed_count, 0u);
    EXPECT_EQ(r.invalid_failure_pct, 0.0);
    EXPECT_EQ(r.success_rate_pct, 100.0);
}

TEST(Report, EmptyInputThrows) { EXPECT_THROW(aggregate({}), EmptyInput); }

TEST(Report, PermutationInvariantAndBucketsSum) {
    auto eps = fixture_episodes();
    auto base = aggregate(eps);
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(eps.begin(), eps.end(), rng);
        expect_near(aggregate(eps), base);
        for (const auto& edges : {std::vector<std::size_t>{5, 8, 11, 14}, {1}, {3, 30}, {2, 4, 6, 8, 10, 12}}) {
            auto r = aggregate(eps, AggregateOptions{edges, 5});
            std::size_t total = 0;
            for (const auto& b : r.length_buckets) total += b.count;
            EXPECT_EQ(total, eps.size());
            EXPECT_EQ(r.length_buckets.size(), edges.size() + 1);
        }
    }
}

TEST(Report, BucketLabelsAndEdges) {
    EXPECT_EQ(bucket_labels({5, 8, 11, 14}), (std::vector<std::string>{"1-5", "6-8", "9-11", "12-14", "15+"}));
    EXPECT_EQ(bucket_labels({1, 3}), (std::vector<std::string>{"1", "2-3", "4+"}));
    EXPECT_EQ(parse_bucket_edges("5,8,11,14"), kDefaultBucketEdges);
    EXPECT_THROW(parse_bucket_edges("5,5"), std::invalid_argument);
    EXPECT_THROW(parse_bucket_edges("0,3"), std::invalid_argument);
    EXPECT_THROW(parse_bucket_edges("a"), std::invalid_argument);
    EXPECT_THROW(parse_bucket_edges(""), std::invalid_argument);
    EXPECT_THROW(aggregate(fixture_episodes(), AggregateOptions{{8, 5}, 5}), std::invalid_argument);
}

TEST(Report, JsonRoundTrip) {
    auto r = aggregate(fixture_episodes());
    EXPECT_EQ(report_from_json(nlohmann::json::parse(report_to_json(r).dump())), r);
}

TEST(Report, WritesByteIdenticalFiles) {
    auto eps = fixture_episodes();
    auto r = aggregate(eps);
    auto dir = std::filesystem::temp_directory_path() / "ash_report_test";
    std::filesystem::remove_all(dir);
    auto read_all = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto files = write_report(r, eps, dir);
    ASSERT_EQ(files.size(), 3u);
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(read_all(f));
    write_report(r, eps, dir);
    for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(read_all(files[i]), first[i]);

    EXPECT_EQ(first[2].substr(0, first[2].find('\n')), "range,count,avg_score");
    std::size_t lines = std::count(first[1].begin(), first[1].end(), '\n');
    EXPECT_EQ(lines, eps.size() + 1);
    std::filesystem::remove_all(dir);
}
