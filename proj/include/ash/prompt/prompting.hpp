// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ash/action.hpp"
#include "ash/mode.hpp"
#include "ash/shop/types.hpp"

namespace ash::prompt {

class TemplateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedPageType : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptySummary : public std::runtime_error {
public:
    EmptySummary() : std::runtime_error("summarizer returned an empty summary") {}
};

/// The placeholders a template body may use.
inline constexpr std::string_view kPlaceholders[] = {"instruction", "prev_action", "observation", "history",
                                                     "scenario_instruction"};

/// Few-shot exemplars followed by a body with `{placeholder}` slots.
struct PromptTemplate {
    std::string name;
    std::string body;
    std::vector<std::string> exemplars;

    /// Blocks separated by lines holding only "---"; the last block is the
    /// body. Throws TemplateError on an unknown placeholder.
    static PromptTemplate parse(std::string name, std::string_view text);
    static PromptTemplate load(const std::filesystem::path& path);

    /// Placeholder names used in the body, in order of first appearance.
    std::vector<std::string> placeholders() const;

    /// Exemplars joined by blank lines, then the substituted body. Every body
    /// placeholder must be supplied. Substitution is single-pass.
    std::string render(const std::map<std::string, std::string, std::less<>>& values) const;
};

enum class Scenario { SearchPage, ResultsPage, ItemPage, DetailPage };

std::string_view to_string(Scenario s);

/// Throws UnsupportedPageType for a Done page.
Scenario classify_scenario(const Observation& obs);

struct SummarizerTemplates {
    PromptTemplate prompt;
    std::map<Scenario, std::string> scenario_instructions;
};

/// Everything the two prompt builders read, loaded from one directory.
struct TemplateSet {
    SummarizerTemplates summarizer;
    std::map<Mode, PromptTemplate> actor;

    /// Expects summarizer.txt, scenario_{search,results,item,detail}.txt and
    /// actor_{act,react,ash,act_ash}.txt.
    static TemplateSet load(const std::filesystem::path& dir);

    const PromptTemplate& actor_for(Mode m) const;
};

struct SummarizedObservation {
    std::string text;
    PageType source_page_type = PageType::SearchPage;
    /// Digest of (instruction, previous action, raw observation text).
    std::string derived_from;
};

/// One actor-visible history element: the action that led here (absent for
/// the initial page) and the observation it produced.
struct HistoryEntry {
    std::optional<Action> action;
    std::string observation_text;
};

/// Rendered in the previous-action slot on the first step.
inline constexpr std::string_view kNoPreviousAction = "None";

/// Depends only on its arguments; no other history reaches the summarizer.
std::string build_summarizer_prompt(const GoalSpec& goal, const std::optional<Action>& prev_action,
                                    const Observation& obs, const SummarizerTemplates& templates);

std::string summary_source_digest(const GoalSpec& goal, const std::optional<Action>& prev_action,
                                  const Observation& obs);

/// Text after the first line starting with "Summary:", or the whole trimmed
/// completion when no marker is present. Throws EmptySummary.
SummarizedObservation parse_summary(std::string_view completion);

std::string render_history(std::span<const HistoryEntry> history);

/// Throws TemplateError when a think-free mode gets think exemplars.
std::string build_actor_prompt(const GoalSpec& goal, std::span<const HistoryEntry> history,
                               const PromptTemplate& templ, Mode mode);

/// First line of the trimmed completion, parsed as an action.
Action parse_actor_output(std::string_view completion);

}  // namespace ash::prompt
