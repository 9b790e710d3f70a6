// SPDX-License-Identifier: Apache-2.0
#include "ash/prompt/prompting.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ash/common/digest.hpp"
#include "ash/common/text.hpp"

namespace ash::prompt {

namespace {

bool is_known_placeholder(std::string_view name) {
    return std::find(std::begin(kPlaceholders), std::end(kPlaceholders), name) != std::end(kPlaceholders);
}

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

/// Calls fn(begin, end, name) for every `{name}` span in text.
template <typename Fn>
void scan_placeholders(std::string_view text, Fn&& fn) {
    std::size_t i = 0;
    while ((i = text.find('{', i)) != std::string_view::npos) {
        std::size_t j = i + 1;
        while (j < text.size() && is_name_char(text[j])) ++j;
        if (j < text.size() && text[j] == '}' && j > i + 1) {
            fn(i, j + 1, text.substr(i + 1, j - i - 1));
            i = j + 1;
        } else {
            ++i;
        }
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TemplateError("cannot read template file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_blank_edges(std::string_view block) {
    auto lines = split_lines(block);
    std::size_t b = 0, e = lines.size();
    while (b < e && trim(lines[b]).empty()) ++b;
    while (e > b && trim(lines[e - 1]).empty()) --e;
    for (std::size_t i = b; i < e; ++i) {
        if (!lines[i].empty() && lines[i].back() == '\r') lines[i].pop_back();
    }
    return join(std::vector<std::string>(lines.begin() + static_cast<std::ptrdiff_t>(b),
                                         lines.begin() + static_cast<std::ptrdiff_t>(e)),
                "\n");
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string name, std::string_view text) {
    std::vector<std::string> blocks;
    std::vector<std::string> current;
    for (auto& line : split_lines(text)) {
        if (trim(line) == "---") {
            blocks.push_back(join(current, "\n"));
            current.clear();
        } else {
            current.push_back(std::move(line));
        }
    }
    blocks.push_back(join(current, "\n"));

    PromptTemplate t;
    t.name = std::move(name);
    t.body = strip_blank_edges(blocks.back());
    blocks.pop_back();
    for (const auto& b : blocks) {
        auto e = strip_blank_edges(b);
        if (!e.empty()) t.exemplars.push_back(std::move(e));
    }
    if (t.body.empty()) throw TemplateError("template '" + t.name + "' has an empty body");
    for (const auto& p : t.placeholders()) {
        if (!is_known_placeholder(p)) throw TemplateError("template '" + t.name + "' uses unknown placeholder {" + p + "}");
    }
    return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
    return parse(path.stem().string(), read_file(path));
}

std::vector<std::string> PromptTemplate::placeholders() const {
    std::vector<std::string> out;
    scan_placeholders(body, [&](std::size_t, std::size_t, std::string_view name) {
        if (std::find(out.begin(), out.end(), name) == out.end()) out.emplace_back(name);
    });
    return out;
}

std::string PromptTemplate::render(const std::map<std::string, std::string, std::less<>>& values) const {
    std::string rendered;
    std::size_t last = 0;
    scan_placeholders(body, [&](std::size_t b, std::size_t e, std::string_view name) {
        auto it = values.find(name);
        if (it == values.end()) {
            throw TemplateError("template '" + this->name + "' has unresolved placeholder {" + std::string(name) + "}");
        }
        rendered.append(body, last, b - last);
        rendered.append(it->second);
        last = e;
    });
    rendered.append(body, last, std::string::npos);

    std::string out;
    for (const auto& ex : exemplars) {
        out += ex;
        out += "\n\n";
    }
    out += rendered;
    return out;
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::SearchPage: return "SearchPage";
        case Scenario::ResultsPage: return "ResultsPage";
        case Scenario::ItemPage: return "ItemPage";
        case Scenario::DetailPage: return "DetailPage";
    }
    return "";
}

Scenario classify_scenario(const Observation& obs) {
    switch (obs.page_type) {
        case PageType::SearchPage: return Scenario::SearchPage;
        case PageType::ResultsPage: return Scenario::ResultsPage;
        case PageType::ItemPage: return Scenario::ItemPage;
        case PageType::DetailPage: return Scenario::DetailPage;
        case PageType::Done: break;
    }
    throw UnsupportedPageType("finished pages are never summarized");
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
    TemplateSet set;
    set.summarizer.prompt = PromptTemplate::load(dir / "summarizer.txt");
    const std::pair<Scenario, const char*> scenario_files[] = {
        {Scenario::SearchPage, "scenario_search.txt"},
        {Scenario::ResultsPage, "scenario_results.txt"},
        {Scenario::ItemPage, "scenario_item.txt"},
        {Scenario::DetailPage, "scenario_detail.txt"},
    };
    for (const auto& [scenario, file] : scenario_files) {
        set.summarizer.scenario_instructions[scenario] = strip_blank_edges(read_file(dir / file));
    }
    for (auto mode : {Mode::Act, Mode::ReAct, Mode::Ash, Mode::ActAsh}) {
        auto file = "actor_" + std::string(to_string(mode)) + ".txt";
        set.actor.emplace(mode, PromptTemplate::load(dir / file));
    }
    return set;
}

const PromptTemplate& TemplateSet::actor_for(Mode m) const {
    auto it = actor.find(m);
    if (it == actor.end()) throw TemplateError("no actor template for mode " + std::string(to_string(m)));
    return it->second;
}

std::string build_summarizer_prompt(const GoalSpec& goal, const std::optional<Action>& prev_action,
                                    const Observation& obs, const SummarizerTemplates& templates) {
    const auto& t = templates.prompt;
    auto used = t.placeholders();
    for (const char* required : {"instruction", "prev_action", "observation", "scenario_instruction"}) {
        if (std::find(used.begin(), used.end(), required) == used.end()) {
            throw TemplateError("summarizer template '" + t.name + "' lacks {" + required + "}");
        }
    }
    auto scenario = classify_scenario(obs);
    auto it = templates.scenario_instructions.find(scenario);
    if (it == templates.scenario_instructions.end()) {
        throw TemplateError("no scenario instruction for " + std::string(to_string(scenario)));
    }
    return t.render({
        {"instruction", goal.instruction_text},
        {"prev_action", prev_action ? canonicalize(*prev_action) : std::string(kNoPreviousAction)},
        {"observation", obs.text},
        {"scenario_instruction", it->second},
    });
}

std::string summary_source_digest(const GoalSpec& goal, const std::optional<Action>& prev_action,
                                  const Observation& obs) {
    std::string key = goal.instruction_text;
    key += '\x1f';
    key += prev_action ? canonicalize(*prev_action) : std::string(kNoPreviousAction);
    key += '\x1f';
    key += obs.text;
    return sha256_hex(key);
}

SummarizedObservation parse_summary(std::string_view completion) {
    static constexpr std::string_view kMarker = "Summary:";
    auto lines = split_lines(completion);
    std::string text;
    bool found = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = trim(lines[i]);
        if (line.substr(0, kMarker.size()) == kMarker) {
            std::vector<std::string> rest;
            auto head = trim(line.substr(kMarker.size()));
            if (!head.empty()) rest.emplace_back(head);
            for (std::size_t j = i + 1; j < lines.size(); ++j) rest.push_back(lines[j]);
            text = std::string(trim(join(rest, "\n")));
            found = true;
            break;
        }
    }
    if (!found) text = std::string(trim(completion));
    if (text.empty()) throw EmptySummary();
    SummarizedObservation s;
    s.text = std::move(text);
    return s;
}

std::string render_history(std::span<const HistoryEntry> history) {
    std::string out;
    for (const auto& entry : history) {
        if (entry.action) out += "Action: " + canonicalize(*entry.action) + "\n";
        out += "Observation:\n";
        out += entry.observation_text;
        out += "\n\n";
    }
    return out;
}

std::string build_actor_prompt(const GoalSpec& goal, std::span<const HistoryEntry> history,
                               const PromptTemplate& templ, Mode mode) {
    if (!allows_think(mode)) {
        for (const auto& ex : templ.exemplars) {
            if (ex.find("think[") != std::string::npos) {
                throw TemplateError("actor template '" + templ.name + "' has think exemplars but mode " +
                                    std::string(to_string(mode)) + " forbids them");
            }
        }
    }
    return templ.render({{"instruction", goal.instruction_text}, {"history", render_history(history)}});
}

Action parse_actor_output(std::string_view completion) {
    auto text = trim(completion);
    auto nl = text.find('\n');
    return parse_action(text.substr(0, nl));
}

}  // namespace ash::prompt
