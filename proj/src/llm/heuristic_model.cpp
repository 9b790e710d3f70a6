// SPDX-License-Identifier: Apache-2.0
#include "ash/llm/heuristic_model.hpp"

#include <algorithm>
#include <optional>
#include <regex>
#include <set>
#include <vector>

#include "ash/common/text.hpp"

namespace ash::llm {

namespace {

constexpr std::string_view kInstructionTag = "Instruction: ";

bool is_bracketed(std::string_view line) {
    return line.size() >= 2 && line.front() == '[' && line.back() == ']';
}

std::string unbracket(std::string_view line) { return std::string(line.substr(1, line.size() - 2)); }

struct GoalView {
    std::string instruction;
    std::set<std::string> tokens;
    std::optional<double> cap;
};

GoalView read_goal(std::string instruction) {
    GoalView g;
    g.instruction = std::move(instruction);
    for (auto& t : tokenize(g.instruction)) g.tokens.insert(std::move(t));
    static const std::regex cap_re(R"(price lower than ([0-9]+(?:\.[0-9]+)?) dollars)");
    std::smatch m;
    if (std::regex_search(g.instruction, m, cap_re)) g.cap = std::stod(m[1].str());
    return g;
}

std::string query_from(const GoalView& g) {
    std::string q = g.instruction;
    for (std::string_view lead : {"Find me an ", "Find me a "}) {
        if (starts_with_ci(q, lead)) {
            q = q.substr(lead.size());
            break;
        }
    }
    if (auto p = q.find(", and price"); p != std::string::npos) q = q.substr(0, p);
    for (std::string_view sep : {" with ", " and "}) {
        std::size_t p;
        while ((p = q.find(sep)) != std::string::npos) q.replace(p, sep.size(), " ");
    }
    return std::string(trim(q));
}

bool covered(std::string_view phrase, const GoalView& g) {
    auto toks = tokenize(phrase);
    if (toks.empty()) return false;
    return std::all_of(toks.begin(), toks.end(), [&](const auto& t) { return g.tokens.count(t) > 0; });
}

std::size_t overlap(std::string_view phrase, const GoalView& g) {
    std::size_t n = 0;
    std::set<std::string> seen;
    for (auto& t : tokenize(phrase)) {
        if (g.tokens.count(t) && seen.insert(t).second) ++n;
    }
    return n;
}

enum class Page { Search, Results, Item, Detail, Unknown };

Page classify(const std::vector<std::string>& lines) {
    bool buy = false, search = false, results = false, detail = false;
    for (const auto& l : lines) {
        if (l == "[Buy Now]") buy = true;
        else if (l == "[Search]") search = true;
        else if ((!l.empty() && l[0] == '$') || starts_with_ci(l, "No results") || starts_with_ci(l, "No relevant results") ||
                 starts_with_ci(l, "Page "))
            results = true;
        else if (l == "Description:" || l == "Features:" || starts_with_ci(l, "Detail page")) detail = true;
    }
    if (buy) return Page::Item;
    if (search) return Page::Search;
    if (results) return Page::Results;
    if (detail) return Page::Detail;
    return Page::Unknown;
}

struct ResultEntry {
    std::string title;
    std::string price_line;
};

std::vector<ResultEntry> result_entries(const std::vector<std::string>& lines) {
    std::vector<ResultEntry> out;
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        if (is_bracketed(lines[i]) && !lines[i + 1].empty() && lines[i + 1][0] == '$') {
            out.push_back({unbracket(lines[i]), lines[i + 1]});
        }
    }
    return out;
}

double price_of(std::string_view price_line) {
    auto digits = price_line.substr(price_line.find('$') + 1);
    try {
        return std::stod(std::string(digits));
    } catch (...) {
        return 0.0;
    }
}

bool has_line(const std::vector<std::string>& lines, std::string_view l) {
    return std::find(lines.begin(), lines.end(), l) != lines.end();
}

struct OptionView {
    std::string group;
    std::string value;
};

/// Option values listed under "name:" headers on an item page.
std::vector<OptionView> option_values(const std::vector<std::string>& lines) {
    std::vector<OptionView> out;
    std::string group;
    for (const auto& l : lines) {
        if (!l.empty() && l.back() == ':' && l.find(' ') == std::string::npos && !is_bracketed(l)) {
            group = l.substr(0, l.size() - 1);
        } else if (is_bracketed(l) && !group.empty()) {
            auto v = unbracket(l);
            if (v == "Description" || v == "Features" || v == "Buy Now") {
                group.clear();
                continue;
            }
            out.push_back({group, v});
        } else if (!l.empty()) {
            group.clear();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summarizer

std::string summarize_search(const GoalView& g) {
    return " The request names the product and its attributes; the price is left out of the query.\nSummary: Search page. "
           "Suggested query: " +
           query_from(g) + "\n[Search]";
}

std::string summarize_results(const GoalView& g, const std::vector<std::string>& lines) {
    auto entries = result_entries(lines);
    std::vector<std::pair<std::size_t, ResultEntry>> kept;
    for (const auto& e : entries) {
        if (g.cap && price_of(e.price_line) > *g.cap) continue;
        auto n = overlap(e.title, g);
        if (n > 0) kept.emplace_back(n, e);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    if (kept.size() > 3) kept.resize(3);

    std::string reasoning = " " + std::to_string(entries.size()) + " results on this page, " +
                            std::to_string(kept.size()) + " match the request within the price limit.";
    std::string s;
    if (kept.empty()) s = "No relevant results on this page.\n";
    for (const auto& [n, e] : kept) s += "[" + e.title + "]\n" + e.price_line + "\n";
    if (has_line(lines, "[< Prev]")) s += "[< Prev]\n";
    if (has_line(lines, "[Next >]")) s += "[Next >]\n";
    s += "[Back to Search]";
    return reasoning + "\nSummary: " + s;
}

std::string summarize_item(const GoalView& g, const std::vector<std::string>& lines) {
    // Layout: instruction, [Back to Search], [< Prev], title, price, option groups, selection, controls.
    std::string title, price;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (starts_with_ci(lines[i], "Price: $")) {
            price = lines[i];
            if (i > 0) title = lines[i - 1];
            break;
        }
    }
    std::string selected = "Selected: none";
    for (const auto& l : lines) {
        if (starts_with_ci(l, "Selected: ")) selected = l;
    }
    bool under = !g.cap || price_of(price) <= *g.cap;
    auto title_hits = overlap(title, g);
    bool desirable = under && title_hits >= 2;

    std::string s = desirable ? "The product is desirable: " : "The product may not match: ";
    s += price.empty() ? std::string("price unknown") : price.substr(7);
    s += under ? " is within the price limit.\n" : " is over the price limit.\n";
    s += title + "\n" + price + "\n";
    std::string current_group;
    std::size_t kept = 0;
    for (const auto& o : option_values(lines)) {
        if (!covered(o.value, g)) continue;
        if (o.group != current_group) {
            s += o.group + ":\n";
            current_group = o.group;
        }
        s += "[" + o.value + "]\n";
        ++kept;
    }
    s += selected + "\n[Buy Now]\n[< Prev]\n[Back to Search]";
    std::string reasoning = " The title shares " + std::to_string(title_hits) + " words with the request. " +
                            std::to_string(kept) + " option values are requested; the rest are dropped along with the "
                                                   "description.";
    return reasoning + "\nSummary: " + s;
}

std::string summarize_detail(const GoalView& g, const std::vector<std::string>& lines) {
    std::size_t hits = 0;
    for (const auto& l : lines) {
        if (!starts_with_ci(l, "Instruction:")) hits += overlap(l, g);
    }
    return " The page text is background information.\nSummary: Detail page. " + std::to_string(hits) +
           " requested words confirmed.\n[< Prev]\n[Back to Search]";
}

std::string summarizer_response(std::string_view prompt) {
    auto obs_at = prompt.rfind("\nObservation:\n");
    auto steps_at = prompt.rfind("\nStep-by-step instruction:\n");
    if (obs_at == std::string_view::npos || steps_at == std::string_view::npos || steps_at < obs_at) {
        return " Nothing to condense.\nSummary: (empty page)";
    }
    auto instr_at = prompt.rfind(kInstructionTag, obs_at);
    std::string instruction;
    if (instr_at != std::string_view::npos) {
        auto eol = prompt.find('\n', instr_at);
        instruction = std::string(prompt.substr(instr_at + kInstructionTag.size(), eol - instr_at - kInstructionTag.size()));
    }
    auto goal = read_goal(instruction);
    auto raw = prompt.substr(obs_at + 14, steps_at - obs_at - 14);
    auto lines = split_lines(raw);
    switch (classify(lines)) {
        case Page::Search: return summarize_search(goal);
        case Page::Results: return summarize_results(goal, lines);
        case Page::Item: return summarize_item(goal, lines);
        default: return summarize_detail(goal, lines);
    }
}

// ---------------------------------------------------------------------------
// Actor

struct Turn {
    std::string action;
    std::string observation;
};

std::string actor_response(std::string_view prompt) {
    // The query section starts at the last "Instruction:" line followed by a blank line.
    std::size_t section = std::string_view::npos;
    for (std::size_t pos = prompt.find(kInstructionTag); pos != std::string_view::npos;
         pos = prompt.find(kInstructionTag, pos + 1)) {
        if (pos != 0 && prompt[pos - 1] != '\n') continue;
        auto eol = prompt.find('\n', pos);
        if (eol != std::string_view::npos && eol + 1 < prompt.size() && prompt[eol + 1] == '\n') section = pos;
    }
    if (section == std::string_view::npos) return "think[I cannot find the instruction.]";
    bool think_mode = prompt.substr(0, section).find("think[") != std::string_view::npos;

    auto eol = prompt.find('\n', section);
    auto goal = read_goal(std::string(prompt.substr(section + kInstructionTag.size(), eol - section - kInstructionTag.size())));

    std::vector<Turn> turns;
    for (auto& line : split_lines(prompt.substr(eol + 1))) {
        if (starts_with_ci(line, "Action:")) {
            auto a = std::string(trim(std::string_view(line).substr(7)));
            if (a.empty()) break;
            turns.push_back({a, {}});
        } else if (line == "Observation:") {
            if (turns.empty() || !turns.back().observation.empty()) turns.push_back({});
            turns.back().observation = "\n";
        } else if (!turns.empty() && !turns.back().observation.empty()) {
            turns.back().observation += line + "\n";
        }
    }

    // Latest real page, skipping think acknowledgements and bare invalid banners.
    std::vector<std::string> page;
    for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
        auto lines = split_lines(trim(it->observation));
        if (!lines.empty() && lines.front() == "Invalid action!") lines.erase(lines.begin());
        if (lines.empty() || (lines.size() == 1 && lines[0] == "OK.")) continue;
        page = std::move(lines);
        break;
    }
    std::vector<std::string> actions;
    for (const auto& t : turns) {
        if (!t.action.empty()) actions.push_back(t.action);
    }
    bool last_was_think = !actions.empty() && starts_with_ci(actions.back(), "think[");

    switch (classify(page)) {
        case Page::Search:
            return "search[" + query_from(goal) + "]";
        case Page::Results: {
            auto entries = result_entries(page);
            std::stable_sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
                return overlap(a.title, goal) > overlap(b.title, goal);
            });
            for (const auto& e : entries) {
                if (goal.cap && price_of(e.price_line) > *goal.cap) continue;
                auto click = "click[" + e.title + "]";
                if (std::find(actions.begin(), actions.end(), click) == actions.end()) return click;
            }
            if (has_line(page, "[Next >]")) return "click[Next >]";
            return "click[Back to Search]";
        }
        case Page::Item: {
            std::string selected;
            for (const auto& l : page) {
                if (starts_with_ci(l, "Selected: ")) selected = l;
            }
            for (const auto& o : option_values(page)) {
                if (!covered(o.value, goal)) continue;
                if (selected.find(o.group + "=" + o.value) != std::string::npos) continue;
                return "click[" + o.value + "]";
            }
            if (think_mode && !last_was_think) {
                return "think[The product matches the request and the options are selected. I will buy it.]";
            }
            return "click[Buy Now]";
        }
        case Page::Detail:
            return "click[< Prev]";
        case Page::Unknown:
            break;
    }
    return "click[Back to Search]";
}

}  // namespace

std::string heuristic_response(std::string_view prompt) {
    auto tail = trim(prompt);
    if (tail.size() >= 10 && tail.substr(tail.size() - 10) == "Reasoning:") return summarizer_response(prompt);
    return actor_response(prompt);
}

}  // namespace ash::llm
