// SPDX-License-Identifier: Apache-2.0
#include "ash/action.hpp"

#include "ash/common/text.hpp"
#include "ash/shop/types.hpp"

namespace ash {

std::string_view to_string(SyntaxReason r) {
    switch (r) {
        case SyntaxReason::UnknownVerb: return "unknown-verb";
        case SyntaxReason::MissingBrackets: return "missing-brackets";
        case SyntaxReason::EmptyPayload: return "empty-payload";
        case SyntaxReason::TrailingGarbage: return "trailing-garbage";
    }
    return "unknown";
}

ActionSyntaxError::ActionSyntaxError(std::string raw, SyntaxReason reason)
    : std::runtime_error("cannot parse action '" + raw + "': " + std::string(to_string(reason))),
      raw_(std::move(raw)),
      reason_(reason) {}

Action parse_action(std::string_view raw) {
    auto text = trim(raw);
    auto open = text.find('[');
    if (open == std::string_view::npos) {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::MissingBrackets);
    }
    auto verb = to_lower(trim(text.substr(0, open)));
    if (verb != "search" && verb != "click" && verb != "think") {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::UnknownVerb);
    }
    auto close = text.find(']', open + 1);
    if (close == std::string_view::npos) {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::MissingBrackets);
    }
    auto inner = text.substr(open + 1, close - open - 1);
    if (inner.find('[') != std::string_view::npos || inner.find('\n') != std::string_view::npos) {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::MissingBrackets);
    }
    if (close + 1 != text.size()) {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::TrailingGarbage);
    }
    auto payload = std::string(trim(inner));
    if (payload.empty()) {
        throw ActionSyntaxError(std::string(raw), SyntaxReason::EmptyPayload);
    }
    if (verb == "search") return Search{std::move(payload)};
    if (verb == "click") return Click{std::move(payload)};
    return Think{std::move(payload)};
}

std::string_view verb_of(const Action& action) {
    switch (action.index()) {
        case 0: return "search";
        case 1: return "click";
        default: return "think";
    }
}

const std::string& payload_of(const Action& action) {
    return std::visit(
        [](const auto& a) -> const std::string& {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, Search>) return a.query;
            else if constexpr (std::is_same_v<T, Click>) return a.target;
            else return a.text;
        },
        action);
}

std::string canonicalize(const Action& action) {
    std::string out(verb_of(action));
    out.push_back('[');
    out.append(payload_of(action));
    out.push_back(']');
    return out;
}

Verdict validate(const Action& action, const Observation& obs) {
    if (std::holds_alternative<Think>(action)) return {true, std::nullopt};
    if (const auto* s = std::get_if<Search>(&action)) {
        (void)s;
        return {obs.page_type == PageType::SearchPage, std::nullopt};
    }
    const auto& target = std::get<Click>(action).target;
    for (const auto& label : obs.interactables) {
        if (iequals(label, target)) return {true, label};
    }
    return {false, std::nullopt};
}

}  // namespace ash
