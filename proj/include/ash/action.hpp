// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace ash {

struct Search {
    std::string query;
    friend bool operator==(const Search&, const Search&) = default;
};
struct Click {
    std::string target;
    friend bool operator==(const Click&, const Click&) = default;
};
struct Think {
    std::string text;
    friend bool operator==(const Think&, const Think&) = default;
};

/// One agent action. Payloads are non-empty, trimmed, single-line and bracket-free.
using Action = std::variant<Search, Click, Think>;

enum class SyntaxReason { UnknownVerb, MissingBrackets, EmptyPayload, TrailingGarbage };

std::string_view to_string(SyntaxReason r);

class ActionSyntaxError : public std::runtime_error {
public:
    ActionSyntaxError(std::string raw, SyntaxReason reason);
    const std::string& raw() const { return raw_; }
    SyntaxReason reason() const { return reason_; }

private:
    std::string raw_;
    SyntaxReason reason_;
};

/// Parses `verb[payload]`. Verb is case-insensitive; the outer whitespace of
/// the string and of the payload is trimmed; the first ']' closes.
Action parse_action(std::string_view raw);

/// Lower-case verb + "[" + payload + "]".
std::string canonicalize(const Action& action);

std::string_view verb_of(const Action& action);
const std::string& payload_of(const Action& action);

inline bool is_think(const Action& a) { return std::holds_alternative<Think>(a); }

struct Observation;

struct Verdict {
    bool valid = false;
    /// The interactable label a Click resolved to, with the page's casing.
    std::optional<std::string> canonical_label;
};

/// Think is always valid, Search only on a search page, Click only on a
/// listed interactable (case-insensitive).
Verdict validate(const Action& action, const Observation& obs);

}  // namespace ash
