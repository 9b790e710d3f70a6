// SPDX-License-Identifier: Apache-2.0
#include "ash/mode.hpp"

#include "ash/common/text.hpp"

namespace ash {

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::Act: return "act";
        case Mode::ReAct: return "react";
        case Mode::Ash: return "ash";
        case Mode::ActAsh: return "act_ash";
    }
    return "";
}

std::optional<Mode> parse_mode(std::string_view s) {
    auto v = to_lower(trim(s));
    if (v == "act") return Mode::Act;
    if (v == "react") return Mode::ReAct;
    if (v == "ash") return Mode::Ash;
    if (v == "act_ash" || v == "act+ash" || v == "actash" || v == "act-ash") return Mode::ActAsh;
    return std::nullopt;
}

}  // namespace ash
