// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace ash {

/// Prompting regime. Ash and ActAsh route observations through the
/// summarizer; Act and ActAsh carry no think steps in their exemplars.
enum class Mode { Act, ReAct, Ash, ActAsh };

inline constexpr bool uses_summarizer(Mode m) { return m == Mode::Ash || m == Mode::ActAsh; }
inline constexpr bool allows_think(Mode m) { return m == Mode::ReAct || m == Mode::Ash; }

std::string_view to_string(Mode m);
/// Accepts "act", "react", "ash", and "act_ash" / "act+ash" / "actash", case-insensitive.
std::optional<Mode> parse_mode(std::string_view s);

}  // namespace ash
