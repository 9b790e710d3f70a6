// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace ash::llm {

/// Deterministic stand-in for a language model, tuned to the default
/// template layout. Summarizer prompts (ending in "Reasoning:") get a short
/// rationale plus a "Summary:" block that keeps only instruction-matching
/// results and option values and drops descriptions. Actor prompts (ending
/// in "Action:") get a search, click or think action derived from the last
/// page in the history. Think steps are emitted only when the prompt's
/// exemplars contain them.
std::string heuristic_response(std::string_view prompt);

}  // namespace ash::llm
