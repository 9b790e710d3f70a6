// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ash {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Lowercases and splits on every non-alphanumeric byte. Empty pieces are dropped.
std::vector<std::string> tokenize(std::string_view s);

/// Number of maximal runs of non-whitespace bytes.
std::size_t count_whitespace_tokens(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);

}  // namespace ash
