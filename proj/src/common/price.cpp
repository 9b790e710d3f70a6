// SPDX-License-Identifier: Apache-2.0
#include "ash/common/price.hpp"

#include <cctype>

namespace ash {

std::optional<Price> Price::parse(std::string_view text) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos || dot == 0 || text.size() - dot != 3) return std::nullopt;
    std::int64_t whole = 0;
    for (std::size_t i = 0; i < dot; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        if (whole > 100'000'000'000) return std::nullopt;
        whole = whole * 10 + (text[i] - '0');
    }
    for (std::size_t i = dot + 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    }
    std::int64_t frac = (text[dot + 1] - '0') * 10 + (text[dot + 2] - '0');
    return Price(whole * 100 + frac);
}

std::string Price::to_string() const {
    auto frac = cents_ % 100;
    std::string out = std::to_string(cents_ / 100);
    out.push_back('.');
    out.push_back(static_cast<char>('0' + frac / 10));
    out.push_back(static_cast<char>('0' + frac % 10));
    return out;
}

}  // namespace ash
