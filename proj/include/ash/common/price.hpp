// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ash {

/// Dollar amount held as an integer number of cents.
class Price {
public:
    constexpr Price() = default;
    static constexpr Price from_cents(std::int64_t cents) { return Price(cents); }

    /// Accepts exactly `<digits>.<two digits>`, e.g. "270.00". Returns nullopt otherwise.
    static std::optional<Price> parse(std::string_view text);

    constexpr std::int64_t cents() const { return cents_; }
    std::string to_string() const;

    friend constexpr auto operator<=>(Price, Price) = default;

private:
    constexpr explicit Price(std::int64_t cents) : cents_(cents) {}
    std::int64_t cents_ = 0;
};

}  // namespace ash
