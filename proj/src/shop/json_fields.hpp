// SPDX-License-Identifier: Apache-2.0
// Field readers that report JSON-path locations in ParseError.
#pragma once

#include "json.hpp"

#include <initializer_list>
#include <string>
#include <string_view>

#include "ash/shop/types.hpp"

namespace ash::shop::detail {

using json = nlohmann::json;

inline std::size_t line_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

inline json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("line " + std::to_string(line_of(text, e.byte)), "malformed JSON");
    }
}

inline const json& field(const json& obj, const std::string& path, const char* name) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(path + "." + name, "missing field");
    return *it;
}

inline void only_fields(const json& obj, const std::string& path, std::initializer_list<std::string_view> names) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto n : names) known = known || n == key;
        if (!known) throw ParseError(path + "." + key, "unknown field");
    }
}

inline std::string string_at(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "expected a string");
    return v.get<std::string>();
}

inline std::string string_field(const json& obj, const std::string& path, const char* name) {
    return string_at(field(obj, path, name), path + "." + name);
}

inline Price price_at(const json& v, const std::string& path) {
    auto s = string_at(v, path);
    auto p = Price::parse(s);
    if (!p) throw ParseError(path, "expected a price string with two decimals, got '" + s + "'");
    return *p;
}

}  // namespace ash::shop::detail
