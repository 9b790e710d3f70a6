// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ash/shop/types.hpp"

namespace ash::shop {

/// Labels the environment renders itself. Product titles and option values
/// may not collide with these.
inline constexpr std::string_view kSearchLabel = "Search";
inline constexpr std::string_view kBackToSearch = "Back to Search";
inline constexpr std::string_view kNextPage = "Next >";
inline constexpr std::string_view kPrevPage = "< Prev";
inline constexpr std::string_view kDescription = "Description";
inline constexpr std::string_view kFeatures = "Features";
inline constexpr std::string_view kBuyNow = "Buy Now";

bool is_reserved_label(std::string_view label);

/// Reads a catalog document: either a bare JSON array of products or an
/// object with a "products" array. Products come back sorted by id.
/// Throws ParseError (with a line or field location) or DuplicateId.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view text);

/// Canonical serialization; byte-identical for equal catalogs.
std::string serialize_catalog(const Catalog& catalog);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);

/// Deterministic in (seed, n). Products come in pairs: a base product and a
/// near-duplicate that differs in exactly one attribute or one option group.
Catalog generate_catalog(std::uint64_t seed, std::size_t n);

}  // namespace ash::shop
