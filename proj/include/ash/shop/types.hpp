// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ash/common/price.hpp"

namespace ash {

enum class PageType { SearchPage, ResultsPage, ItemPage, DetailPage, Done };

std::string_view to_string(PageType t);
std::optional<PageType> page_type_from_string(std::string_view s);

/// Rendered page text plus the clickable labels it contains, in order of appearance.
struct Observation {
    std::string text;
    PageType page_type = PageType::SearchPage;
    std::vector<std::string> interactables;
    std::string instruction_text;
};

using OptionMap = std::map<std::string, std::vector<std::string>>;
using SelectedOptions = std::map<std::string, std::string>;

struct Product {
    std::string id;
    std::string title;
    std::string category;
    std::set<std::string> attributes;
    OptionMap options;
    Price price;
    std::string description;
    std::vector<std::string> features;

    friend bool operator==(const Product&, const Product&) = default;
};

/// Products ordered by id ascending, ids unique.
struct Catalog {
    std::vector<Product> products;
    std::optional<std::uint64_t> seed;

    const Product* find(std::string_view id) const;
    const Product& at(std::string_view id) const;
};

struct GoalSpec {
    std::string id;
    std::string instruction_text;
    std::string target_category;
    std::set<std::string> required_attributes;
    std::map<std::string, std::string> required_options;
    std::optional<Price> price_cap;
    bool solvable = false;

    std::size_t component_count() const {
        return required_attributes.size() + required_options.size() + (price_cap ? 1 : 0);
    }
    friend bool operator==(const GoalSpec&, const GoalSpec&) = default;
};

struct SearchPage {
    friend bool operator==(const SearchPage&, const SearchPage&) = default;
};
struct ResultsPage {
    std::string query;
    std::size_t page_index = 0;
    friend bool operator==(const ResultsPage&, const ResultsPage&) = default;
};
/// `origin` is the results page the item was opened from; "< Prev" returns there.
struct ItemPage {
    std::string product_id;
    SelectedOptions selected_options;
    std::optional<ResultsPage> origin;
    friend bool operator==(const ItemPage&, const ItemPage&) = default;
};
enum class DetailKind { Description, Features };
struct DetailPage {
    std::string product_id;
    DetailKind kind = DetailKind::Description;
    SelectedOptions selected_options;
    std::optional<ResultsPage> origin;
    friend bool operator==(const DetailPage&, const DetailPage&) = default;
};
struct Done {
    std::string product_id;
    SelectedOptions selected_options;
    friend bool operator==(const Done&, const Done&) = default;
};

using PageState = std::variant<SearchPage, ResultsPage, ItemPage, DetailPage, Done>;

PageType page_type_of(const PageState& s);

struct Purchase {
    std::string product_id;
    SelectedOptions selected_options;
    friend bool operator==(const Purchase&, const Purchase&) = default;
};

struct StepOutcome {
    PageState next_state;
    Observation observation;
    bool valid = false;
    bool done = false;
    std::optional<double> score;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string location, const std::string& what)
        : std::runtime_error(location + ": " + what), location_(std::move(location)) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

class DuplicateId : public std::runtime_error {
public:
    explicit DuplicateId(const std::string& id) : std::runtime_error("duplicate product id: " + id), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class UnknownProductId : public std::runtime_error {
public:
    explicit UnknownProductId(const std::string& id) : std::runtime_error("unknown product id: " + id) {}
};

class SteppedAfterDone : public std::logic_error {
public:
    SteppedAfterDone() : std::logic_error("step() called on a finished episode") {}
};

class EmptyQuery : public std::invalid_argument {
public:
    explicit EmptyQuery(const std::string& q) : std::invalid_argument("query has no searchable tokens: '" + q + "'") {}
};

}  // namespace ash
