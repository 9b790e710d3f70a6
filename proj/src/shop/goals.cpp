// SPDX-License-Identifier: Apache-2.0
#include "ash/shop/goals.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ash/common/rng.hpp"
#include "ash/common/text.hpp"
#include "ash/shop/env.hpp"
#include "json_fields.hpp"

namespace ash::shop {

using detail::json;

std::string render_instruction(const GoalSpec& goal) {
    std::vector<std::string> attrs(goal.required_attributes.begin(), goal.required_attributes.end());
    std::string noun = attrs.empty() ? goal.target_category : join(attrs, " and ") + " " + goal.target_category;
    const bool vowel = !noun.empty() && std::string_view("aeiou").find(noun[0]) != std::string_view::npos;
    std::string out = std::string(vowel ? "Find me an " : "Find me a ") + noun;
    if (!goal.required_options.empty()) {
        std::vector<std::string> values;
        for (const auto& [k, v] : goal.required_options) values.push_back(v);
        out += " with " + join(values, " and ");
    }
    if (goal.price_cap) out += ", and price lower than " + goal.price_cap->to_string() + " dollars";
    return out;
}

double best_achievable_score(const Catalog& catalog, const GoalSpec& goal) {
    double best = 0.0;
    for (const auto& p : catalog.products) {
        best = std::max(best, score(Purchase{p.id, best_selection(p, goal)}, goal, catalog));
    }
    return best;
}

namespace {

// "g0001"; widens past four digits for large sets.
std::string goal_id(std::size_t index, std::size_t total = 0) {
    auto digits = std::to_string(index + 1);
    const auto width = std::max<std::size_t>(4, std::to_string(total).size());
    return "g" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

std::vector<GoalSpec> generate_goals(const Catalog& catalog, std::uint64_t seed, std::size_t n) {
    if (catalog.products.empty()) throw std::invalid_argument("generate_goals: catalog is empty");
    Rng rng(seed);
    std::vector<GoalSpec> goals;
    goals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& target = catalog.products[rng.below(catalog.products.size())];
        GoalSpec g;
        g.id = goal_id(i, n);
        g.target_category = target.category;

        std::vector<std::string> attrs(target.attributes.begin(), target.attributes.end());
        auto n_attrs = std::min<std::size_t>(attrs.size(), static_cast<std::size_t>(rng.between(1, 2)));
        for (auto idx : rng.sample_indices(attrs.size(), n_attrs)) g.required_attributes.insert(attrs[idx]);

        std::vector<std::string> groups;
        for (const auto& [name, values] : target.options) groups.push_back(name);
        auto n_opts = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(std::min<std::size_t>(2, groups.size()))));
        for (auto idx : rng.sample_indices(groups.size(), n_opts)) {
            const auto& values = target.options.at(groups[idx]);
            g.required_options[groups[idx]] = rng.pick(values);
        }

        if (rng.chance(4, 5)) {
            auto cents = target.price.cents();
            auto raised = cents + rng.between(0, cents / 2);
            g.price_cap = Price::from_cents((raised + 99) / 100 * 100);
        }
        g.instruction_text = render_instruction(g);
        g.solvable = best_achievable_score(catalog, g) == 1.0;
        goals.push_back(std::move(g));
    }
    return goals;
}

namespace {

GoalSpec goal_from_json(const json& j, const std::string& path) {
    detail::only_fields(j, path, {"id", "instruction_text", "target_category", "required_attributes",
                                  "required_options", "price_cap", "solvable"});
    GoalSpec g;
    if (j.contains("id")) g.id = detail::string_field(j, path, "id");
    g.instruction_text = detail::string_field(j, path, "instruction_text");
    g.target_category = detail::string_field(j, path, "target_category");
    const auto& attrs = detail::field(j, path, "required_attributes");
    if (!attrs.is_array()) throw ParseError(path + ".required_attributes", "expected an array");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        g.required_attributes.insert(detail::string_at(attrs[i], path + ".required_attributes[" + std::to_string(i) + "]"));
    }
    const auto& opts = detail::field(j, path, "required_options");
    if (!opts.is_object()) throw ParseError(path + ".required_options", "expected an object");
    for (const auto& [k, v] : opts.items()) {
        g.required_options[k] = detail::string_at(v, path + ".required_options." + k);
    }
    const auto& cap = detail::field(j, path, "price_cap");
    if (!cap.is_null()) g.price_cap = detail::price_at(cap, path + ".price_cap");
    const auto& solvable = detail::field(j, path, "solvable");
    if (!solvable.is_boolean()) throw ParseError(path + ".solvable", "expected a boolean");
    g.solvable = solvable.get<bool>();
    if (g.component_count() == 0) throw ParseError(path, "goal has no components");
    return g;
}

}  // namespace

nlohmann::ordered_json goal_to_json(const GoalSpec& g) {
    nlohmann::ordered_json j;
    j["id"] = g.id;
    j["instruction_text"] = g.instruction_text;
    j["target_category"] = g.target_category;
    j["required_attributes"] = g.required_attributes;
    nlohmann::ordered_json opts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : g.required_options) opts[k] = v;
    j["required_options"] = opts;
    j["price_cap"] = g.price_cap ? nlohmann::ordered_json(g.price_cap->to_string()) : nlohmann::ordered_json();
    j["solvable"] = g.solvable;
    return j;
}

GoalSpec goal_from_json(const nlohmann::json& j) { return goal_from_json(j, "goal"); }

std::vector<GoalSpec> parse_goals(std::string_view text) {
    auto doc = detail::parse_document(text);
    const json* list = &doc;
    if (doc.is_object()) list = &detail::field(doc, "$", "goals");
    if (!list->is_array()) throw ParseError("goals", "expected an array of goals");
    std::vector<GoalSpec> out;
    for (std::size_t i = 0; i < list->size(); ++i) {
        out.push_back(goal_from_json((*list)[i], "goals[" + std::to_string(i) + "]"));
        if (out.back().id.empty()) out.back().id = goal_id(i);
    }
    return out;
}

std::vector<GoalSpec> load_goals(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_goals(ss.str());
}

std::string serialize_goals(const std::vector<GoalSpec>& goals) {
    nlohmann::ordered_json doc;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& g : goals) arr.push_back(goal_to_json(g));
    doc["goals"] = std::move(arr);
    return doc.dump(2) + "\n";
}

void save_goals(const std::vector<GoalSpec>& goals, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_goals(goals);
}

}  // namespace ash::shop
