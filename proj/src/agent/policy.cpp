// SPDX-License-Identifier: Apache-2.0
#include "ash/agent/policy.hpp"

#include <algorithm>

#include "ash/common/text.hpp"
#include "ash/shop/catalog.hpp"
#include "ash/shop/env.hpp"

namespace ash::agent {

Decision LlmPolicy::decide(const GoalSpec& goal, std::span<const prompt::HistoryEntry> history, const Observation&) {
    auto prompt = prompt::build_actor_prompt(goal, history, templates_.actor_for(mode_), mode_);
    auto text = backend_.complete(prompt, params_);
    return Decision{std::move(text), llm::digest(prompt, params_)};
}

const Product* OraclePolicy::best_product(const Catalog& catalog, const GoalSpec& goal) {
    const Product* best = nullptr;
    double best_score = -1.0;
    for (const auto& p : catalog.products) {
        auto s = shop::score(Purchase{p.id, shop::best_selection(p, goal)}, goal, catalog);
        if (s > best_score) {  // products are id-ordered, so strict > keeps the lowest id on ties
            best = &p;
            best_score = s;
        }
    }
    return best;
}

namespace {

bool lists(const Observation& page, std::string_view label) {
    return std::any_of(page.interactables.begin(), page.interactables.end(),
                       [&](const auto& l) { return iequals(l, label); });
}

std::string click(std::string_view label) { return "click[" + std::string(label) + "]"; }

}  // namespace

Decision OraclePolicy::decide(const GoalSpec& goal, std::span<const prompt::HistoryEntry> history,
                              const Observation& page) {
    const Product* target = best_product(catalog_, goal);

    std::size_t searches = 0;
    std::size_t last_target_click = 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& a = history[i].action;
        if (!a) continue;
        if (std::holds_alternative<Search>(*a)) ++searches;
        if (target && std::holds_alternative<Click>(*a) && std::get<Click>(*a).target == target->title) {
            last_target_click = i;
        }
    }

    switch (page.page_type) {
        case PageType::SearchPage: {
            if (searches == 0) {
                std::string q = goal.target_category;
                for (const auto& a : goal.required_attributes) q += " " + a;
                return {"search[" + q + "]", std::nullopt};
            }
            if (searches == 1) return {"search[" + goal.target_category + "]", std::nullopt};
            throw NoProductFound("no search returned the target product for goal " + goal.id);
        }
        case PageType::ResultsPage: {
            if (target && lists(page, target->title)) return {click(target->title), std::nullopt};
            if (lists(page, shop::kNextPage)) return {click(shop::kNextPage), std::nullopt};
            if (searches >= 2) throw NoProductFound("results exhausted without the target product for goal " + goal.id);
            return {click(shop::kBackToSearch), std::nullopt};
        }
        case PageType::ItemPage: {
            if (!target) return {click(shop::kBackToSearch), std::nullopt};
            std::vector<std::string> clicked;
            for (std::size_t i = last_target_click + 1; i < history.size(); ++i) {
                const auto& a = history[i].action;
                if (a && std::holds_alternative<Click>(*a)) clicked.push_back(std::get<Click>(*a).target);
            }
            for (const auto& [name, value] : shop::best_selection(*target, goal)) {
                if (std::find(clicked.begin(), clicked.end(), value) == clicked.end()) {
                    return {click(value), std::nullopt};
                }
            }
            return {click(shop::kBuyNow), std::nullopt};
        }
        case PageType::DetailPage:
            return {click(shop::kPrevPage), std::nullopt};
        case PageType::Done:
            break;
    }
    throw std::logic_error("oracle asked to act on a finished episode");
}

}  // namespace ash::agent
