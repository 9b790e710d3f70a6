// SPDX-License-Identifier: Apache-2.0
#include "ash/shop/env.hpp"

#include <algorithm>
#include <set>

#include "ash/common/text.hpp"
#include "ash/shop/catalog.hpp"

namespace ash::shop {

namespace {

class PageWriter {
public:
    explicit PageWriter(const GoalSpec& goal) { line("Instruction: " + goal.instruction_text); }

    void line(const std::string& s) {
        text_ += s;
        text_.push_back('\n');
    }
    void clickable(std::string_view label) {
        text_.push_back('[');
        text_.append(label);
        text_ += "]\n";
        labels_.emplace_back(label);
    }

    Observation finish(PageType type, const GoalSpec& goal) {
        if (!text_.empty() && text_.back() == '\n') text_.pop_back();
        return Observation{std::move(text_), type, std::move(labels_), goal.instruction_text};
    }

private:
    std::string text_;
    std::vector<std::string> labels_;
};

std::string describe_selection(const SelectedOptions& selected) {
    if (selected.empty()) return "Selected: none";
    std::vector<std::string> parts;
    for (const auto& [k, v] : selected) parts.push_back(k + "=" + v);
    return "Selected: " + join(parts, ", ");
}

struct PageSlice {
    std::vector<std::string> ids;
    std::size_t total = 0;
    bool has_prev = false;
    bool has_next = false;
};

PageSlice results_slice(const Catalog& catalog, const ResultsPage& page) {
    std::vector<std::string> ranked;
    try {
        ranked = search_rank(catalog, page.query);
    } catch (const EmptyQuery&) {
    }
    PageSlice s;
    s.total = ranked.size();
    auto begin = std::min(ranked.size(), page.page_index * kResultsPerPage);
    auto end = std::min(ranked.size(), begin + kResultsPerPage);
    s.ids.assign(ranked.begin() + static_cast<std::ptrdiff_t>(begin), ranked.begin() + static_cast<std::ptrdiff_t>(end));
    s.has_prev = page.page_index > 0;
    s.has_next = end < ranked.size();
    return s;
}

Observation render_search(const GoalSpec& goal) {
    PageWriter w(goal);
    w.clickable(kSearchLabel);
    return w.finish(PageType::SearchPage, goal);
}

Observation render_results(const ResultsPage& page, const Catalog& catalog, const GoalSpec& goal) {
    auto slice = results_slice(catalog, page);
    PageWriter w(goal);
    w.clickable(kBackToSearch);
    if (slice.total == 0) {
        w.line("No results found.");
        return w.finish(PageType::ResultsPage, goal);
    }
    w.line("Page " + std::to_string(page.page_index + 1) + " (Total results: " + std::to_string(slice.total) + ")");
    if (slice.has_prev) w.clickable(kPrevPage);
    if (slice.has_next) w.clickable(kNextPage);
    for (const auto& id : slice.ids) {
        const auto& p = catalog.at(id);
        w.clickable(p.title);
        w.line("$" + p.price.to_string());
        w.line(p.id);
    }
    return w.finish(PageType::ResultsPage, goal);
}

Observation render_item(const ItemPage& page, const Catalog& catalog, const GoalSpec& goal) {
    const auto& p = catalog.at(page.product_id);
    PageWriter w(goal);
    w.clickable(kBackToSearch);
    w.clickable(kPrevPage);
    w.line(p.title);
    w.line("Price: $" + p.price.to_string());
    for (const auto& [name, values] : p.options) {
        w.line(name + ":");
        for (const auto& v : values) w.clickable(v);
    }
    w.line(describe_selection(page.selected_options));
    w.clickable(kDescription);
    w.clickable(kFeatures);
    w.clickable(kBuyNow);
    return w.finish(PageType::ItemPage, goal);
}

Observation render_detail(const DetailPage& page, const Catalog& catalog, const GoalSpec& goal) {
    const auto& p = catalog.at(page.product_id);
    PageWriter w(goal);
    w.clickable(kBackToSearch);
    w.clickable(kPrevPage);
    if (page.kind == DetailKind::Description) {
        w.line("Description:");
        w.line(p.description);
    } else {
        w.line("Features:");
        for (const auto& f : p.features) w.line("- " + f);
    }
    return w.finish(PageType::DetailPage, goal);
}

Observation render_done(const Done& page, const Catalog& catalog, const GoalSpec& goal) {
    const auto& p = catalog.at(page.product_id);
    PageWriter w(goal);
    w.line("Thank you for shopping with us!");
    w.line("Purchased: " + p.title);
    w.line(describe_selection(page.selected_options));
    return w.finish(PageType::Done, goal);
}

StepOutcome invalid(const PageState& state, const Catalog& catalog, const GoalSpec& goal) {
    auto obs = render(state, catalog, goal);
    obs.text = std::string(kInvalidBanner) + "\n" + obs.text;
    return StepOutcome{state, std::move(obs), false, false, std::nullopt};
}

StepOutcome moved(PageState next, const Catalog& catalog, const GoalSpec& goal) {
    auto obs = render(next, catalog, goal);
    return StepOutcome{std::move(next), std::move(obs), true, false, std::nullopt};
}

PageState click_on_results(const ResultsPage& page, const std::string& label, const Catalog& catalog) {
    if (label == kBackToSearch) return SearchPage{};
    if (label == kPrevPage) return ResultsPage{page.query, page.page_index - 1};
    if (label == kNextPage) return ResultsPage{page.query, page.page_index + 1};
    for (const auto& id : results_slice(catalog, page).ids) {
        if (catalog.at(id).title == label) return ItemPage{id, {}, page};
    }
    throw std::logic_error("results label without a product: " + label);
}

PageState click_on_item(const ItemPage& page, const std::string& label, const Catalog& catalog) {
    if (label == kBackToSearch) return SearchPage{};
    if (label == kPrevPage) {
        if (page.origin) return *page.origin;
        return SearchPage{};
    }
    if (label == kDescription) return DetailPage{page.product_id, DetailKind::Description, page.selected_options, page.origin};
    if (label == kFeatures) return DetailPage{page.product_id, DetailKind::Features, page.selected_options, page.origin};
    if (label == kBuyNow) return Done{page.product_id, page.selected_options};
    const auto& p = catalog.at(page.product_id);
    for (const auto& [name, values] : p.options) {
        if (std::find(values.begin(), values.end(), label) != values.end()) {
            ItemPage next = page;
            next.selected_options[name] = label;
            return next;
        }
    }
    throw std::logic_error("item label without an option: " + label);
}

}  // namespace

std::pair<PageState, Observation> reset(const Catalog& catalog, const GoalSpec& goal) {
    PageState s = SearchPage{};
    return {s, render(s, catalog, goal)};
}

Observation render(const PageState& state, const Catalog& catalog, const GoalSpec& goal) {
    return std::visit(
        [&](const auto& page) -> Observation {
            using T = std::decay_t<decltype(page)>;
            if constexpr (std::is_same_v<T, SearchPage>) return render_search(goal);
            else if constexpr (std::is_same_v<T, ResultsPage>) return render_results(page, catalog, goal);
            else if constexpr (std::is_same_v<T, ItemPage>) return render_item(page, catalog, goal);
            else if constexpr (std::is_same_v<T, DetailPage>) return render_detail(page, catalog, goal);
            else return render_done(page, catalog, goal);
        },
        state);
}

StepOutcome step(const PageState& state, const Action& action, const Catalog& catalog, const GoalSpec& goal) {
    if (std::holds_alternative<Done>(state)) throw SteppedAfterDone();

    if (std::holds_alternative<Think>(action)) {
        Observation obs{std::string(kThinkResponse), page_type_of(state), {}, goal.instruction_text};
        return StepOutcome{state, std::move(obs), true, false, std::nullopt};
    }

    auto current = render(state, catalog, goal);
    auto verdict = validate(action, current);
    if (!verdict.valid) return invalid(state, catalog, goal);

    if (const auto* s = std::get_if<Search>(&action)) {
        return moved(ResultsPage{s->query, 0}, catalog, goal);
    }

    const auto& label = *verdict.canonical_label;
    PageState next = std::visit(
        [&](const auto& page) -> PageState {
            using T = std::decay_t<decltype(page)>;
            if constexpr (std::is_same_v<T, SearchPage>) {
                return page;
            } else if constexpr (std::is_same_v<T, ResultsPage>) {
                return click_on_results(page, label, catalog);
            } else if constexpr (std::is_same_v<T, ItemPage>) {
                return click_on_item(page, label, catalog);
            } else if constexpr (std::is_same_v<T, DetailPage>) {
                if (label == kBackToSearch) return SearchPage{};
                return ItemPage{page.product_id, page.selected_options, page.origin};
            } else {
                return page;
            }
        },
        state);

    if (const auto* done = std::get_if<Done>(&next)) {
        auto value = score(Purchase{done->product_id, done->selected_options}, goal, catalog);
        auto obs = render(next, catalog, goal);
        return StepOutcome{std::move(next), std::move(obs), true, true, value};
    }
    return moved(std::move(next), catalog, goal);
}

std::vector<std::string> search_rank(const Catalog& catalog, std::string_view query) {
    auto q = tokenize(query);
    std::set<std::string> qset(q.begin(), q.end());
    if (qset.empty()) throw EmptyQuery(std::string(query));

    std::vector<std::pair<std::size_t, const Product*>> scored;
    for (const auto& p : catalog.products) {
        std::string doc = p.title + " " + p.category;
        for (const auto& a : p.attributes) doc += " " + a;
        auto toks = tokenize(doc);
        std::set<std::string> dset(toks.begin(), toks.end());
        std::size_t hits = 0;
        for (const auto& t : qset) hits += dset.count(t);
        if (hits > 0) scored.emplace_back(hits, &p);
    }
    // The denominator |tokens(query)| is shared, so hit counts order exactly.
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    });
    std::vector<std::string> out;
    out.reserve(scored.size());
    for (const auto& [hits, p] : scored) out.push_back(p->id);
    return out;
}

double score(const Purchase& purchase, const GoalSpec& goal, const Catalog& catalog) {
    const auto& p = catalog.at(purchase.product_id);
    const auto total = goal.component_count();
    if (total == 0 || p.category != goal.target_category) return 0.0;
    std::size_t matched = 0;
    for (const auto& a : goal.required_attributes) matched += p.attributes.count(a);
    for (const auto& [k, v] : goal.required_options) {
        auto it = purchase.selected_options.find(k);
        if (it != purchase.selected_options.end() && it->second == v) ++matched;
    }
    if (goal.price_cap && p.price <= *goal.price_cap) ++matched;
    return static_cast<double>(matched) / static_cast<double>(total);
}

SelectedOptions best_selection(const Product& product, const GoalSpec& goal) {
    SelectedOptions out;
    for (const auto& [k, v] : goal.required_options) {
        auto it = product.options.find(k);
        if (it != product.options.end() && std::find(it->second.begin(), it->second.end(), v) != it->second.end()) {
            out[k] = v;
        }
    }
    return out;
}

}  // namespace ash::shop
