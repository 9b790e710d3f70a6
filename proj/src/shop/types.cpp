// SPDX-License-Identifier: Apache-2.0
#include "ash/shop/types.hpp"

#include <algorithm>

namespace ash {

std::string_view to_string(PageType t) {
    switch (t) {
        case PageType::SearchPage: return "SearchPage";
        case PageType::ResultsPage: return "ResultsPage";
        case PageType::ItemPage: return "ItemPage";
        case PageType::DetailPage: return "DetailPage";
        case PageType::Done: return "Done";
    }
    return "";
}

std::optional<PageType> page_type_from_string(std::string_view s) {
    for (auto t : {PageType::SearchPage, PageType::ResultsPage, PageType::ItemPage, PageType::DetailPage,
                   PageType::Done}) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

PageType page_type_of(const PageState& s) {
    return static_cast<PageType>(s.index());
}

const Product* Catalog::find(std::string_view id) const {
    auto it = std::lower_bound(products.begin(), products.end(), id,
                               [](const Product& p, std::string_view key) { return p.id < key; });
    if (it == products.end() || it->id != id) return nullptr;
    return &*it;
}

const Product& Catalog::at(std::string_view id) const {
    if (const auto* p = find(id)) return *p;
    throw UnknownProductId(std::string(id));
}

}  // namespace ash
