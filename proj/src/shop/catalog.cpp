// SPDX-License-Identifier: Apache-2.0
#include "ash/shop/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ash/common/rng.hpp"
#include "ash/common/text.hpp"
#include "json_fields.hpp"

namespace ash::shop {

using detail::json;

bool is_reserved_label(std::string_view label) {
    for (auto r : {kSearchLabel, kBackToSearch, kNextPage, kPrevPage, kDescription, kFeatures, kBuyNow}) {
        if (iequals(trim(label), r)) return true;
    }
    return false;
}

namespace {

void check_label(const std::string& label, const std::string& path) {
    if (trim(label).empty()) throw ParseError(path, "label is empty");
    if (trim(label) != label) throw ParseError(path, "label has surrounding whitespace");
    if (label.find_first_of("[]\n\r") != std::string::npos) {
        throw ParseError(path, "label may not contain brackets or line breaks");
    }
    if (is_reserved_label(label)) throw ParseError(path, "label collides with a page control: '" + label + "'");
}

Product product_from_json(const json& j, const std::string& path) {
    detail::only_fields(j, path, {"id", "title", "category", "attributes", "options", "price", "description", "features"});
    Product p;
    p.id = detail::string_field(j, path, "id");
    if (p.id.empty()) throw ParseError(path + ".id", "empty id");
    p.title = detail::string_field(j, path, "title");
    check_label(p.title, path + ".title");
    p.category = detail::string_field(j, path, "category");
    p.description = detail::string_field(j, path, "description");
    p.price = detail::price_at(detail::field(j, path, "price"), path + ".price");
    if (p.price.cents() <= 0) throw ParseError(path + ".price", "price must be positive");

    const auto& attrs = detail::field(j, path, "attributes");
    if (!attrs.is_array() || attrs.empty()) throw ParseError(path + ".attributes", "expected a non-empty array");
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        auto a = detail::string_at(attrs[i], path + ".attributes[" + std::to_string(i) + "]");
        if (a.empty() || to_lower(a) != a) {
            throw ParseError(path + ".attributes[" + std::to_string(i) + "]", "attributes must be lowercase and non-empty");
        }
        p.attributes.insert(std::move(a));
    }

    const auto& opts = detail::field(j, path, "options");
    if (!opts.is_object()) throw ParseError(path + ".options", "expected an object");
    for (const auto& [name, values] : opts.items()) {
        auto opath = path + ".options." + name;
        if (!values.is_array() || values.empty()) throw ParseError(opath, "option needs at least one value");
        auto& dst = p.options[name];
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto vpath = opath + "[" + std::to_string(i) + "]";
            auto v = detail::string_at(values[i], vpath);
            check_label(v, vpath);
            dst.push_back(std::move(v));
        }
    }

    const auto& feats = detail::field(j, path, "features");
    if (!feats.is_array()) throw ParseError(path + ".features", "expected an array");
    for (std::size_t i = 0; i < feats.size(); ++i) {
        p.features.push_back(detail::string_at(feats[i], path + ".features[" + std::to_string(i) + "]"));
    }
    return p;
}

nlohmann::ordered_json product_to_json(const Product& p) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["title"] = p.title;
    j["category"] = p.category;
    j["attributes"] = p.attributes;
    nlohmann::ordered_json opts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.options) opts[k] = v;
    j["options"] = opts;
    j["price"] = p.price.to_string();
    j["description"] = p.description;
    j["features"] = p.features;
    return j;
}

}  // namespace

Catalog parse_catalog(std::string_view text) {
    auto doc = detail::parse_document(text);
    const json* list = &doc;
    std::string base = "products";
    if (doc.is_object()) {
        list = &detail::field(doc, "$", "products");
    }
    std::optional<std::uint64_t> seed;
    if (doc.is_object() && doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (!s.is_number_unsigned()) throw ParseError("seed", "expected a non-negative integer");
        seed = s.get<std::uint64_t>();
    }
    if (!list->is_array()) throw ParseError(base, "expected an array of products");

    Catalog catalog;
    catalog.seed = seed;
    for (std::size_t i = 0; i < list->size(); ++i) {
        catalog.products.push_back(product_from_json((*list)[i], base + "[" + std::to_string(i) + "]"));
    }
    std::sort(catalog.products.begin(), catalog.products.end(),
              [](const Product& a, const Product& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < catalog.products.size(); ++i) {
        if (catalog.products[i].id == catalog.products[i - 1].id) throw DuplicateId(catalog.products[i].id);
    }
    return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

std::string serialize_catalog(const Catalog& catalog) {
    nlohmann::ordered_json doc;
    if (catalog.seed) doc["seed"] = *catalog.seed;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : catalog.products) arr.push_back(product_to_json(p));
    doc["products"] = std::move(arr);
    return doc.dump(2) + "\n";
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_catalog(catalog);
}

// ---------------------------------------------------------------------------
// Generator

namespace {

struct OptionGroup {
    std::string name;
    std::vector<std::string> values;
};

struct CategoryVocab {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<OptionGroup> options;
    std::int64_t min_cents;
    std::int64_t max_cents;
    std::vector<std::string> uses;
};

const std::vector<CategoryVocab>& vocabulary() {
    static const std::vector<CategoryVocab> v = {
        {"deodorant",
         {"fruit scent", "aluminum free", "long lasting", "sensitive skin", "natural", "travel size"},
         {{"size", {"small", "medium", "large", "family pack"}},
          {"scent", {"bright citrus", "rose", "lavender", "unscented", "sea breeze"}}},
         399, 2499,
         {"daily freshness", "workouts", "travel"}},
        {"e-reader",
         {"waterproof", "backlit", "lightweight", "high resolution", "long battery life"},
         {{"color", {"black", "white", "slate blue", "sage"}}, {"storage", {"8gb", "16gb", "32gb"}}},
         7999, 32999,
         {"reading at night", "commutes", "the beach"}},
        {"t-shirt",
         {"cotton", "slim fit", "moisture wicking", "machine washable", "crew neck", "organic"},
         {{"size", {"x-small", "small", "medium", "large", "x-large"}},
          {"color", {"black", "white", "heather grey", "navy", "forest green"}}},
         899, 3999,
         {"everyday wear", "the gym", "layering"}},
        {"green tea",
         {"organic", "caffeine free", "loose leaf", "gluten free", "fair trade"},
         {{"flavor", {"jasmine", "mint", "lemon ginger", "original"}}, {"count", {"20 bags", "50 bags", "100 bags"}}},
         499, 2999,
         {"a calm afternoon", "the office", "iced tea"}},
        {"headphones",
         {"wireless", "noise cancelling", "over ear", "foldable", "long battery life"},
         {{"color", {"matte black", "silver", "midnight blue", "rose gold"}}, {"style", {"standard", "pro", "sport"}}},
         2999, 34999,
         {"commutes", "studio monitoring", "gaming"}},
        {"shampoo",
         {"sulfate free", "paraben free", "for dry hair", "color safe", "vegan"},
         {{"size", {"8 fl oz", "12 fl oz", "16 fl oz", "32 fl oz"}},
          {"scent", {"coconut", "argan", "tea tree", "fragrance free"}}},
         599, 3499,
         {"daily washing", "damaged hair", "the whole family"}},
        {"backpack",
         {"water resistant", "laptop compartment", "lightweight", "anti theft", "padded straps"},
         {{"color", {"charcoal", "olive", "navy", "burgundy"}}, {"capacity", {"20 liter", "28 liter", "35 liter"}}},
         1999, 12999,
         {"school", "hiking", "business travel"}},
        {"candle",
         {"soy wax", "long burning", "lead free wick", "hand poured", "non toxic"},
         {{"scent", {"vanilla", "sandalwood", "fresh linen", "pumpkin spice", "eucalyptus"}},
          {"size", {"4 oz", "8 oz", "16 oz"}}},
         799, 4999,
         {"relaxing evenings", "gifting", "the bathroom"}},
        {"coffee maker",
         {"programmable", "stainless steel", "auto shut off", "thermal carafe", "single serve"},
         {{"color", {"black", "brushed steel", "red"}}, {"capacity", {"4 cup", "8 cup", "12 cup"}}},
         2499, 19999,
         {"busy mornings", "small kitchens", "the office"}},
        {"phone case",
         {"shockproof", "slim", "wireless charging compatible", "clear", "kickstand"},
         {{"color", {"clear", "black", "lilac", "mint"}}, {"model", {"model 12", "model 13", "model 14", "model 15"}}},
         599, 4999,
         {"everyday protection", "outdoor use", "showing off your phone"}},
    };
    return v;
}

const std::vector<std::string>& brands() {
    static const std::vector<std::string> b = {"Brightway", "Northfield", "Kestrel", "Lumina", "Oakridge",
                                               "Velora",    "Maple & Co", "Tidewater", "Corvid", "Sunhaven"};
    return b;
}

const std::vector<std::string>& filler_sentences() {
    static const std::vector<std::string> f = {
        "Every unit is inspected before it leaves our warehouse.",
        "Backed by a hassle free 30 day return policy and friendly customer support.",
        "Our team designed it after listening to thousands of customer reviews.",
        "Packaging is made from recycled materials and is fully recyclable.",
        "It makes a thoughtful gift for friends, family and coworkers.",
        "Please allow slight variations in color due to monitor settings.",
        "Proudly designed by a small independent team.",
        "Store in a cool, dry place away from direct sunlight.",
    };
    return f;
}

std::string model_code(Rng& rng) {
    std::string code;
    code.push_back(static_cast<char>('A' + rng.below(26)));
    code.push_back(static_cast<char>('A' + rng.below(26)));
    code.push_back('-');
    code += std::to_string(rng.between(100, 999));
    return code;
}

std::string make_title(const std::string& brand, const std::string& category, const std::set<std::string>& attrs,
                       const std::string& model) {
    std::vector<std::string> a(attrs.begin(), attrs.end());
    return brand + " " + category + ", " + join(a, ", ") + ", model " + model;
}

std::string make_description(const std::string& brand, const CategoryVocab& vocab, const std::set<std::string>& attrs,
                             Rng& rng) {
    std::vector<std::string> a(attrs.begin(), attrs.end());
    std::string d = "This " + vocab.name + " from " + brand + " is " + join(a, " and ") + ". ";
    const auto use_a = rng.pick(vocab.uses);
    const auto use_b = rng.pick(vocab.uses);
    d += "It is a great choice for " + use_a + (use_a == use_b ? "" : " and " + use_b) + ". ";
    for (auto idx : rng.sample_indices(filler_sentences().size(), 3)) {
        d += filler_sentences()[idx] + " ";
    }
    return std::string(trim(d));
}

std::vector<std::string> make_features(const CategoryVocab& vocab, const std::set<std::string>& attrs, Rng& rng) {
    std::vector<std::string> out;
    for (const auto& a : attrs) out.push_back("Designed to be " + a);
    out.push_back("Ideal for " + rng.pick(vocab.uses));
    return out;
}

struct Draft {
    std::string brand;
    std::size_t category = 0;
    std::set<std::string> attributes;
    OptionMap options;
    std::int64_t cents = 0;
};

Draft base_draft(std::size_t category, Rng& rng) {
    const auto& vocab = vocabulary()[category];
    Draft d;
    d.category = category;
    d.brand = rng.pick(brands());
    auto n_attrs = static_cast<std::size_t>(rng.between(2, 3));
    for (auto i : rng.sample_indices(vocab.attributes.size(), n_attrs)) d.attributes.insert(vocab.attributes[i]);
    for (const auto& g : vocab.options) {
        auto k = static_cast<std::size_t>(rng.between(2, static_cast<std::int64_t>(g.values.size())));
        auto picks = rng.sample_indices(g.values.size(), k);
        std::sort(picks.begin(), picks.end());
        auto& dst = d.options[g.name];
        for (auto i : picks) dst.push_back(g.values[i]);
    }
    d.cents = rng.between(vocab.min_cents, vocab.max_cents);
    return d;
}

/// Mutates exactly one attribute or one option group.
void perturb(Draft& d, Rng& rng) {
    const auto& vocab = vocabulary()[d.category];
    std::vector<std::string> unused_attrs;
    for (const auto& a : vocab.attributes) {
        if (!d.attributes.count(a)) unused_attrs.push_back(a);
    }
    if (!unused_attrs.empty() && rng.chance(1, 2)) {
        std::vector<std::string> have(d.attributes.begin(), d.attributes.end());
        d.attributes.erase(rng.pick(have));
        d.attributes.insert(rng.pick(unused_attrs));
        return;
    }
    const auto& group = vocab.options[rng.below(vocab.options.size())];
    auto& values = d.options[group.name];
    std::vector<std::string> missing;
    for (const auto& v : group.values) {
        if (std::find(values.begin(), values.end(), v) == values.end()) missing.push_back(v);
    }
    if (!missing.empty() && (values.size() < 2 || rng.chance(1, 2))) {
        values.erase(values.begin() + static_cast<std::ptrdiff_t>(rng.below(values.size())));
        values.push_back(rng.pick(missing));
    } else {
        values.erase(values.begin() + static_cast<std::ptrdiff_t>(rng.below(values.size())));
    }
    std::vector<std::string> ordered;
    for (const auto& v : group.values) {
        if (std::find(values.begin(), values.end(), v) != values.end()) ordered.push_back(v);
    }
    values = std::move(ordered);
}

}  // namespace

Catalog generate_catalog(std::uint64_t seed, std::size_t n) {
    if (n == 0) throw std::invalid_argument("generate_catalog: n must be >= 1");
    Rng rng(seed);
    Catalog catalog;
    catalog.seed = seed;
    std::set<std::string> titles;
    const auto n_categories = vocabulary().size();
    const auto width = std::max<std::size_t>(5, std::to_string(n).size());

    Draft prev;
    for (std::size_t i = 0; i < n; ++i) {
        Draft d;
        if (i % 2 == 1) {
            d = prev;
            perturb(d, rng);
            d.cents = std::max<std::int64_t>(100, d.cents + rng.between(-300, 300));
        } else {
            d = base_draft((i / 2) % n_categories, rng);
        }
        const auto& vocab = vocabulary()[d.category];

        Product p;
        auto digits = std::to_string(i + 1);
        p.id = "P" + std::string(width - digits.size(), '0') + digits;
        p.category = vocab.name;
        p.attributes = d.attributes;
        p.options = d.options;
        p.price = Price::from_cents(d.cents);
        do {
            p.title = make_title(d.brand, vocab.name, d.attributes, model_code(rng));
        } while (!titles.insert(p.title).second);
        p.description = make_description(d.brand, vocab, d.attributes, rng);
        p.features = make_features(vocab, d.attributes, rng);
        catalog.products.push_back(std::move(p));
        prev = d;
    }
    return catalog;
}

}  // namespace ash::shop
