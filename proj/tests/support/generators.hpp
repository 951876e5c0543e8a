#pragma once

// Random schema and document generators for property and differential tests.
// In exhaustive mode the generated constraints are deliberately paired with
// the oracle universe: every bound, step, pattern, and size that a schema can
// mention has its distinguishing documents inside the universe, so exhaustive
// enumeration over the universe is conclusive for the subtype question.

#include "jsonsub/json_value.hpp"
#include "jsonsub/validator.hpp"

#include <random>
#include <string>
#include <vector>

namespace testgen {

using jsonsub::json_array;
using jsonsub::json_object;
using jsonsub::json_value;
using jsonsub::rational;

struct gen_config {
    bool exhaustive = false; // pair schemas with the oracle universe
    int max_depth = 2;
    bool allow_connectives = true;
    bool allow_negation = true;
    bool allow_oneof = true;
};

inline int pick(std::mt19937& rng, int n) {
    return static_cast<int>(rng() % static_cast<unsigned>(n));
}

inline bool chance(std::mt19937& rng, int percent) { return pick(rng, 100) < percent; }

// pool values are spaced >= 1/2 apart so every open interval between bounds
// contains a quarter-grid universe point
inline const std::vector<rational>& bound_pool() {
    static const std::vector<rational> pool{
        rational(-2), rational(-1), rational(-1, 2), rational(0),
        rational(1, 2), rational(1), rational(3, 2), rational(2), rational(3)};
    return pool;
}

inline const std::vector<rational>& step_pool() {
    static const std::vector<rational> pool{rational(1, 2), rational(1), rational(2)};
    return pool;
}

inline const std::vector<std::string>& pattern_pool() {
    static const std::vector<std::string> pool{
        "a", "b", "ab", "^a", "b$", "^ab?$", "[ab]*", "a+", "(a|b)b", "^(a|bb)$", "^$"};
    return pool;
}

inline const std::vector<std::string>& key_pattern_pool() {
    static const std::vector<std::string> pool{"^a$", "^b$", "a", "[ab]", "^ab$"};
    return pool;
}

// restricted to patterns the exhaustive universe's key set can distinguish
inline const std::vector<std::string>& exhaustive_key_pattern_pool() {
    static const std::vector<std::string> pool{"^a$", "^b$"};
    return pool;
}

inline json_value enum_value(std::mt19937& rng) {
    switch (pick(rng, 9)) {
    case 0: return json_value(nullptr);
    case 1: return json_value(true);
    case 2: return json_value(false);
    case 3: return json_value(rational(0));
    case 4: return json_value(rational(1));
    case 5: return json_value(rational(1, 2));
    case 6: return json_value(std::string(""));
    case 7: return json_value(std::string("a"));
    default: return json_value(std::string("ab"));
    }
}

json_value random_schema(std::mt19937& rng, const gen_config& cfg, int depth = 0);

// the exhaustive oracle's container values cover the coarse pools only
inline const std::vector<rational>& nested_bound_pool() {
    static const std::vector<rational> pool{rational(0), rational(1), rational(3)};
    return pool;
}

inline const std::vector<rational>& nested_step_pool() {
    static const std::vector<rational> pool{rational(1), rational(2)};
    return pool;
}

inline json_value number_schema(std::mt19937& rng, const gen_config& cfg, int depth) {
    const auto& bounds =
        cfg.exhaustive && depth > 0 ? nested_bound_pool() : bound_pool();
    const auto& steps = cfg.exhaustive && depth > 0 ? nested_step_pool() : step_pool();
    json_object s;
    s.emplace("type", json_value(chance(rng, 30) ? std::string("integer")
                                                 : std::string("number")));
    if (chance(rng, 60)) {
        s.emplace("minimum", json_value(bounds[static_cast<std::size_t>(
                                 pick(rng, static_cast<int>(bounds.size())))]));
        if (chance(rng, 30)) s.emplace("exclusiveMinimum", json_value(true));
    }
    if (chance(rng, 60)) {
        s.emplace("maximum", json_value(bounds[static_cast<std::size_t>(
                                 pick(rng, static_cast<int>(bounds.size())))]));
        if (chance(rng, 30)) s.emplace("exclusiveMaximum", json_value(true));
    }
    if (chance(rng, 40))
        s.emplace("multipleOf", json_value(steps[static_cast<std::size_t>(
                                    pick(rng, static_cast<int>(steps.size())))]));
    return json_value(std::move(s));
}

inline const std::vector<std::string>& nested_pattern_pool() {
    static const std::vector<std::string> pool{"a", "b", "^a$", "^$", "a+", "(a|b)b"};
    return pool;
}

inline json_value string_schema(std::mt19937& rng, const gen_config& cfg, int depth) {
    bool nested = cfg.exhaustive && depth > 0;
    const auto& patterns = nested ? nested_pattern_pool() : pattern_pool();
    json_object s;
    s.emplace("type", json_value(std::string("string")));
    if (chance(rng, 70))
        s.emplace("pattern", json_value(patterns[static_cast<std::size_t>(
                                 pick(rng, static_cast<int>(patterns.size())))]));
    if (chance(rng, 40)) s.emplace("minLength", json_value(pick(rng, nested ? 3 : 3)));
    if (cfg.exhaustive || chance(rng, 40))
        s.emplace("maxLength", json_value(nested ? 1 + pick(rng, 2) : 1 + pick(rng, 3)));
    return json_value(std::move(s));
}

inline json_value array_schema(std::mt19937& rng, const gen_config& cfg, int depth) {
    json_object s;
    s.emplace("type", json_value(std::string("array")));
    bool unique = chance(rng, 25);
    if (chance(rng, 60)) {
        if (chance(rng, 50)) {
            s.emplace("items", random_schema(rng, cfg, depth + 1));
        } else {
            json_array items;
            int n = 1 + pick(rng, 2);
            for (int i = 0; i < n; ++i) items.push_back(random_schema(rng, cfg, depth + 1));
            s.emplace("items", json_value(std::move(items)));
            if (chance(rng, 50)) {
                if (chance(rng, 40)) s.emplace("additionalItems", json_value(false));
                else s.emplace("additionalItems", random_schema(rng, cfg, depth + 1));
            }
        }
    }
    int min_items = pick(rng, 3);
    if (unique) min_items = std::min(min_items, 1); // see inhabitation notes
    if (chance(rng, 50)) s.emplace("minItems", json_value(min_items));
    if (cfg.exhaustive || chance(rng, 50))
        s.emplace("maxItems", json_value(std::max(min_items, pick(rng, 3))));
    if (unique) s.emplace("uniqueItems", json_value(true));
    return json_value(std::move(s));
}

inline json_value object_schema(std::mt19937& rng, const gen_config& cfg, int depth) {
    json_object s;
    s.emplace("type", json_value(std::string("object")));
    static const std::vector<std::string> keys{"a", "b"};
    if (chance(rng, 70)) {
        json_object props;
        for (const auto& k : keys)
            if (chance(rng, 55)) props.emplace(k, random_schema(rng, cfg, depth + 1));
        if (!props.empty()) s.emplace("properties", json_value(std::move(props)));
    }
    if (chance(rng, 25)) {
        const auto& pool = cfg.exhaustive ? exhaustive_key_pattern_pool() : key_pattern_pool();
        json_object pats;
        pats.emplace(pool[static_cast<std::size_t>(pick(rng, static_cast<int>(pool.size())))],
                     random_schema(rng, cfg, depth + 1));
        s.emplace("patternProperties", json_value(std::move(pats)));
    }
    if (chance(rng, 40)) {
        json_array req;
        for (const auto& k : keys)
            if (chance(rng, 50)) req.emplace_back(k);
        if (!req.empty()) s.emplace("required", json_value(std::move(req)));
    }
    if (chance(rng, 40)) {
        if (chance(rng, 50)) s.emplace("additionalProperties", json_value(false));
        else s.emplace("additionalProperties", random_schema(rng, cfg, depth + 1));
    }
    // key-availability witnesses beyond the universe keys do not exist, so
    // exhaustive schemas keep the floor at one
    if (chance(rng, 30))
        s.emplace("minProperties", json_value(pick(rng, cfg.exhaustive ? 2 : 3)));
    if (chance(rng, 30)) s.emplace("maxProperties", json_value(pick(rng, 3)));
    if (chance(rng, 25)) {
        json_object deps;
        if (chance(rng, 50)) {
            deps.emplace("a", json_value::array({json_value(std::string("b"))}));
        } else {
            deps.emplace("a", json_value::object(
                                  {{"required", json_value::array(
                                                    {json_value(std::string("b"))})},
                                   {"type", json_value(std::string("object"))}}));
        }
        s.emplace("dependencies", json_value(std::move(deps)));
    }
    return json_value(std::move(s));
}

inline json_value enum_schema(std::mt19937& rng) {
    json_array values;
    int n = 1 + pick(rng, 3);
    for (int i = 0; i < n; ++i) {
        json_value v = enum_value(rng);
        bool dup = false;
        for (const auto& u : values)
            if (u == v) dup = true;
        if (!dup) values.push_back(std::move(v));
    }
    return json_value::object({{"enum", json_value(std::move(values))}});
}

inline json_value random_schema(std::mt19937& rng, const gen_config& cfg, int depth) {
    bool at_leaf = depth >= cfg.max_depth;
    int roll = pick(rng, 100);
    if (!at_leaf && cfg.allow_connectives && roll < 18) {
        switch (pick(rng, cfg.allow_oneof ? 4 : 3)) {
        case 0: {
            json_array kids;
            int n = 2 + pick(rng, 2);
            for (int i = 0; i < n; ++i) kids.push_back(random_schema(rng, cfg, depth + 1));
            return json_value::object({{"anyOf", json_value(std::move(kids))}});
        }
        case 1: {
            json_array kids;
            for (int i = 0; i < 2; ++i) kids.push_back(random_schema(rng, cfg, depth + 1));
            return json_value::object({{"allOf", json_value(std::move(kids))}});
        }
        case 2: {
            if (!cfg.allow_negation) break;
            // negation bodies stay primitive so verdicts remain decidable
            gen_config leaf = cfg;
            leaf.allow_connectives = false;
            json_value body;
            switch (pick(rng, 3)) {
            case 0: body = string_schema(rng, leaf, depth); break;
            case 1: body = json_value::object({{"type", json_value(std::string("null"))}});
                break;
            default: body = json_value::object({{"type", json_value(std::string("boolean"))}});
            }
            return json_value::object({{"not", body}});
        }
        default: {
            json_array kids;
            for (int i = 0; i < 2; ++i) kids.push_back(random_schema(rng, cfg, depth + 1));
            return json_value::object({{"oneOf", json_value(std::move(kids))}});
        }
        }
    }
    if (roll < 26 && !at_leaf) return enum_schema(rng);
    switch (pick(rng, at_leaf ? 5 : 7)) {
    case 0: return json_value::object({{"type", json_value(std::string("null"))}});
    case 1: return json_value::object({{"type", json_value(std::string("boolean"))}});
    case 2: return number_schema(rng, cfg, depth);
    case 3: return string_schema(rng, cfg, depth);
    case 4: {
        // list-valued type exercises the disjunction split
        json_array types;
        types.emplace_back(std::string("string"));
        types.emplace_back(std::string("null"));
        return json_value::object({{"type", json_value(std::move(types))}});
    }
    case 5: return array_schema(rng, cfg, depth);
    default: return object_schema(rng, cfg, depth);
    }
}

// Oracle universe aligned with the pools above. Top-level numbers cover the
// quarter grid out to +/-5 (all bounds, their midpoints, and points beyond
// either end); container values carry the same witnesses in reduced form so
// the universe stays around three thousand documents.
inline jsonsub::universe_budget oracle_budget() {
    jsonsub::universe_budget budget;
    budget.alphabet = "ab";
    budget.max_string_length = 3;
    budget.numbers.clear();
    for (rational x(-5); x <= rational(5); x += rational(1, 4)) budget.numbers.push_back(x);
    budget.max_array_length = 2;
    // "ab" stands in for every key outside the declared property names
    budget.object_keys = {"a", "b", "ab"};
    budget.depth = 1;
    // hitting set for the nested pools: a value inside and outside every
    // combination of nested bounds, steps, lengths, and patterns
    budget.container_values.emplace_back(nullptr);
    budget.container_values.emplace_back(true);
    budget.container_values.emplace_back(false);
    for (const rational& x :
         {rational(-2), rational(-1), rational(0), rational(1, 2), rational(1),
          rational(3, 2), rational(2), rational(3), rational(7, 2), rational(4)})
        budget.container_values.emplace_back(x);
    for (const char* w : {"", "a", "b", "aa", "ab", "ba", "bb"})
        budget.container_values.emplace_back(std::string(w));
    return budget;
}

// a quick random document for differential tests (canonicalization agreement)
inline json_value random_document(std::mt19937& rng, int depth = 0) {
    int roll = pick(rng, depth >= 2 ? 8 : 10);
    switch (roll) {
    case 0: return json_value(nullptr);
    case 1: return json_value(true);
    case 2: return json_value(false);
    case 3: return json_value(bound_pool()[static_cast<std::size_t>(
                pick(rng, static_cast<int>(bound_pool().size())))]);
    case 4: return json_value(rational(pick(rng, 9) - 4));
    case 5: {
        static const std::vector<std::string> words{"", "a", "b", "ab", "ba", "aa",
                                                    "abc", "aab"};
        return json_value(words[static_cast<std::size_t>(
            pick(rng, static_cast<int>(words.size())))]);
    }
    case 6: return json_value(rational(pick(rng, 7), 2));
    case 7: return json_value(rational(pick(rng, 11), 4));
    case 8: {
        json_array a;
        int n = pick(rng, 3);
        for (int i = 0; i < n; ++i) a.push_back(random_document(rng, depth + 1));
        return json_value(std::move(a));
    }
    default: {
        json_object o;
        static const std::vector<std::string> keys{"a", "b", "ab"};
        for (const auto& k : keys)
            if (chance(rng, 40)) o.emplace(k, random_document(rng, depth + 1));
        return json_value(std::move(o));
    }
    }
}

} // namespace testgen
