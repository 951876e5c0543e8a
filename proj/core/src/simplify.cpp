#include "jsonsub/simplify.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/validator.hpp"

#include <algorithm>

namespace jsonsub {

namespace {

json_type node_type(const schema& s) {
    json_type t = json_type::null;
    const json_value* v = s.find("type");
    if (v && v->is_string()) json_type_from_string(v->as_string(), t);
    return t;
}

bool is_typed(const schema& s) {
    const json_value* v = s.find("type");
    return v && v->is_string();
}

bool is_connective(const schema& s, const char* name) {
    return s.is_object() && s.as_object().size() == 1 && s.contains(name);
}

struct simplifier {
    rewrite_limits limits;
    std::size_t steps = 0;

    void bump() {
        if (++steps > limits.step_budget)
            fail(errc::capacity, "simplification exceeded the rewrite step budget");
    }

    schema make_allof(json_array kids) {
        return json_value::object({{"allOf", json_value(std::move(kids))}});
    }
    schema make_anyof(json_array kids) {
        return json_value::object({{"anyOf", json_value(std::move(kids))}});
    }

    schema simp(schema s) {
        bump();
        if (is_top(s) || is_bottom(s)) return s;
        if (is_connective(s, "anyOf")) {
            json_array kids;
            for (const auto& kid : s.at("anyOf").as_array()) kids.push_back(simp(kid));
            return simplify_anyof(std::move(kids));
        }
        if (is_connective(s, "allOf")) {
            json_array kids;
            for (const auto& kid : s.at("allOf").as_array()) kids.push_back(simp(kid));
            return simplify_allof(std::move(kids));
        }
        if (is_connective(s, "not")) {
            const schema& body = s.at("not");
            if (is_connective(body, "not")) return simp(body.at("not")); // double negation
            return simplify_not(simp(body));
        }
        return simp_typed(std::move(s));
    }

    schema simp_typed(schema s) {
        json_type tau = node_type(s);
        // children first
        if (tau == json_type::array) {
            json_array items = s.at("items").as_array();
            for (auto& it : items) it = simp(it);
            s["items"] = json_value(std::move(items));
            s["additionalItems"] = simp(s.at("additionalItems"));
        } else if (tau == json_type::object) {
            json_object pats = s.at("patternProperties").as_object();
            for (auto& [p, sub] : pats) sub = simp(sub);
            s["patternProperties"] = json_value(std::move(pats));
        }

        const json_value* e = s.find("enum");
        if (!e || tau == json_type::boolean) return s;

        // enum members must satisfy the sibling constraints; survivors pin
        // the value exactly, so the siblings can be dropped afterwards
        schema siblings = s;
        siblings.as_object().erase("enum");
        json_array kept;
        for (const auto& v : e->as_array())
            if (validate(v, siblings)) kept.push_back(v);
        if (kept.empty()) return schema_bottom();

        if (kept.size() > 1) {
            json_array branches;
            for (const auto& v : kept) {
                schema single = json_value::object(
                    {{"type", s.at("type")},
                     {"enum", json_value::array({v})}});
                branches.push_back(simp(std::move(single)));
            }
            return simplify_anyof(std::move(branches));
        }

        const json_value& v = kept[0];
        switch (tau) {
        case json_type::null:
            return json_value::object({{"type", json_value(std::string("null"))}});
        case json_type::string:
            return json_value::object(
                {{"type", json_value(std::string("string"))},
                 {"pattern", json_value(pattern_of_lang(regex_lang::literal(v.as_string())))}});
        case json_type::number:
            return json_value::object(
                {{"type", json_value(std::string("number"))},
                 {"minimum", v},
                 {"maximum", v},
                 {"exclusiveMinimum", json_value(false)},
                 {"exclusiveMaximum", json_value(false)}});
        case json_type::array: {
            const json_array& elems = v.as_array();
            json_array items;
            for (const auto& el : elems)
                items.push_back(json_value::object({{"enum", json_value::array({el})}}));
            schema out = json_value::object(
                {{"type", json_value(std::string("array"))},
                 {"minItems", json_value(static_cast<long long>(elems.size()))},
                 {"maxItems", json_value(static_cast<long long>(elems.size()))},
                 {"items", json_value(std::move(items))}});
            return simp(canonicalize(out, limits));
        }
        case json_type::object: {
            const json_object& members = v.as_object();
            json_array required;
            json_object props;
            for (const auto& [k, mv] : members) {
                required.emplace_back(k);
                props.emplace(k, json_value::object({{"enum", json_value::array({mv})}}));
            }
            schema out = json_value::object(
                {{"type", json_value(std::string("object"))},
                 {"additionalProperties", json_value(false)},
                 {"properties", json_value(std::move(props))}});
            if (!required.empty()) out["required"] = json_value(std::move(required));
            return simp(canonicalize(out, limits));
        }
        default:
            return s;
        }
    }

    // ------------------------------------------------------------- negation

    schema simplify_not(schema body) {
        bump();
        if (is_top(body)) return schema_bottom();
        if (is_bottom(body)) return schema_top();
        if (is_connective(body, "not")) return body.at("not"); // double negation
        if (is_connective(body, "anyOf")) {
            json_array kids;
            for (const auto& kid : body.at("anyOf").as_array())
                kids.push_back(simplify_not(kid));
            return simplify_allof(std::move(kids));
        }
        if (is_connective(body, "allOf")) {
            json_array kids;
            for (const auto& kid : body.at("allOf").as_array())
                kids.push_back(simplify_not(kid));
            return simplify_anyof(std::move(kids));
        }

        json_type tau = node_type(body);
        json_array branches;
        // in-type complement where JSON Schema can express it
        switch (tau) {
        case json_type::null:
            break; // complement of null within null is empty
        case json_type::boolean: {
            json_array members;
            const json_array& have = body.at("enum").as_array();
            for (bool b : {true, false}) {
                json_value v(b);
                if (std::find(have.begin(), have.end(), v) == have.end()) members.push_back(v);
            }
            if (!members.empty())
                branches.push_back(json_value::object(
                    {{"type", json_value(std::string("boolean"))},
                     {"enum", json_value(std::move(members))}}));
            break;
        }
        case json_type::string: {
            regex_lang lang = lang_of_pattern(body.at("pattern").as_string(),
                                              limits.repeat_budget).complement();
            if (!lang.is_empty())
                branches.push_back(json_value::object(
                    {{"type", json_value(std::string("string"))},
                     {"pattern", json_value(pattern_of_lang(lang))}}));
            break;
        }
        case json_type::number:
        case json_type::array:
        case json_type::object:
            // no complement form exists; keep the negation next to a positive
            // top so conjunction folding can reason about it later
            branches.push_back(make_allof(
                {typed_top(tau), json_value::object({{"not", body}})}));
            break;
        default:
            fail(errc::meta_invalid, "negation of a non-canonical schema");
        }
        for (json_type other : canonical_types())
            if (other != tau) branches.push_back(typed_top(other));
        return simplify_anyof(std::move(branches));
    }

    // ---------------------------------------------------------- conjunction

    schema intersect_pair(const schema& a, const schema& b) {
        bump();
        json_type tau = node_type(a);
        switch (tau) {
        case json_type::null:
            return json_value::object({{"type", json_value(std::string("null"))}});
        case json_type::boolean: {
            json_array members;
            const json_array& ae = a.at("enum").as_array();
            const json_array& be = b.at("enum").as_array();
            for (const auto& v : ae)
                if (std::find(be.begin(), be.end(), v) != be.end()) members.push_back(v);
            if (members.empty()) return schema_bottom();
            return json_value::object({{"type", json_value(std::string("boolean"))},
                                       {"enum", json_value(std::move(members))}});
        }
        case json_type::string: {
            regex_lang lang = lang_of_pattern(a.at("pattern").as_string(), limits.repeat_budget)
                                  .intersect(lang_of_pattern(b.at("pattern").as_string(),
                                                             limits.repeat_budget));
            if (lang.is_empty()) return schema_bottom();
            return json_value::object({{"type", json_value(std::string("string"))},
                                       {"pattern", json_value(pattern_of_lang(lang))}});
        }
        case json_type::number: {
            numeric_range merged = range_intersect(schema_to_range(a), schema_to_range(b));
            schema out = range_to_schema(merged);
            if (!out.contains("exclusiveMinimum")) out["exclusiveMinimum"] = json_value(false);
            if (!out.contains("exclusiveMaximum")) out["exclusiveMaximum"] = json_value(false);
            return out;
        }
        case json_type::array: {
            const json_array& ai = a.at("items").as_array();
            const json_array& bi = b.at("items").as_array();
            const schema& aa = a.at("additionalItems");
            const schema& ba = b.at("additionalItems");
            std::size_t n = std::max(ai.size(), bi.size());
            json_array items;
            for (std::size_t i = 0; i < n; ++i) {
                const schema& x = i < ai.size() ? ai[i] : aa;
                const schema& y = i < bi.size() ? bi[i] : ba;
                items.push_back(simplify_allof({x, y}));
            }
            schema out = json_value::object(
                {{"type", json_value(std::string("array"))},
                 {"items", json_value(std::move(items))},
                 {"additionalItems", simplify_allof({aa, ba})},
                 {"minItems",
                  std::max(a.at("minItems").as_number(), b.at("minItems").as_number())},
                 {"uniqueItems",
                  json_value(a.at("uniqueItems").as_boolean() || b.at("uniqueItems").as_boolean())}});
            const json_value* am = a.find("maxItems");
            const json_value* bm = b.find("maxItems");
            if (am && bm) out["maxItems"] = std::min(am->as_number(), bm->as_number());
            else if (am) out["maxItems"] = *am;
            else if (bm) out["maxItems"] = *bm;
            return out;
        }
        case json_type::object: {
            json_object pats = a.at("patternProperties").as_object();
            for (const auto& [p, sub] : b.at("patternProperties").as_object()) {
                auto [it, inserted] = pats.emplace(p, sub);
                if (!inserted) it->second = simplify_allof({it->second, sub});
            }
            json_array required;
            if (const json_value* r = a.find("required"))
                required.insert(required.end(), r->as_array().begin(), r->as_array().end());
            if (const json_value* r = b.find("required"))
                required.insert(required.end(), r->as_array().begin(), r->as_array().end());
            std::sort(required.begin(), required.end());
            required.erase(std::unique(required.begin(), required.end()), required.end());
            schema raw = json_value::object(
                {{"type", json_value(std::string("object"))},
                 {"patternProperties", json_value(std::move(pats))},
                 {"minProperties", std::max(a.at("minProperties").as_number(),
                                            b.at("minProperties").as_number())}});
            const json_value* am = a.find("maxProperties");
            const json_value* bm = b.find("maxProperties");
            if (am && bm) raw["maxProperties"] = std::min(am->as_number(), bm->as_number());
            else if (am) raw["maxProperties"] = *am;
            else if (bm) raw["maxProperties"] = *bm;
            if (!required.empty()) raw["required"] = json_value(std::move(required));
            // merged patterns may overlap; re-canonicalizing restores
            // disjointness before the children simplify again
            return simp(canonicalize(raw, limits));
        }
        default:
            return schema_bottom();
        }
    }

    schema simplify_allof(json_array kids) {
        bump();
        std::vector<schema> flat;
        std::deque<schema> work(kids.begin(), kids.end());
        while (!work.empty()) {
            schema kid = std::move(work.front());
            work.pop_front();
            if (is_top(kid)) continue;
            if (is_bottom(kid)) return schema_bottom();
            if (is_connective(kid, "allOf")) {
                for (const auto& sub : kid.at("allOf").as_array()) work.push_back(sub);
                continue;
            }
            flat.push_back(std::move(kid));
        }
        if (flat.empty()) return schema_top();

        // distribute conjunction over any disjunct member
        for (std::size_t i = 0; i < flat.size(); ++i) {
            if (!is_connective(flat[i], "anyOf")) continue;
            json_array branches;
            for (const auto& alt : flat[i].at("anyOf").as_array()) {
                json_array conj;
                for (std::size_t j = 0; j < flat.size(); ++j)
                    conj.push_back(j == i ? alt : flat[j]);
                branches.push_back(simplify_allof(std::move(conj)));
            }
            return simplify_anyof(std::move(branches));
        }

        std::vector<schema> positives, negations;
        for (auto& kid : flat) {
            if (is_connective(kid, "not")) negations.push_back(std::move(kid));
            else positives.push_back(std::move(kid));
        }
        if (positives.empty()) {
            // conjunctions of bare negations expand and redistribute
            json_array expanded;
            for (auto& n : negations) expanded.push_back(simplify_not(n.at("not")));
            return simplify_allof(std::move(expanded));
        }
        json_type tau = node_type(positives[0]);
        for (std::size_t i = 1; i < positives.size(); ++i)
            if (node_type(positives[i]) != tau) return schema_bottom();
        schema merged = positives[0];
        for (std::size_t i = 1; i < positives.size(); ++i)
            merged = intersect_pair(merged, positives[i]);
        if (is_bottom(merged)) return schema_bottom();
        if (!is_typed(merged)) {
            // object intersection re-simplifies into an arbitrary form
            if (negations.empty()) return merged;
            json_array rest;
            rest.push_back(merged);
            for (auto& n : negations) rest.push_back(std::move(n));
            return simplify_allof(std::move(rest));
        }

        json_array members;
        members.push_back(std::move(merged));
        for (auto& n : negations) {
            json_type bt = node_type(n.at("not"));
            if (bt == tau) members.push_back(std::move(n)); // handled by the subtype rules
            // a value of this type can never match a differently-typed body
        }
        if (members.size() == 1) return std::move(members[0]);
        return make_allof(std::move(members));
    }

    // ---------------------------------------------------------- disjunction

    schema union_pair(const schema& a, const schema& b, bool& merged, json_array& out) {
        // appends the merged form to `out` when the pair can be combined
        merged = false;
        if (!is_typed(a) || !is_typed(b)) return schema_top();
        json_type tau = node_type(a);
        if (tau != node_type(b)) return schema_top();
        switch (tau) {
        case json_type::null:
            merged = true;
            out.push_back(json_value::object({{"type", json_value(std::string("null"))}}));
            return schema_top();
        case json_type::boolean: {
            json_array members = a.at("enum").as_array();
            for (const auto& v : b.at("enum").as_array())
                if (std::find(members.begin(), members.end(), v) == members.end())
                    members.push_back(v);
            std::sort(members.begin(), members.end());
            merged = true;
            out.push_back(json_value::object({{"type", json_value(std::string("boolean"))},
                                              {"enum", json_value(std::move(members))}}));
            return schema_top();
        }
        case json_type::string: {
            regex_lang lang = lang_of_pattern(a.at("pattern").as_string(), limits.repeat_budget)
                                  .union_with(lang_of_pattern(b.at("pattern").as_string(),
                                                              limits.repeat_budget));
            merged = true;
            out.push_back(json_value::object({{"type", json_value(std::string("string"))},
                                              {"pattern", json_value(pattern_of_lang(lang))}}));
            return schema_top();
        }
        case json_type::number: {
            numeric_range r1 = schema_to_range(a);
            numeric_range r2 = schema_to_range(b);
            if (!range_overlaps(r1, r2)) return schema_top();
            // the overlap collapses to gcd only when one step divides the
            // other; otherwise the union is not expressible and stays as-is
            if (r1.multiple && r2.multiple && !is_multiple_of(*r2.multiple, *r1.multiple)
                && !is_multiple_of(*r1.multiple, *r2.multiple))
                return schema_top();
            merged = true;
            numeric_range overlap = range_intersect(r1, r2);
            overlap.multiple = rational_gcd(r1.multiple, r2.multiple);
            auto push_piece = [&](const numeric_range& r) {
                if (r.interval_empty() || !r.admits_point()) return;
                schema piece = range_to_schema(r);
                if (!piece.contains("exclusiveMinimum")) piece["exclusiveMinimum"] = json_value(false);
                if (!piece.contains("exclusiveMaximum")) piece["exclusiveMaximum"] = json_value(false);
                out.push_back(std::move(piece));
            };
            push_piece(overlap);
            for (const auto& r : range_subtract(r1, r2)) push_piece(r);
            for (const auto& r : range_subtract(r2, r1)) push_piece(r);
            return schema_top();
        }
        default:
            return schema_top(); // array/object unions are left alone
        }
    }

    schema simplify_anyof(json_array kids) {
        bump();
        std::vector<schema> flat;
        std::deque<schema> work(kids.begin(), kids.end());
        while (!work.empty()) {
            schema kid = std::move(work.front());
            work.pop_front();
            if (is_bottom(kid)) continue;
            if (is_top(kid)) return schema_top();
            if (is_connective(kid, "anyOf")) {
                for (const auto& sub : kid.at("anyOf").as_array()) work.push_back(sub);
                continue;
            }
            flat.push_back(std::move(kid));
        }

        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < flat.size() && !changed; ++i) {
                for (std::size_t j = i + 1; j < flat.size() && !changed; ++j) {
                    json_array replacement;
                    bool merged = false;
                    union_pair(flat[i], flat[j], merged, replacement);
                    if (!merged) continue;
                    bump();
                    flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(j));
                    flat.erase(flat.begin() + static_cast<std::ptrdiff_t>(i));
                    for (auto& r : replacement) flat.push_back(std::move(r));
                    changed = true;
                }
            }
        }

        if (flat.empty()) return schema_bottom();
        if (flat.size() == 1) return std::move(flat[0]);
        json_array out(flat.begin(), flat.end());
        return make_anyof(std::move(out));
    }
};

} // namespace

schema simplify(const schema& s, const rewrite_limits& limits) {
    simplifier sim{limits};
    return sim.simp(s);
}

// ------------------------------------------------------------ grammar check

namespace {

bool simplified_rec(const schema& s, bool inside_allof);

bool simplified_typed(const schema& s) {
    if (!is_canonical(s)) return false;
    json_type tau = node_type(s);
    if (s.contains("enum") && tau != json_type::boolean) return false;
    if (tau == json_type::array) {
        for (const auto& it : s.at("items").as_array())
            if (!simplified_rec(it, false)) return false;
        return simplified_rec(s.at("additionalItems"), false);
    }
    if (tau == json_type::object) {
        for (const auto& [p, sub] : s.at("patternProperties").as_object())
            if (!simplified_rec(sub, false)) return false;
    }
    return true;
}

bool simplified_rec(const schema& s, bool inside_allof) {
    if (!s.is_object()) return false;
    if (is_top(s) || is_bottom(s)) return true;
    const auto& o = s.as_object();
    if (o.size() == 1) {
        auto it = o.begin();
        if (it->first == "anyOf") {
            const json_array& kids = it->second.as_array();
            std::size_t nulls = 0, booleans = 0, strings = 0;
            std::vector<numeric_range> numbers;
            for (const auto& kid : kids) {
                if (!simplified_rec(kid, false)) return false;
                if (is_connective(kid, "anyOf") || is_top(kid) || is_bottom(kid)) return false;
                if (is_typed(kid)) {
                    switch (node_type(kid)) {
                    case json_type::null: ++nulls; break;
                    case json_type::boolean: ++booleans; break;
                    case json_type::string: ++strings; break;
                    case json_type::number: numbers.push_back(schema_to_range(kid)); break;
                    default: break;
                    }
                }
            }
            if (nulls > 1 || booleans > 1 || strings > 1) return false;
            for (std::size_t i = 0; i < numbers.size(); ++i)
                for (std::size_t j = i + 1; j < numbers.size(); ++j) {
                    if (!range_overlaps(numbers[i], numbers[j])) continue;
                    // tolerated only for incompatible steps
                    const auto& m1 = numbers[i].multiple;
                    const auto& m2 = numbers[j].multiple;
                    if (!m1 || !m2) return false;
                    if (is_multiple_of(*m1, *m2) || is_multiple_of(*m2, *m1)) return false;
                }
            return true;
        }
        if (it->first == "allOf") {
            const json_array& kids = it->second.as_array();
            std::size_t positives = 0, negations = 0;
            json_type tau = json_type::null;
            for (const auto& kid : kids) {
                if (is_connective(kid, "not")) {
                    ++negations;
                    const schema& body = kid.at("not");
                    json_type bt = node_type(body);
                    if (bt != json_type::number && bt != json_type::array
                        && bt != json_type::object)
                        return false;
                    if (!simplified_rec(body, false)) return false;
                    if (positives && bt != tau) return false;
                } else {
                    if (++positives > 1) return false;
                    if (!is_typed(kid) || !simplified_typed(kid)) return false;
                    tau = node_type(kid);
                }
            }
            return positives == 1 && negations >= 1;
        }
        if (it->first == "not") return false; // negation survives only inside allOf
    }
    (void)inside_allof;
    return simplified_typed(s);
}

} // namespace

bool is_simplified(const schema& s) { return simplified_rec(s, false); }

} // namespace jsonsub
