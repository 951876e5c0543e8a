#include "jsonsub/canonical.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/range.hpp"

#include <algorithm>

namespace jsonsub {

std::string pattern_of_lang(regex_lang lang) {
    std::string wrapped = "^(" + lang.to_pattern() + ")$";
    // serialized patterns must compile back to the identical term so
    // canonicalization is textually idempotent
    register_pattern(wrapped, anchor_mode::partial_match, lang);
    register_pattern(wrapped, anchor_mode::full_match, lang);
    return wrapped;
}

regex_lang lang_of_pattern(const std::string& pattern, std::size_t repeat_budget) {
    return compile_pattern(pattern, anchor_mode::partial_match, repeat_budget);
}

const std::vector<json_type>& canonical_types() {
    static const std::vector<json_type> types{
        json_type::null,  json_type::boolean, json_type::number,
        json_type::string, json_type::array,  json_type::object};
    return types;
}

namespace {

const std::vector<std::string>& all_type_names() {
    static const std::vector<std::string> names{
        "boolean", "null", "number", "integer", "string", "array", "object"};
    return names;
}

bool member_matches_type(const json_value& v, json_type t) {
    switch (t) {
    case json_type::number: return v.is_number();
    case json_type::integer: return v.is_number() && is_integral(v.as_number());
    default: return type_of(v) == t;
    }
}

struct canonicalizer {
    rewrite_limits limits;
    std::size_t steps = 0;

    void bump() {
        if (++steps > limits.step_budget)
            fail(errc::capacity, "canonicalization exceeded the rewrite step budget");
    }

    schema make_allof(json_array branches) {
        return json_value::object({{"allOf", json_value(std::move(branches))}});
    }
    schema make_anyof(json_array branches) {
        return json_value::object({{"anyOf", json_value(std::move(branches))}});
    }

    schema canon(schema s) {
        bump();
        if (!s.is_object())
            fail(errc::meta_invalid, "canonicalize requires schema objects");
        if (is_top(s) || is_bottom(s)) return s;
        if (s.contains("$ref"))
            fail(errc::ref_target_missing, "canonicalize requires a ref-free schema");

        // a connective mixed with anything else splits into a conjunction
        static const std::vector<std::string> connectives{"enum", "anyOf", "allOf", "oneOf",
                                                          "not"};
        for (const auto& c : connectives) {
            if (!s.contains(c)) continue;
            std::set<std::string> rest = dom(s);
            rest.erase(c);
            if (c == "enum") {
                // a typed node keeps enum next to its own keywords
                rest.erase("type");
                const json_value* t = s.find("type");
                json_type tau;
                if (t && t->is_string() && json_type_from_string(t->as_string(), tau))
                    for (const auto& k : keywords_for(tau)) rest.erase(k);
            }
            if (rest.empty()) continue;
            json_object lhs;
            lhs.emplace(c, s.at(c));
            json_object rhs;
            for (const auto& [k, v] : s.as_object())
                if (k != c) rhs.emplace(k, v);
            return canon(make_allof({json_value(std::move(lhs)), json_value(std::move(rhs))}));
        }

        // list-valued type becomes a disjunction of single-typed copies
        const json_value* t = s.find("type");
        if (t && t->is_array()) {
            json_array branches;
            for (const auto& name : t->as_array()) {
                schema copy = s;
                copy["type"] = name;
                branches.push_back(std::move(copy));
            }
            return canon(make_anyof(std::move(branches)));
        }

        // no type, enum, or connective: assume every JSON type
        if (!t && !s.contains("enum") && !s.contains("anyOf") && !s.contains("allOf")
            && !s.contains("oneOf") && !s.contains("not")) {
            json_array names;
            for (const auto& n : all_type_names()) names.emplace_back(n);
            s["type"] = json_value(std::move(names));
            return canon(std::move(s));
        }

        // pure connective nodes
        if (const json_value* v = s.find("anyOf")) {
            json_array kids;
            for (const auto& kid : v->as_array()) kids.push_back(canon(kid));
            return make_anyof(std::move(kids));
        }
        if (const json_value* v = s.find("allOf")) {
            json_array kids;
            for (const auto& kid : v->as_array()) kids.push_back(canon(kid));
            return make_allof(std::move(kids));
        }
        if (const json_value* v = s.find("oneOf")) {
            const json_array& alts = v->as_array();
            if (alts.size() > limits.oneof_branch_limit)
                fail(errc::capacity, "oneOf with " + std::to_string(alts.size())
                                         + " branches exceeds the expansion limit");
            json_array branches;
            for (std::size_t i = 0; i < alts.size(); ++i) {
                json_array conj;
                for (std::size_t j = 0; j < alts.size(); ++j) {
                    if (i == j) conj.push_back(alts[j]);
                    else conj.push_back(json_value::object({{"not", alts[j]}}));
                }
                branches.push_back(make_allof(std::move(conj)));
            }
            return canon(make_anyof(std::move(branches)));
        }
        if (const json_value* v = s.find("not")) {
            schema body = canon(*v);
            if (is_top(body)) return schema_bottom();
            if (is_bottom(body)) return schema_top();
            return json_value::object({{"not", std::move(body)}});
        }

        // untyped enum: tag homogeneous enums, split heterogeneous ones
        const json_value* e = s.find("enum");
        if (e && !t) {
            const json_array& values = e->as_array();
            json_type t0 = type_of(values[0], true);
            bool homogeneous = std::all_of(values.begin(), values.end(), [&](const auto& v) {
                return type_of(v, true) == t0;
            });
            if (homogeneous) {
                s["type"] = json_value(std::string(to_string(t0)));
            } else {
                json_array same, rest;
                for (const auto& v : values)
                    (type_of(v, true) == t0 ? same : rest).push_back(v);
                schema first = s, second = s;
                first["enum"] = json_value(std::move(same));
                first["type"] = json_value(std::string(to_string(t0)));
                second["enum"] = json_value(std::move(rest));
                return canon(make_anyof({std::move(first), std::move(second)}));
            }
            t = s.find("type");
        }

        json_type tau;
        if (!t->is_string() || !json_type_from_string(t->as_string(), tau))
            fail(errc::meta_invalid, "unknown type name in schema");

        // enum members that cannot be of this type contribute nothing
        if ((e = s.find("enum"))) {
            json_array kept;
            for (const auto& v : e->as_array())
                if (member_matches_type(v, tau)) kept.push_back(v);
            if (kept.empty()) return schema_bottom();
            // integral and fractional numbers split like any heterogeneous enum
            json_type t0 = type_of(kept[0], true);
            bool mixed = std::any_of(kept.begin(), kept.end(), [&](const auto& v) {
                return type_of(v, true) != t0;
            });
            if (mixed) {
                json_array same, rest;
                for (const auto& v : kept)
                    (type_of(v, true) == t0 ? same : rest).push_back(v);
                schema first = s, second = s;
                first["enum"] = json_value(std::move(same));
                first["type"] = json_value(std::string(to_string(t0)));
                second["enum"] = json_value(std::move(rest));
                return canon(make_anyof({std::move(first), std::move(second)}));
            }
            s["enum"] = json_value(std::move(kept));
        }

        // integer is number restricted to multiples of one
        if (tau == json_type::integer) {
            bump();
            std::optional<rational> m;
            if (const json_value* mv = s.find("multipleOf")) m = mv->as_number();
            s["type"] = json_value(std::string("number"));
            s["multipleOf"] =
                json_value(*rational_lcm(rational(1), m ? m : std::optional<rational>(rational(1))));
            tau = json_type::number;
        }

        // strip keywords that do not apply to this type
        {
            const auto& kws = keywords_for(tau);
            json_object kept;
            for (const auto& [k, v] : s.as_object()) {
                if (k == "type" || k == "enum"
                    || std::find(kws.begin(), kws.end(), k) != kws.end())
                    kept.emplace(k, v);
            }
            s = json_value(std::move(kept));
        }

        // fill defaults (strings are rewritten to a single pattern instead)
        if (tau != json_type::string) {
            for (const auto& k : keywords_for(tau)) {
                if (s.contains(k)) continue;
                if (const json_value* d = keyword_default(k)) s[k] = *d;
            }
            if (tau == json_type::boolean && !s.contains("enum"))
                s["enum"] = json_value::array({json_value(true), json_value(false)});
        }

        switch (tau) {
        case json_type::string: return canon_string(std::move(s));
        case json_type::array: return canon_array(std::move(s));
        case json_type::object: return canon_object(std::move(s));
        default: return s;
        }
    }

    // minLength/maxLength fold into the pattern; the canonical node carries
    // only `pattern` (wrapped so its raw reading is unchanged)
    schema canon_string(schema s) {
        bump();
        regex_lang lang = regex_lang::universe();
        if (const json_value* p = s.find("pattern"))
            lang = compile_pattern(p->as_string(), anchor_mode::partial_match,
                                   limits.repeat_budget);
        auto as_size = [&](const json_value& v) {
            if (v.as_number() > rational(static_cast<long long>(limits.repeat_budget)))
                fail(errc::unsupported_pattern, "string length bound exceeds the expansion budget");
            return static_cast<std::size_t>(
                boost::multiprecision::numerator(v.as_number()).convert_to<unsigned long long>());
        };
        std::size_t min_len = 0;
        std::optional<std::size_t> max_len;
        if (const json_value* m = s.find("minLength")) min_len = as_size(*m);
        if (const json_value* m = s.find("maxLength")) max_len = as_size(*m);
        if (min_len > 0 || max_len)
            lang = lang.intersect(regex_lang::length_between(min_len, max_len));
        schema out = json_value::object(
            {{"type", json_value(std::string("string"))},
             {"pattern", json_value(pattern_of_lang(lang))}});
        if (const json_value* e = s.find("enum")) out["enum"] = *e;
        return out;
    }

    schema canon_array(schema s) {
        bump();
        json_value items = s.at("items");
        json_value extra = s.at("additionalItems");
        if (items.is_object()) {
            // single-schema items constrains every position
            extra = items;
            items = json_value(json_array{});
        }
        if (extra.is_boolean())
            extra = extra.as_boolean() ? schema_top() : schema_bottom();
        json_array canon_items;
        for (const auto& it : items.as_array()) canon_items.push_back(canon(it));
        s["items"] = json_value(std::move(canon_items));
        s["additionalItems"] = canon(std::move(extra));
        return s;
    }

    schema canon_object(schema s) {
        bump();
        // dependencies first: they expand into required/properties machinery
        if (const json_value* deps = s.find("dependencies")) {
            json_object d = deps->as_object();
            for (auto& [k, v] : d) {
                if (v.is_array()) {
                    json_array required = v.as_array();
                    v = json_value::object(
                        {{"type", json_value(std::string("object"))},
                         {"required", json_value(std::move(required))}});
                }
            }
            if (!d.empty()) {
                auto it = d.begin();
                std::string key = it->first;
                schema dep_schema = it->second;
                d.erase(it);
                schema inner = s;
                inner["dependencies"] = json_value(std::move(d));
                schema absent = json_value::object(
                    {{"type", json_value(std::string("object"))},
                     {"properties",
                      json_value::object({{key, schema_bottom()}})}});
                schema guard = make_anyof({std::move(dep_schema), std::move(absent)});
                return canon(make_allof({std::move(inner), std::move(guard)}));
            }
            s.as_object().erase("dependencies");
        }

        if (s.at("additionalProperties").is_boolean())
            s["additionalProperties"] =
                s.at("additionalProperties").as_boolean() ? schema_top() : schema_bottom();

        // Compile properties/additionalProperties away into patternProperties.
        // Property names enter as exact-match languages; keys matched by both
        // a property and a pattern must satisfy both schemas, which the
        // disjointness splitting below produces as a conjunction class.
        struct entry {
            regex_lang lang;
            schema sub;
        };
        std::vector<entry> entries;
        regex_lang matched = regex_lang::empty();
        for (const auto& [k, sub] : s.at("properties").as_object()) {
            regex_lang name = regex_lang::literal(k);
            matched = matched.union_with(name);
            entries.push_back({name, canon(sub)});
        }
        for (const auto& [p, sub] : s.at("patternProperties").as_object()) {
            regex_lang pl =
                compile_pattern(p, anchor_mode::partial_match, limits.repeat_budget);
            matched = matched.union_with(pl);
            if (!pl.is_empty()) entries.push_back({pl, canon(sub)});
        }
        regex_lang fallback = matched.complement();
        if (!fallback.is_empty()) entries.push_back({fallback, canon(s.at("additionalProperties"))});

        // split overlapping patterns until all are pairwise disjoint
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < entries.size() && !changed; ++i) {
                for (std::size_t j = i + 1; j < entries.size() && !changed; ++j) {
                    regex_lang common = entries[i].lang.intersect(entries[j].lang);
                    if (common.is_empty()) continue;
                    bump();
                    entry a = entries[i], b = entries[j];
                    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(j));
                    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(i));
                    regex_lang only_a = a.lang.subtract(b.lang);
                    regex_lang only_b = b.lang.subtract(a.lang);
                    entries.push_back({common, make_allof({a.sub, b.sub})});
                    if (!only_a.is_empty()) entries.push_back({only_a, a.sub});
                    if (!only_b.is_empty()) entries.push_back({only_b, b.sub});
                    changed = true;
                }
            }
        }

        json_object pats;
        for (const auto& en : entries) {
            std::string p = pattern_of_lang(en.lang);
            auto [it, inserted] = pats.emplace(p, en.sub);
            if (!inserted) it->second = make_allof({it->second, en.sub});
        }
        s.as_object().erase("properties");
        s.as_object().erase("additionalProperties");
        s["patternProperties"] = json_value(std::move(pats));
        if (const json_value* req = s.find("required")) {
            json_array sorted = req->as_array();
            std::sort(sorted.begin(), sorted.end());
            s["required"] = json_value(std::move(sorted));
        }
        return s;
    }
};

} // namespace

schema canonicalize(const schema& s, const rewrite_limits& limits) {
    canonicalizer c{limits};
    return c.canon(s);
}

schema typed_top(json_type t) {
    static std::map<json_type, schema> cache = [] {
        std::map<json_type, schema> m;
        for (json_type ct : canonical_types()) {
            schema raw = json_value::object({{"type", json_value(std::string(to_string(ct)))}});
            m.emplace(ct, canonicalize(raw));
        }
        return m;
    }();
    return cache.at(t);
}

// ----------------------------------------------------------- grammar check

namespace {

bool canonical_rec(const schema& s);

bool canonical_typed(const schema& s) {
    const json_value* t = s.find("type");
    json_type tau;
    if (!t || !t->is_string() || !json_type_from_string(t->as_string(), tau)) return false;
    if (tau == json_type::integer) return false;

    const auto& kws = keywords_for(tau);
    for (const auto& [k, v] : s.as_object()) {
        if (k == "type" || k == "enum") continue;
        if (std::find(kws.begin(), kws.end(), k) == kws.end()) return false;
    }
    if (const json_value* e = s.find("enum")) {
        if (!e->is_array() || e->as_array().empty()) return false;
        for (const auto& v : e->as_array())
            if (!member_matches_type(v, tau)) return false;
    }

    switch (tau) {
    case json_type::null:
        return true;
    case json_type::boolean:
        return s.contains("enum");
    case json_type::string: {
        const json_value* p = s.find("pattern");
        if (!p || !p->is_string()) return false;
        if (s.contains("minLength") || s.contains("maxLength")) return false;
        return true;
    }
    case json_type::number:
        return s.contains("exclusiveMinimum") && s.contains("exclusiveMaximum");
    case json_type::array: {
        const json_value* items = s.find("items");
        const json_value* extra = s.find("additionalItems");
        if (!items || !items->is_array()) return false;
        if (!extra || !extra->is_object()) return false;
        for (const auto& it : items->as_array())
            if (!canonical_rec(it)) return false;
        if (!canonical_rec(*extra)) return false;
        return s.contains("minItems") && s.contains("uniqueItems");
    }
    case json_type::object: {
        if (s.contains("properties") || s.contains("additionalProperties")
            || s.contains("dependencies"))
            return false;
        const json_value* pats = s.find("patternProperties");
        if (!pats || !pats->is_object()) return false;
        std::vector<regex_lang> langs;
        for (const auto& [p, sub] : pats->as_object()) {
            if (!canonical_rec(sub)) return false;
            langs.push_back(lang_of_pattern(p));
        }
        for (std::size_t i = 0; i < langs.size(); ++i)
            for (std::size_t j = i + 1; j < langs.size(); ++j)
                if (!langs[i].intersect(langs[j]).is_empty()) return false;
        return s.contains("minProperties");
    }
    default:
        return false;
    }
}

bool canonical_rec(const schema& s) {
    if (!s.is_object()) return false;
    if (is_top(s) || is_bottom(s)) return true;
    const auto& o = s.as_object();
    if (o.size() == 1) {
        auto it = o.begin();
        if (it->first == "anyOf" || it->first == "allOf") {
            if (!it->second.is_array() || it->second.as_array().empty()) return false;
            for (const auto& kid : it->second.as_array())
                if (!canonical_rec(kid)) return false;
            return true;
        }
        if (it->first == "not") return canonical_rec(it->second);
    }
    return canonical_typed(s);
}

} // namespace

bool is_canonical(const schema& s) { return canonical_rec(s); }

} // namespace jsonsub
