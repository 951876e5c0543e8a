#include "jsonsub/validator.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/regex.hpp"

namespace jsonsub {

namespace {

bool type_matches(const json_value& d, const std::string& name) {
    json_type t;
    if (!json_type_from_string(name, t)) return false;
    switch (t) {
    case json_type::null: return d.is_null();
    case json_type::boolean: return d.is_boolean();
    case json_type::number: return d.is_number();
    case json_type::integer: return d.is_number() && is_integral(d.as_number());
    case json_type::string: return d.is_string();
    case json_type::array: return d.is_array();
    case json_type::object: return d.is_object();
    }
    return false;
}

bool check_numeric(const json_value& d, const schema& s) {
    const rational& x = d.as_number();
    if (const json_value* m = s.find("minimum")) {
        const json_value* ex = s.find("exclusiveMinimum");
        bool exclusive = ex && ex->is_boolean() && ex->as_boolean();
        if (exclusive ? x <= m->as_number() : x < m->as_number()) return false;
    }
    if (const json_value* m = s.find("maximum")) {
        const json_value* ex = s.find("exclusiveMaximum");
        bool exclusive = ex && ex->is_boolean() && ex->as_boolean();
        if (exclusive ? x >= m->as_number() : x > m->as_number()) return false;
    }
    if (const json_value* m = s.find("multipleOf"))
        if (!is_multiple_of(x, m->as_number())) return false;
    return true;
}

bool check_string(const json_value& d, const schema& s) {
    std::size_t len = utf8_length(d.as_string());
    if (const json_value* m = s.find("minLength"))
        if (len < m->as_number()) return false;
    if (const json_value* m = s.find("maxLength"))
        if (len > m->as_number()) return false;
    if (const json_value* p = s.find("pattern"))
        if (!compile_pattern(p->as_string(), anchor_mode::partial_match).matches(d.as_string()))
            return false;
    return true;
}

bool check_array(const json_value& d, const schema& s) {
    const json_array& a = d.as_array();
    if (const json_value* m = s.find("minItems"))
        if (rational(static_cast<long long>(a.size())) < m->as_number()) return false;
    if (const json_value* m = s.find("maxItems"))
        if (rational(static_cast<long long>(a.size())) > m->as_number()) return false;
    if (const json_value* u = s.find("uniqueItems")) {
        if (u->is_boolean() && u->as_boolean()) {
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = i + 1; j < a.size(); ++j)
                    if (a[i] == a[j]) return false;
        }
    }
    const json_value* items = s.find("items");
    if (items && items->is_object()) {
        for (const auto& e : a)
            if (!validate(e, *items)) return false;
    } else if (items && items->is_array()) {
        const json_array& list = items->as_array();
        const json_value* extra = s.find("additionalItems");
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i < list.size()) {
                if (!validate(a[i], list[i])) return false;
            } else if (extra) {
                if (extra->is_boolean()) {
                    if (!extra->as_boolean()) return false;
                } else if (!validate(a[i], *extra)) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool check_object(const json_value& d, const schema& s) {
    const json_object& o = d.as_object();
    if (const json_value* m = s.find("minProperties"))
        if (rational(static_cast<long long>(o.size())) < m->as_number()) return false;
    if (const json_value* m = s.find("maxProperties"))
        if (rational(static_cast<long long>(o.size())) > m->as_number()) return false;
    if (const json_value* req = s.find("required"))
        for (const auto& k : req->as_array())
            if (!o.count(k.as_string())) return false;

    const json_value* props = s.find("properties");
    const json_value* patterns = s.find("patternProperties");
    const json_value* extra = s.find("additionalProperties");
    for (const auto& [key, value] : o) {
        bool claimed = false;
        if (props && props->is_object()) {
            if (const json_value* ps = props->find(key)) {
                claimed = true;
                if (!validate(value, *ps)) return false;
            }
        }
        if (patterns && patterns->is_object()) {
            for (const auto& [pat, ps] : patterns->as_object()) {
                if (compile_pattern(pat, anchor_mode::partial_match).matches(key)) {
                    claimed = true;
                    if (!validate(value, ps)) return false;
                }
            }
        }
        if (!claimed && extra) {
            if (extra->is_boolean()) {
                if (!extra->as_boolean()) return false;
            } else if (!validate(value, *extra)) {
                return false;
            }
        }
    }

    if (const json_value* deps = s.find("dependencies")) {
        for (const auto& [key, dep] : deps->as_object()) {
            if (!o.count(key)) continue;
            if (dep.is_array()) {
                for (const auto& name : dep.as_array())
                    if (!o.count(name.as_string())) return false;
            } else if (!validate(d, dep)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

bool validate(const json_value& doc, const schema& s) {
    if (!s.is_object())
        fail(errc::meta_invalid, "a schema must be a JSON object");
    if (s.find("$ref"))
        fail(errc::ref_target_missing, "validate requires a ref-free schema");

    if (const json_value* t = s.find("type")) {
        if (t->is_string()) {
            if (!type_matches(doc, t->as_string())) return false;
        } else if (t->is_array()) {
            bool any = false;
            for (const auto& n : t->as_array())
                if (type_matches(doc, n.as_string())) { any = true; break; }
            if (!any) return false;
        }
    }
    if (const json_value* e = s.find("enum")) {
        bool member = false;
        for (const auto& v : e->as_array())
            if (v == doc) { member = true; break; }
        if (!member) return false;
    }
    if (doc.is_number() && !check_numeric(doc, s)) return false;
    if (doc.is_string() && !check_string(doc, s)) return false;
    if (doc.is_array() && !check_array(doc, s)) return false;
    if (doc.is_object() && !check_object(doc, s)) return false;

    if (const json_value* all = s.find("allOf"))
        for (const auto& sub : all->as_array())
            if (!validate(doc, sub)) return false;
    if (const json_value* any = s.find("anyOf")) {
        bool ok = false;
        for (const auto& sub : any->as_array())
            if (validate(doc, sub)) { ok = true; break; }
        if (!ok) return false;
    }
    if (const json_value* one = s.find("oneOf")) {
        int hits = 0;
        for (const auto& sub : one->as_array())
            if (validate(doc, sub) && ++hits > 1) break;
        if (hits != 1) return false;
    }
    if (const json_value* neg = s.find("not"))
        if (validate(doc, *neg)) return false;
    return true;
}

std::vector<json_value> enumerate_universe(const universe_budget& budget) {
    std::vector<json_value> prims;
    prims.emplace_back(nullptr);
    prims.emplace_back(true);
    prims.emplace_back(false);
    for (const auto& n : budget.numbers) prims.emplace_back(n);
    // all strings over the alphabet up to the length cap, shortest first
    std::vector<std::string> words{""};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= budget.max_string_length; ++len) {
        std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i)
            for (char c : budget.alphabet) words.push_back(words[i] + c);
        begin = end;
    }
    for (const auto& w : words) prims.emplace_back(w);

    std::vector<json_value> current =
        budget.container_values.empty() ? prims : budget.container_values;
    for (std::size_t d = 0; d < budget.depth; ++d) {
        std::vector<json_value> next = prims;
        // arrays up to the length cap with elements from the previous layer
        std::vector<json_array> partial{{}};
        for (std::size_t len = 0; len < budget.max_array_length; ++len) {
            std::vector<json_array> grown;
            for (const auto& base : partial)
                for (const auto& e : current) {
                    json_array a = base;
                    a.push_back(e);
                    grown.push_back(std::move(a));
                }
            for (const auto& a : grown) next.emplace_back(a);
            partial = std::move(grown);
        }
        next.emplace_back(json_array{});
        // objects over subsets of the key pool
        std::size_t subsets = static_cast<std::size_t>(1) << budget.object_keys.size();
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            std::vector<std::string> keys;
            for (std::size_t i = 0; i < budget.object_keys.size(); ++i)
                if (mask & (static_cast<std::size_t>(1) << i))
                    keys.push_back(budget.object_keys[i]);
            std::vector<json_object> objs{{}};
            for (const auto& key : keys) {
                std::vector<json_object> grown;
                for (const auto& base : objs)
                    for (const auto& e : current) {
                        json_object o = base;
                        o.emplace(key, e);
                        grown.push_back(std::move(o));
                    }
                objs = std::move(grown);
            }
            for (const auto& o : objs) next.emplace_back(o);
        }
        current = std::move(next);
    }
    // dedupe ([] and {} appear twice across layers)
    std::vector<json_value> out;
    for (const auto& v : current) {
        bool dup = false;
        for (const auto& u : out)
            if (u == v) { dup = true; break; }
        if (!dup) out.push_back(v);
    }
    return out;
}

} // namespace jsonsub
