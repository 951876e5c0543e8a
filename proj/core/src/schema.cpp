#include "jsonsub/schema.hpp"
#include "jsonsub/error.hpp"

#include <algorithm>
#include <filesystem>

namespace jsonsub {

schema schema_top() { return json_value(json_object{}); }

schema schema_bottom() {
    return json_value::object({{"not", schema_top()}});
}

bool is_top(const schema& s) { return s.is_object() && s.as_object().empty(); }

bool is_bottom(const schema& s) {
    if (!s.is_object() || s.as_object().size() != 1) return false;
    const json_value* body = s.find("not");
    return body && is_top(*body);
}

std::set<std::string> dom(const schema& s) {
    std::set<std::string> out;
    if (s.is_object())
        for (const auto& [k, v] : s.as_object()) out.insert(k);
    return out;
}

const std::vector<std::string>& keywords_for(json_type t) {
    static const std::vector<std::string> none;
    static const std::vector<std::string> string_kws{"minLength", "maxLength", "pattern"};
    static const std::vector<std::string> number_kws{
        "minimum", "maximum", "exclusiveMinimum", "exclusiveMaximum", "multipleOf"};
    static const std::vector<std::string> array_kws{
        "items", "minItems", "maxItems", "additionalItems", "uniqueItems"};
    static const std::vector<std::string> object_kws{
        "properties",    "minProperties",        "maxProperties", "required",
        "additionalProperties", "patternProperties", "dependencies"};
    switch (t) {
    case json_type::string: return string_kws;
    case json_type::number:
    case json_type::integer: return number_kws;
    case json_type::array: return array_kws;
    case json_type::object: return object_kws;
    case json_type::null:
    case json_type::boolean: return none;
    }
    return none;
}

const json_value* keyword_default(const std::string& keyword) {
    static const std::map<std::string, json_value> defaults = [] {
        std::map<std::string, json_value> d;
        d.emplace("minLength", json_value(0));
        d.emplace("minItems", json_value(0));
        d.emplace("minProperties", json_value(0));
        d.emplace("exclusiveMinimum", json_value(false));
        d.emplace("exclusiveMaximum", json_value(false));
        d.emplace("uniqueItems", json_value(false));
        d.emplace("items", schema_top());
        d.emplace("additionalItems", schema_top());
        d.emplace("additionalProperties", schema_top());
        d.emplace("properties", json_value(json_object{}));
        d.emplace("patternProperties", json_value(json_object{}));
        d.emplace("dependencies", json_value(json_object{}));
        return d;
    }();
    auto it = defaults.find(keyword);
    return it == defaults.end() ? nullptr : &it->second;
}

// ------------------------------------------------------- meta validation

namespace {

struct meta_checker {
    validation_report report;

    void violation(const std::string& path, std::string message) {
        report.push_back({path, std::move(message)});
    }

    bool require_nonneg_integer(const json_value& v, const std::string& path) {
        if (!v.is_number() || !is_integral(v.as_number()) || v.as_number() < 0) {
            violation(path, "expected a non-negative integer");
            return false;
        }
        return true;
    }

    bool require_subschema(const json_value& v, const std::string& path) {
        if (!v.is_object()) {
            violation(path, "expected a schema object");
            return false;
        }
        check(v, path);
        return true;
    }

    void require_schema_array(const json_value& v, const std::string& path) {
        if (!v.is_array() || v.as_array().empty()) {
            violation(path, "expected a non-empty array of schemas");
            return;
        }
        for (std::size_t i = 0; i < v.as_array().size(); ++i)
            require_subschema(v.as_array()[i], path + "/" + std::to_string(i));
    }

    void require_string_list(const json_value& v, const std::string& path) {
        if (!v.is_array() || v.as_array().empty()) {
            violation(path, "expected a non-empty array of strings");
            return;
        }
        std::set<std::string> seen;
        for (const auto& e : v.as_array()) {
            if (!e.is_string()) {
                violation(path, "expected only strings");
                return;
            }
            if (!seen.insert(e.as_string()).second)
                violation(path, "duplicate entry '" + e.as_string() + "'");
        }
    }

    void check(const json_value& s, const std::string& path) {
        if (!s.is_object()) {
            violation(path.empty() ? "/" : path, "a schema must be a JSON object");
            return;
        }
        for (const auto& [key, v] : s.as_object()) {
            std::string at = path + "/" + key;
            if (key == "minLength" || key == "maxLength" || key == "minItems"
                || key == "maxItems" || key == "minProperties" || key == "maxProperties") {
                require_nonneg_integer(v, at);
            } else if (key == "pattern") {
                if (!v.is_string()) violation(at, "expected a string pattern");
            } else if (key == "minimum" || key == "maximum") {
                if (!v.is_number()) violation(at, "expected a number");
            } else if (key == "exclusiveMinimum" || key == "exclusiveMaximum"
                       || key == "uniqueItems") {
                if (!v.is_boolean()) violation(at, "expected a boolean");
            } else if (key == "multipleOf") {
                if (!v.is_number() || v.as_number() <= 0)
                    violation(at, "expected a number greater than zero");
            } else if (key == "items") {
                if (v.is_object()) require_subschema(v, at);
                else require_schema_array(v, at);
            } else if (key == "additionalItems" || key == "additionalProperties") {
                if (!v.is_boolean()) require_subschema(v, at);
            } else if (key == "properties" || key == "patternProperties") {
                if (!v.is_object()) {
                    violation(at, "expected an object of schemas");
                } else {
                    for (const auto& [pk, pv] : v.as_object())
                        require_subschema(pv, at + "/" + pk);
                }
            } else if (key == "required") {
                require_string_list(v, at);
            } else if (key == "dependencies") {
                if (!v.is_object()) {
                    violation(at, "expected an object");
                } else {
                    for (const auto& [dk, dv] : v.as_object()) {
                        if (dv.is_array()) require_string_list(dv, at + "/" + dk);
                        else require_subschema(dv, at + "/" + dk);
                    }
                }
            } else if (key == "enum") {
                if (!v.is_array() || v.as_array().empty()) {
                    violation(at, "expected a non-empty array");
                } else {
                    for (std::size_t i = 0; i < v.as_array().size(); ++i)
                        for (std::size_t j = i + 1; j < v.as_array().size(); ++j)
                            if (v.as_array()[i] == v.as_array()[j]) {
                                violation(at, "enum values must be unique");
                                i = v.as_array().size();
                                break;
                            }
                }
            } else if (key == "type") {
                auto check_name = [&](const json_value& n) {
                    json_type ignored;
                    if (!n.is_string() || !json_type_from_string(n.as_string(), ignored))
                        violation(at, "not a JSON type name");
                };
                if (v.is_array()) {
                    if (v.as_array().empty()) violation(at, "type list must be non-empty");
                    std::set<std::string> seen;
                    for (const auto& n : v.as_array()) {
                        check_name(n);
                        if (n.is_string() && !seen.insert(n.as_string()).second)
                            violation(at, "duplicate type name");
                    }
                } else {
                    check_name(v);
                }
            } else if (key == "not") {
                require_subschema(v, at);
            } else if (key == "allOf" || key == "anyOf" || key == "oneOf") {
                require_schema_array(v, at);
            } else if (key == "$ref") {
                if (!v.is_string()) violation(at, "expected a string reference");
            } else if (key == "definitions") {
                if (v.is_object())
                    for (const auto& [dk, dv] : v.as_object())
                        require_subschema(dv, at + "/" + dk);
            }
            // other keywords (description, title, default, ...) are ignored
        }
    }
};

} // namespace

validation_report validate_meta(const schema& s) {
    meta_checker checker;
    checker.check(s, "");
    return checker.report;
}

// --------------------------------------------------------- $ref resolution

void document_store::add(const std::string& uri, json_value doc) {
    docs_[uri] = std::move(doc);
}

const json_value& document_store::fetch(const std::string& uri) {
    auto it = docs_.find(uri);
    if (it != docs_.end()) return it->second;
    std::filesystem::path p(uri);
    if (p.is_relative() && !base_dir_.empty()) p = std::filesystem::path(base_dir_) / p;
    std::error_code ec;
    if (!std::filesystem::exists(p, ec))
        fail(errc::ref_target_missing, "no document for reference target: " + uri);
    json_value doc = parse_json_file(p.string());
    return docs_.emplace(uri, std::move(doc)).first->second;
}

namespace {

struct ref_resolver {
    document_store& store;
    std::set<std::string> in_progress;

    json_value resolve(const json_value& node, const json_value& root,
                       const std::string& doc_uri) {
        if (!node.is_object()) return node;
        if (const json_value* ref = node.find("$ref")) {
            if (!ref->is_string())
                fail(errc::ref_target_missing, "$ref must be a string");
            return follow(ref->as_string(), root, doc_uri);
        }
        json_object out;
        for (const auto& [key, v] : node.as_object()) {
            if (key == "properties" || key == "patternProperties" || key == "definitions"
                || key == "dependencies") {
                if (v.is_object()) {
                    json_object m;
                    for (const auto& [mk, mv] : v.as_object())
                        m.emplace(mk, mv.is_object() ? resolve(mv, root, doc_uri) : mv);
                    out.emplace(key, json_value(std::move(m)));
                    continue;
                }
            } else if (key == "items" || key == "additionalItems"
                       || key == "additionalProperties" || key == "not") {
                if (v.is_object()) {
                    out.emplace(key, resolve(v, root, doc_uri));
                    continue;
                }
                if (v.is_array()) { // list-form items
                    json_array a;
                    for (const auto& e : v.as_array())
                        a.push_back(e.is_object() ? resolve(e, root, doc_uri) : e);
                    out.emplace(key, json_value(std::move(a)));
                    continue;
                }
            } else if (key == "allOf" || key == "anyOf" || key == "oneOf") {
                if (v.is_array()) {
                    json_array a;
                    for (const auto& e : v.as_array())
                        a.push_back(e.is_object() ? resolve(e, root, doc_uri) : e);
                    out.emplace(key, json_value(std::move(a)));
                    continue;
                }
            }
            out.emplace(key, v);
        }
        return json_value(std::move(out));
    }

    json_value follow(const std::string& ref, const json_value& root,
                      const std::string& doc_uri) {
        std::string doc_part, fragment;
        auto hash = ref.find('#');
        if (hash == std::string::npos) {
            doc_part = ref;
            fragment = "#";
        } else {
            doc_part = ref.substr(0, hash);
            fragment = ref.substr(hash);
        }
        const json_value* target_root = &root;
        std::string target_uri = doc_uri;
        if (!doc_part.empty()) {
            if (doc_part.find("://") != std::string::npos)
                fail(errc::ref_target_missing,
                     "remote references are not supported: " + ref);
            std::filesystem::path base(doc_uri);
            std::filesystem::path resolved =
                doc_uri.empty() ? std::filesystem::path(doc_part)
                                : base.parent_path() / doc_part;
            target_uri = resolved.lexically_normal().string();
            target_root = &store.fetch(target_uri);
        }
        std::string key = target_uri + fragment;
        if (in_progress.count(key))
            fail(errc::recursive_ref, "recursive or circular $ref: " + ref);
        const json_value* target;
        try {
            target = &resolve_pointer(*target_root, fragment);
        } catch (const error& e) {
            if (e.code() == errc::pointer_not_found)
                fail(errc::ref_target_missing, "dangling $ref: " + ref);
            throw;
        }
        in_progress.insert(key);
        json_value out = resolve(*target, *target_root, target_uri);
        in_progress.erase(key);
        return out;
    }
};

} // namespace

schema resolve_refs(const schema& s, document_store& store, const std::string& doc_uri) {
    ref_resolver resolver{store, {}};
    return resolver.resolve(s, s, doc_uri);
}

schema resolve_refs(const schema& s) {
    document_store store;
    return resolve_refs(s, store, "");
}

} // namespace jsonsub
