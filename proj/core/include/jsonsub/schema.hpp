#pragma once

#include "jsonsub/json_value.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace jsonsub {

// Schemas are plain JSON objects in the boolean-free draft-04 form. The
// empty object is the top of the hierarchy; {"not": {}} is the bottom.
using schema = json_value;

schema schema_top();
schema schema_bottom();
bool is_top(const schema& s);
bool is_bottom(const schema& s);

std::set<std::string> dom(const schema& s);

// keywords that apply to values of a given type (draft-04)
const std::vector<std::string>& keywords_for(json_type t);
// default for a keyword when it is JSON-representable; infinite bounds have
// no JSON form and stay absent
const json_value* keyword_default(const std::string& keyword);

struct meta_violation {
    std::string path; // JSON-pointer-ish location of the offending keyword
    std::string message;
};
using validation_report = std::vector<meta_violation>;

// Checks a parsed schema against the draft-04 meta-schema subset. $ref
// occurrences are allowed (resolution happens separately); unknown keywords
// are ignored. An empty report means the schema is well-formed.
validation_report validate_meta(const schema& s);

// Documents addressable by $ref. Files load lazily relative to base_dir.
class document_store {
public:
    document_store() = default;
    explicit document_store(std::string base_dir) : base_dir_(std::move(base_dir)) {}

    void add(const std::string& uri, json_value doc);
    const json_value& fetch(const std::string& uri);

private:
    std::string base_dir_;
    std::map<std::string, json_value> docs_;
};

// Replaces every $ref with its target, recursively, producing a ref-free
// schema. Only same-document and local-file references are supported.
// Throws errc::recursive_ref when resolution revisits an in-progress node
// and errc::ref_target_missing on dangling references.
schema resolve_refs(const schema& s, document_store& store, const std::string& doc_uri = "");
schema resolve_refs(const schema& s);

} // namespace jsonsub
