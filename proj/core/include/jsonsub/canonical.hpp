#pragma once

#include "jsonsub/regex.hpp"
#include "jsonsub/schema.hpp"

namespace jsonsub {

struct rewrite_limits {
    std::size_t oneof_branch_limit = 16; // oneOf expansion is exponential
    std::size_t step_budget = 500000;    // total rewrite steps per top-level call
    std::size_t repeat_budget = 1000;    // bounded-repetition expansion
};

// Rewrites a meta-valid, ref-free schema into canonical form: every node is
// Top, Bottom, a single connective (anyOf/allOf/not), or a homogeneous typed
// schema with defaults filled in. Semantics-preserving: a document validates
// against the result exactly when it validates against the input.
schema canonicalize(const schema& s, const rewrite_limits& limits = {});

// Structural check of the canonical grammar, including pairwise-disjoint
// patternProperties and the absence of oneOf / integer / list-valued type.
bool is_canonical(const schema& s);

// Canonical schemas store patterns as '^(...)$'-wrapped strings, so their
// raw (partial-match) reading coincides with the full-match language.
std::string pattern_of_lang(regex_lang lang);
regex_lang lang_of_pattern(const std::string& pattern,
                           std::size_t repeat_budget = 1000);

// the six canonical types (integer is rewritten away)
const std::vector<json_type>& canonical_types();

// convenience: the canonical unconstrained schema of one type
schema typed_top(json_type t);

} // namespace jsonsub
