#pragma once

#include "jsonsub/json_value.hpp"
#include "jsonsub/schema.hpp"

#include <vector>

namespace jsonsub {

// Decides whether a document conforms to a raw, ref-free draft-04 schema.
// Implemented directly over the raw keyword semantics, independent of the
// canonical forms used by the checker, so it can serve as a differential
// oracle. Throws errc::unsupported_pattern for out-of-dialect regexes.
bool validate(const json_value& doc, const schema& s);

// Bounds for the finite document universe driving brute-force checks.
struct universe_budget {
    std::string alphabet = "ab";
    std::size_t max_string_length = 2;
    std::vector<rational> numbers = {
        rational(-2), rational(-1), rational(-1, 2), rational(0),
        rational(1, 2), rational(1), rational(2), rational(3)};
    std::size_t max_array_length = 2;
    std::vector<std::string> object_keys = {"a", "b"};
    std::size_t depth = 1; // nesting depth of arrays/objects
    // when non-empty, array elements and object values come from this list
    // instead of the full previous layer, keeping the universe tractable
    std::vector<json_value> container_values;
};

// Deterministic finite universe covering all seven JSON types.
std::vector<json_value> enumerate_universe(const universe_budget& budget);

} // namespace jsonsub
