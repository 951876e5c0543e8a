#pragma once

#include "jsonsub/canonical.hpp"
#include "jsonsub/range.hpp"

namespace jsonsub {

// Takes a canonical schema and eliminates enum (except boolean), negation
// (except number/array/object bodies kept inside conjunctions), allOf
// (except over not), and overlapping anyOf where JSON Schema can express
// the result. Semantics-preserving.
schema simplify(const schema& s, const rewrite_limits& limits = {});

// Structural check of the simplified grammar. Overlapping number branches
// are tolerated only when their multipleOf steps are incompatible, the one
// case the union rewrite cannot express exactly.
bool is_simplified(const schema& s);

} // namespace jsonsub
