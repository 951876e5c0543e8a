#pragma once

#include "jsonsub/range.hpp"
#include "jsonsub/schema.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace jsonsub {

// Mirrors the failure taxonomy the corpus harness tabulates.
enum class undecidable_reason {
    recursive_ref,
    negated_object,
    negated_array,
    non_regular_pattern,
    capacity_limit,
    overlapping_union,
};

const char* to_string(undecidable_reason r);

class subtype_verdict {
public:
    enum class kind { holds, does_not_hold, undecidable };

    static subtype_verdict holds() { return subtype_verdict(kind::holds, "", {}); }
    static subtype_verdict does_not_hold(std::string witness) {
        return subtype_verdict(kind::does_not_hold, std::move(witness), {});
    }
    static subtype_verdict undecidable(undecidable_reason r, std::string note) {
        return subtype_verdict(kind::undecidable, std::move(note), r);
    }

    kind result() const { return kind_; }
    bool is_holds() const { return kind_ == kind::holds; }
    bool is_does_not_hold() const { return kind_ == kind::does_not_hold; }
    bool is_undecidable() const { return kind_ == kind::undecidable; }
    // first violated rule and schema path, or the undecidability note
    const std::string& witness() const { return witness_; }
    undecidable_reason reason() const { return *reason_; }

private:
    subtype_verdict(kind k, std::string w, std::optional<undecidable_reason> r)
        : kind_(k), witness_(std::move(w)), reason_(r) {}
    kind kind_;
    std::string witness_;
    std::optional<undecidable_reason> reason_;
};

struct check_options {
    std::size_t oneof_branch_limit = 16;
    std::size_t step_budget = 500000;
    std::size_t repeat_budget = 1000;
    // bounded-segment enumeration budget for number reasoning; the
    // JSONSUB_POINT_BUDGET environment variable overrides it in the CLI
    std::uint64_t point_budget = 1'000'000;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Definition: s <: t iff every document valid against s is valid against t.
// Inputs are raw schemas; they are resolved, canonicalized, and simplified
// internally. Sound: holds / does-not-hold answers are always correct;
// unsupported features surface as undecidable, never as wrong verdicts.
// Throws jsonsub::error on malformed input (parse/meta failures).
subtype_verdict is_subschema(const schema& lhs, const schema& rhs,
                             const check_options& options = {});
subtype_verdict is_equivalent(const schema& lhs, const schema& rhs,
                              const check_options& options = {});

enum class check_direction { sub, super, equiv };
subtype_verdict check(const schema& lhs, const schema& rhs, check_direction direction,
                      const check_options& options = {});

// whether any document satisfies a simplified schema
bool inhabited(const schema& simplified, const check_options& options = {});

// simplified array node: true when no valid document can repeat a value
bool all_disjoint_items(const schema& array_node, const check_options& options = {});

// single-type helpers over simplified nodes
bool subtype_null(const schema& a, const schema& b);
bool subtype_boolean(const schema& a, const schema& b);
bool subtype_string(const schema& a, const schema& b);

// A conjunction of number constraints: positives intersect, negatives are
// carved out. Plain number schemas are the one-positive case.
struct number_constraints {
    std::vector<numeric_range> positives;
    std::vector<numeric_range> negatives;
};

// containment of the admitted number sets
bool subtype_number(const number_constraints& lhs, const number_constraints& rhs,
                    const check_options& options = {});

} // namespace jsonsub
