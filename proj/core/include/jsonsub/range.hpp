#pragma once

#include "jsonsub/json_value.hpp"
#include "jsonsub/schema.hpp"

#include <optional>
#include <vector>

namespace jsonsub {

// An interval of rationals with optional exclusive endpoints plus an
// optional multipleOf step. Missing bounds stand for -inf / +inf; the
// sentinels never appear in serialized schemas.
struct numeric_range {
    std::optional<rational> lo;
    std::optional<rational> hi;
    bool lo_exclusive = false;
    bool hi_exclusive = false;
    std::optional<rational> multiple;

    // interval emptiness; ignores the multipleOf grid
    bool interval_empty() const;
    // true when some value satisfies both the interval and the grid
    bool admits_point() const;
    bool contains(const rational& x) const;
    // ignores multipleOf on both sides
    bool interval_contains(const numeric_range& inner) const;
    bool unbounded_below() const { return !lo.has_value(); }
    bool unbounded_above() const { return !hi.has_value(); }

    // snaps finite bounds onto the multipleOf grid (inward), clearing the
    // exclusivity flags; identity when there is no multipleOf
    numeric_range normalized() const;

    bool operator==(const numeric_range& other) const = default;
};

numeric_range range_intersect(const numeric_range& a, const numeric_range& b);
// set difference of the intervals; 0, 1, or 2 pieces, keeping a's multiple
std::vector<numeric_range> range_subtract(const numeric_range& a, const numeric_range& b);
// ranges overlap as intervals (multipleOf ignored)
bool range_overlaps(const numeric_range& a, const numeric_range& b);

// lcm/gcd over positive rationals; an absent operand means "no constraint":
// lcm returns the other operand, gcd returns absent.
std::optional<rational> rational_lcm(const std::optional<rational>& a,
                                     const std::optional<rational>& b);
std::optional<rational> rational_gcd(const std::optional<rational>& a,
                                     const std::optional<rational>& b);

// conversions between number-typed schemas and ranges
numeric_range schema_to_range(const schema& s);
schema range_to_schema(const numeric_range& r);

} // namespace jsonsub
