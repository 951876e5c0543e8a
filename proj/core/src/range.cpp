#include "jsonsub/range.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace jsonsub {

bool numeric_range::interval_empty() const {
    if (!lo || !hi) return false;
    if (*lo > *hi) return true;
    return *lo == *hi && (lo_exclusive || hi_exclusive);
}

bool numeric_range::contains(const rational& x) const {
    if (lo && (lo_exclusive ? x <= *lo : x < *lo)) return false;
    if (hi && (hi_exclusive ? x >= *hi : x > *hi)) return false;
    if (multiple && !is_multiple_of(x, *multiple)) return false;
    return true;
}

bool numeric_range::admits_point() const {
    if (interval_empty()) return false;
    if (!multiple) return true;
    if (!lo || !hi) return true; // the grid is unbounded on that side
    rational m = *multiple;
    rational candidate = rational_ceil(rational(*lo / m)) * m;
    if (lo_exclusive && candidate == *lo) candidate += m;
    if (candidate > *hi) return false;
    if (candidate == *hi && hi_exclusive) return false;
    return true;
}

bool numeric_range::interval_contains(const numeric_range& inner) const {
    if (lo) {
        if (!inner.lo) return false;
        if (*inner.lo < *lo) return false;
        if (*inner.lo == *lo && lo_exclusive && !inner.lo_exclusive) return false;
    }
    if (hi) {
        if (!inner.hi) return false;
        if (*inner.hi > *hi) return false;
        if (*inner.hi == *hi && hi_exclusive && !inner.hi_exclusive) return false;
    }
    return true;
}

numeric_range numeric_range::normalized() const {
    if (!multiple) return *this;
    numeric_range out = *this;
    rational m = *multiple;
    if (lo) {
        rational c = rational_ceil(rational(*lo / m)) * m;
        if (lo_exclusive && c == *lo) c += m;
        out.lo = c;
        out.lo_exclusive = false;
    }
    if (hi) {
        rational c = rational_floor(rational(*hi / m)) * m;
        if (hi_exclusive && c == *hi) c -= m;
        out.hi = c;
        out.hi_exclusive = false;
    }
    return out;
}

numeric_range range_intersect(const numeric_range& a, const numeric_range& b) {
    numeric_range out;
    if (a.lo && b.lo) {
        if (*a.lo > *b.lo) { out.lo = a.lo; out.lo_exclusive = a.lo_exclusive; }
        else if (*b.lo > *a.lo) { out.lo = b.lo; out.lo_exclusive = b.lo_exclusive; }
        else { out.lo = a.lo; out.lo_exclusive = a.lo_exclusive || b.lo_exclusive; }
    } else if (a.lo) {
        out.lo = a.lo; out.lo_exclusive = a.lo_exclusive;
    } else if (b.lo) {
        out.lo = b.lo; out.lo_exclusive = b.lo_exclusive;
    }
    if (a.hi && b.hi) {
        if (*a.hi < *b.hi) { out.hi = a.hi; out.hi_exclusive = a.hi_exclusive; }
        else if (*b.hi < *a.hi) { out.hi = b.hi; out.hi_exclusive = b.hi_exclusive; }
        else { out.hi = a.hi; out.hi_exclusive = a.hi_exclusive || b.hi_exclusive; }
    } else if (a.hi) {
        out.hi = a.hi; out.hi_exclusive = a.hi_exclusive;
    } else if (b.hi) {
        out.hi = b.hi; out.hi_exclusive = b.hi_exclusive;
    }
    out.multiple = rational_lcm(a.multiple, b.multiple);
    return out;
}

bool range_overlaps(const numeric_range& a, const numeric_range& b) {
    return !range_intersect(a, b).interval_empty();
}

std::vector<numeric_range> range_subtract(const numeric_range& a, const numeric_range& b) {
    if (b.interval_empty() || !range_overlaps(a, b)) return {a};
    std::vector<numeric_range> out;
    if (b.lo && (!a.lo || *a.lo < *b.lo || (*a.lo == *b.lo && !a.lo_exclusive && b.lo_exclusive))) {
        numeric_range left = a;
        left.hi = b.lo;
        left.hi_exclusive = !b.lo_exclusive;
        if (!left.interval_empty()) out.push_back(std::move(left));
    }
    if (b.hi && (!a.hi || *a.hi > *b.hi || (*a.hi == *b.hi && !a.hi_exclusive && b.hi_exclusive))) {
        numeric_range right = a;
        right.lo = b.hi;
        right.lo_exclusive = !b.hi_exclusive;
        if (!right.interval_empty()) out.push_back(std::move(right));
    }
    return out;
}

std::optional<rational> rational_lcm(const std::optional<rational>& a,
                                     const std::optional<rational>& b) {
    if (!a) return b;
    if (!b) return a;
    bigint an = boost::multiprecision::numerator(*a);
    bigint ad = boost::multiprecision::denominator(*a);
    bigint bn = boost::multiprecision::numerator(*b);
    bigint bd = boost::multiprecision::denominator(*b);
    // lcm(p/q, r/s) = lcm(p, r) / gcd(q, s) for reduced fractions
    return rational(boost::multiprecision::lcm(an, bn), boost::multiprecision::gcd(ad, bd));
}

std::optional<rational> rational_gcd(const std::optional<rational>& a,
                                     const std::optional<rational>& b) {
    // an absent multipleOf admits everything, so the union is unconstrained
    if (!a || !b) return std::nullopt;
    bigint an = boost::multiprecision::numerator(*a);
    bigint ad = boost::multiprecision::denominator(*a);
    bigint bn = boost::multiprecision::numerator(*b);
    bigint bd = boost::multiprecision::denominator(*b);
    return rational(boost::multiprecision::gcd(an, bn), boost::multiprecision::lcm(ad, bd));
}

numeric_range schema_to_range(const schema& s) {
    numeric_range r;
    if (const json_value* v = s.find("minimum")) r.lo = v->as_number();
    if (const json_value* v = s.find("maximum")) r.hi = v->as_number();
    if (const json_value* v = s.find("exclusiveMinimum"))
        r.lo_exclusive = v->is_boolean() && v->as_boolean();
    if (const json_value* v = s.find("exclusiveMaximum"))
        r.hi_exclusive = v->is_boolean() && v->as_boolean();
    if (const json_value* v = s.find("multipleOf")) r.multiple = v->as_number();
    return r;
}

schema range_to_schema(const numeric_range& r) {
    schema out = json_value::object({{"type", json_value(std::string("number"))}});
    if (r.lo) {
        out["minimum"] = json_value(*r.lo);
        if (r.lo_exclusive) out["exclusiveMinimum"] = json_value(true);
    }
    if (r.hi) {
        out["maximum"] = json_value(*r.hi);
        if (r.hi_exclusive) out["exclusiveMaximum"] = json_value(true);
    }
    if (r.multiple) out["multipleOf"] = json_value(*r.multiple);
    return out;
}

} // namespace jsonsub
