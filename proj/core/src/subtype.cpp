#include "jsonsub/subtype.hpp"
#include "jsonsub/canonical.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/regex.hpp"
#include "jsonsub/simplify.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace jsonsub {

const char* to_string(undecidable_reason r) {
    switch (r) {
    case undecidable_reason::recursive_ref: return "RecursiveRef";
    case undecidable_reason::negated_object: return "NegatedObject";
    case undecidable_reason::negated_array: return "NegatedArray";
    case undecidable_reason::non_regular_pattern: return "NonRegularPattern";
    case undecidable_reason::capacity_limit: return "CapacityLimit";
    case undecidable_reason::overlapping_union: return "OverlappingUnion";
    }
    return "Unknown";
}

namespace {

json_type node_type(const schema& s) {
    json_type t = json_type::null;
    const json_value* v = s.find("type");
    if (v && v->is_string()) json_type_from_string(v->as_string(), t);
    return t;
}

bool is_typed(const schema& s) {
    const json_value* v = s.find("type");
    return v && v->is_string();
}

bool is_connective(const schema& s, const char* name) {
    return s.is_object() && s.as_object().size() == 1 && s.contains(name);
}

// ----------------------------------------------------- number set algebra

// conjunction of positive grids minus negative grids, all over ranges
struct number_set {
    std::vector<numeric_range> pos;
    std::vector<numeric_range> neg;
};

bool set_member(const number_set& s, const rational& x) {
    for (const auto& p : s.pos)
        if (!p.contains(x)) return false;
    for (const auto& n : s.neg)
        if (n.contains(x)) return false;
    return true;
}

bool union_member(const std::vector<number_set>& sets, const rational& x) {
    for (const auto& s : sets)
        if (set_member(s, x)) return true;
    return false;
}

struct point_meter {
    std::uint64_t budget;
    std::uint64_t spent = 0;
    void spend(const rational& n) {
        if (n > rational(static_cast<long long>(budget)))
            fail(errc::capacity, "number reasoning exceeded the point budget");
        spend(static_cast<std::uint64_t>(
            boost::multiprecision::numerator(n).convert_to<unsigned long long>()));
    }
    void spend(std::uint64_t n) {
        spent += n;
        if (spent > budget)
            fail(errc::capacity, "number reasoning exceeded the point budget");
    }
};

// a maximal interval on which every involved range is constant
struct segment {
    enum class kind { point, open, left_tail, right_tail, whole_line };
    kind k;
    rational a, b; // point: a; open: (a,b); left_tail: (-inf,a); right_tail: (b,inf)
};

bool covers_segment(const numeric_range& r, const segment& s) {
    switch (s.k) {
    case segment::kind::point: return !r.interval_empty() && true; // handled via contains
    case segment::kind::open:
        return (!r.lo || *r.lo <= s.a) && (!r.hi || *r.hi >= s.b) && !r.interval_empty();
    case segment::kind::left_tail: return !r.lo && (!r.hi || *r.hi >= s.a);
    case segment::kind::right_tail: return !r.hi && (!r.lo || *r.lo <= s.b);
    case segment::kind::whole_line: return !r.lo && !r.hi;
    }
    return false;
}

// The inclusion check for A within the union of Bs, exact up to the point
// budget. Strategy: normalize bounds onto their grids, cut the line at every
// finite bound, then decide each segment: points directly, bounded segments
// by enumerating the left grid, unbounded segments by divisibility residues
// modulo the lcm of every step involved.
struct number_union_checker {
    point_meter& meter;

    std::optional<rational> counterexample;

    bool includes(number_set A, std::vector<number_set> Bs) {
        for (auto& r : A.pos) r = r.normalized();
        for (auto& r : A.neg) r = r.normalized();
        for (auto& B : Bs) {
            for (auto& r : B.pos) r = r.normalized();
            for (auto& r : B.neg) r = r.normalized();
        }

        // overall positive range and step of A
        numeric_range ra;
        for (const auto& p : A.pos) ra = range_intersect(ra, p);
        if (ra.interval_empty()) return true;
        ra = ra.normalized();
        if (ra.interval_empty() || (ra.multiple && !ra.admits_point())) return true;

        std::vector<rational> bounds;
        auto note = [&](const numeric_range& r) {
            if (r.lo) bounds.push_back(*r.lo);
            if (r.hi) bounds.push_back(*r.hi);
        };
        note(ra);
        for (const auto& r : A.neg) note(r);
        for (const auto& B : Bs) {
            for (const auto& r : B.pos) note(r);
            for (const auto& r : B.neg) note(r);
        }
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

        std::vector<segment> segments;
        if (bounds.empty()) {
            segments.push_back({segment::kind::whole_line, 0, 0});
        } else {
            segments.push_back({segment::kind::left_tail, bounds.front(), 0});
            for (std::size_t i = 0; i < bounds.size(); ++i) {
                segments.push_back({segment::kind::point, bounds[i], bounds[i]});
                if (i + 1 < bounds.size())
                    segments.push_back({segment::kind::open, bounds[i], bounds[i + 1]});
            }
            segments.push_back({segment::kind::right_tail, 0, bounds.back()});
        }
        for (const auto& seg : segments)
            if (!check_segment(A, Bs, ra, seg)) return false;
        return true;
    }

    bool check_segment(const number_set& A, const std::vector<number_set>& Bs,
                       const numeric_range& ra, const segment& seg) {
        if (seg.k == segment::kind::point) {
            meter.spend(1);
            if (set_member(A, seg.a) && !union_member(Bs, seg.a)) {
                counterexample = seg.a;
                return false;
            }
            return true;
        }
        if (!covers_segment(ra, seg)) return true; // A is empty here
        for (const auto& n : A.neg)
            if (!n.multiple && covers_segment(n, seg)) return true; // carved out entirely

        if (seg.k == segment::kind::open) return check_bounded(A, Bs, ra, seg);
        return check_unbounded(A, Bs, ra, seg);
    }

    bool check_bounded(const number_set& A, const std::vector<number_set>& Bs,
                       const numeric_range& ra, const segment& seg) {
        if (ra.multiple) {
            const rational& m = *ra.multiple;
            meter.spend(rational((seg.b - seg.a) / m) + 1);
            rational x = rational_ceil(rational(seg.a / m)) * m;
            if (x <= seg.a) x += m;
            for (; x < seg.b; x += m) {
                if (set_member(A, x) && !union_member(Bs, x)) {
                    counterexample = x;
                    return false;
                }
            }
            return true;
        }
        // continuum: some branch must cover the segment without a grid
        bool continuum_covered = false;
        std::vector<rational> suspect_steps;
        for (const auto& B : Bs) {
            bool active = true, gridded = false, carved = false;
            std::vector<rational> punches;
            for (const auto& p : B.pos) {
                if (!covers_segment(p, seg)) active = false;
                if (p.multiple) gridded = true;
            }
            if (!active) continue;
            for (const auto& n : B.neg) {
                if (!covers_segment(n, seg)) continue;
                if (!n.multiple) carved = true;
                else punches.push_back(*n.multiple);
            }
            if (carved || gridded) continue;
            if (!continuum_covered) {
                continuum_covered = true;
                suspect_steps = punches; // uncovered points must be punched here too
            } else if (punches.size() < suspect_steps.size()) {
                suspect_steps = punches;
            }
        }
        if (!continuum_covered) {
            // pick any point of the open interval not punched on the left
            rational x = rational(seg.a + seg.b) / 2;
            for (int tries = 0; tries < 64 && !set_member(A, x); ++tries)
                x = rational(x + seg.b) / 2;
            if (set_member(A, x)) counterexample = x;
            return false;
        }
        for (const auto& m : suspect_steps) {
            meter.spend(rational((seg.b - seg.a) / m) + 1);
            rational x = rational_ceil(rational(seg.a / m)) * m;
            if (x <= seg.a) x += m;
            for (; x < seg.b; x += m) {
                if (set_member(A, x) && !union_member(Bs, x)) {
                    counterexample = x;
                    return false;
                }
            }
        }
        return true;
    }

    // Unbounded segments: range checks degenerate to coverage flags and only
    // divisibility matters, which is periodic, so residues modulo the lcm of
    // all steps decide the segment exactly.
    bool check_unbounded(const number_set& A, const std::vector<number_set>& Bs,
                         const numeric_range& ra, const segment& seg) {
        std::optional<rational> big = ra.multiple;
        auto fold = [&](const std::optional<rational>& m) {
            if (m) big = rational_lcm(big, m);
        };
        struct flat_b {
            std::vector<std::optional<rational>> pos; // steps; range coverage pre-checked
            std::vector<rational> punches;            // covering negatives with steps
            bool usable = true;
            bool continuum_capable = true;
        };
        std::vector<flat_b> flat;
        for (const auto& B : Bs) {
            flat_b f;
            for (const auto& p : B.pos) {
                if (!covers_segment(p, seg)) { f.usable = false; break; }
                f.pos.push_back(p.multiple);
                if (p.multiple) f.continuum_capable = false;
            }
            if (!f.usable) continue;
            for (const auto& n : B.neg) {
                if (!covers_segment(n, seg)) continue;
                if (!n.multiple) { f.usable = false; break; }
                // isolated punch-outs keep the branch continuum-capable;
                // the punched residues are re-checked as suspects
                f.punches.push_back(*n.multiple);
            }
            if (!f.usable) continue;
            for (const auto& m : f.pos) fold(m);
            for (const auto& m : f.punches) fold(m);
            flat.push_back(std::move(f));
        }
        std::vector<rational> left_punch;
        for (const auto& n : A.neg) {
            if (!covers_segment(n, seg) || !n.multiple) continue;
            // negatives without a step were handled by the caller
            left_punch.push_back(*n.multiple);
            fold(n.multiple);
        }

        auto accepted = [&](const rational& x) {
            if (!set_member_divwise(x, ra.multiple, left_punch)) return true; // outside A
            for (const auto& f : flat) {
                bool ok = true;
                for (const auto& m : f.pos)
                    if (m && !is_multiple_of(x, *m)) { ok = false; break; }
                if (!ok) continue;
                for (const auto& m : f.punches)
                    if (is_multiple_of(x, m)) { ok = false; break; }
                if (ok) return true;
            }
            counterexample.reset(); // residues are abstract, not literal points
            return false;
        };

        if (ra.multiple) {
            rational period = big ? rational(*big / *ra.multiple) : rational(1);
            meter.spend(period);
            rational step = *ra.multiple;
            for (rational k = 0; k < period; k += 1)
                if (!accepted(rational(k * step))) return false;
            return true;
        }
        // continuum: a branch without grids must cover the segment, and
        // every punched residue needs separate coverage
        bool continuum_covered = false;
        std::vector<rational> suspect_steps;
        bool have_suspects = false;
        for (const auto& f : flat) {
            if (!f.continuum_capable) continue;
            if (!continuum_covered || f.punches.size() < suspect_steps.size()) {
                continuum_covered = true;
                suspect_steps = f.punches;
                have_suspects = true;
            }
        }
        (void)have_suspects;
        if (!continuum_covered) return false;
        for (const auto& m : suspect_steps) {
            rational period = big ? rational(*big / m) : rational(1);
            meter.spend(period);
            for (rational k = 0; k < period; k += 1)
                if (!accepted(rational(k * m))) return false;
        }
        return true;
    }

    static bool set_member_divwise(const rational& x, const std::optional<rational>& step,
                                   const std::vector<rational>& punches) {
        if (step && !is_multiple_of(x, *step)) return false;
        for (const auto& m : punches)
            if (is_multiple_of(x, m)) return false;
        return true;
    }
};

// --------------------------------------------------------------- branches

struct branch_info {
    json_type type = json_type::null;
    bool negated = false;   // allOf with surviving negations
    schema positive;        // the typed member
    std::vector<schema> negatives; // bodies of the nots
    bool malformed = false;
};

branch_info classify(const schema& s) {
    branch_info info;
    if (is_typed(s)) {
        info.type = node_type(s);
        info.positive = s;
        return info;
    }
    if (is_connective(s, "allOf")) {
        bool have_positive = false;
        for (const auto& kid : s.at("allOf").as_array()) {
            if (is_connective(kid, "not")) {
                info.negatives.push_back(kid.at("not"));
            } else if (is_typed(kid) && !have_positive) {
                info.positive = kid;
                info.type = node_type(kid);
                have_positive = true;
            } else {
                info.malformed = true;
            }
        }
        info.negated = !info.negatives.empty();
        if (!have_positive) info.malformed = true;
        return info;
    }
    info.malformed = true;
    return info;
}

number_set to_number_set(const branch_info& b) {
    number_set out;
    out.pos.push_back(schema_to_range(b.positive));
    for (const auto& n : b.negatives) out.neg.push_back(schema_to_range(n));
    return out;
}

// ---------------------------------------------------------------- checker

struct checker {
    check_options opts;
    std::size_t steps = 0;
    std::size_t depth = 0;
    std::map<std::string, bool> inhabited_memo;

    struct memo_entry {
        subtype_verdict::kind kind;
        std::string witness;
        undecidable_reason reason = undecidable_reason::capacity_limit;
    };
    std::map<std::string, memo_entry> compare_memo;

    rewrite_limits rewrites() const {
        return rewrite_limits{opts.oneof_branch_limit, opts.step_budget, opts.repeat_budget};
    }

    void bump() {
        if (++steps > opts.step_budget)
            fail(errc::capacity, "subtype checking exceeded the step budget");
        if (opts.deadline && (steps & 0x3F) == 0
            && std::chrono::steady_clock::now() > *opts.deadline)
            fail(errc::capacity, "subtype checking exceeded the time budget");
    }

    subtype_verdict from_memo(const memo_entry& e) {
        switch (e.kind) {
        case subtype_verdict::kind::holds: return subtype_verdict::holds();
        case subtype_verdict::kind::does_not_hold:
            return subtype_verdict::does_not_hold(e.witness);
        default: return subtype_verdict::undecidable(e.reason, e.witness);
        }
    }

    // ---- inhabitation ------------------------------------------------

    bool inhabited(const schema& s) {
        std::string key = serialize_json(s);
        auto it = inhabited_memo.find(key);
        if (it != inhabited_memo.end()) return it->second;
        bool result = inhabited_uncached(s);
        inhabited_memo.emplace(std::move(key), result);
        return result;
    }

    bool inhabited_uncached(const schema& s) {
        bump();
        if (is_top(s)) return true;
        if (is_bottom(s)) return false;
        if (is_connective(s, "anyOf")) {
            for (const auto& kid : s.at("anyOf").as_array())
                if (inhabited(kid)) return true;
            return false;
        }
        if (is_connective(s, "allOf")) {
            branch_info b = classify(s);
            if (b.malformed) return true; // conservative
            if (b.type == json_type::number) {
                point_meter meter{opts.point_budget};
                number_union_checker nc{meter};
                return !nc.includes(to_number_set(b), {});
            }
            // negated arrays/objects: no decision procedure, assume inhabited
            return true;
        }
        if (is_connective(s, "not")) return true; // conservative
        if (!is_typed(s)) return true;

        switch (node_type(s)) {
        case json_type::null:
            return true;
        case json_type::boolean:
            return !s.at("enum").as_array().empty();
        case json_type::string:
            return !lang_of_pattern(s.at("pattern").as_string(), opts.repeat_budget).is_empty();
        case json_type::number: {
            point_meter meter{opts.point_budget};
            number_union_checker nc{meter};
            number_set a;
            a.pos.push_back(schema_to_range(s));
            return !nc.includes(a, {});
        }
        case json_type::array:
            return inhabited_array(s);
        case json_type::object:
            return inhabited_object(s);
        default:
            return true;
        }
    }

    std::optional<rational> max_items(const schema& s) {
        if (const json_value* m = s.find("maxItems")) return m->as_number();
        return std::nullopt;
    }

    // largest array length the node can actually produce: the declared bound
    // capped at the first uninhabited slot, and by the distinct-value pool
    // when uniqueItems holds and every position shares one schema
    std::optional<rational> effective_max_items(const schema& s) {
        std::optional<rational> max = max_items(s);
        const json_array& items = s.at("items").as_array();
        for (std::size_t i = 0; i < items.size(); ++i) {
            if ((!max || *max > rational(static_cast<long long>(i))) && !inhabited(items[i])) {
                return rational(static_cast<long long>(i));
            }
        }
        rational list_len(static_cast<long long>(items.size()));
        if ((!max || *max > list_len) && !inhabited(s.at("additionalItems")))
            max = list_len;
        if (s.at("uniqueItems").as_boolean()) {
            bool uniform = true;
            const schema& extra = s.at("additionalItems");
            for (const auto& it : items)
                if (it != extra) uniform = false;
            bool tail_open = !max || *max > list_len;
            if (uniform && (tail_open || !items.empty())) {
                if (auto pool = distinct_count(extra)) {
                    rational cap(static_cast<long long>(*pool));
                    if (!max || *max > cap) max = cap;
                }
            }
        }
        return max;
    }

    std::optional<std::uint64_t> distinct_count(const schema& s) {
        if (is_top(s) || !s.is_object()) return std::nullopt;
        if (is_bottom(s)) return 0;
        if (!is_typed(s)) return std::nullopt;
        switch (node_type(s)) {
        case json_type::null:
            return 1;
        case json_type::boolean:
            return s.at("enum").as_array().size();
        case json_type::string:
            return lang_of_pattern(s.at("pattern").as_string(), opts.repeat_budget)
                .count_words(1u << 20);
        case json_type::number: {
            numeric_range r = schema_to_range(s).normalized();
            if (r.interval_empty() || !r.admits_point()) return 0;
            if (!r.lo || !r.hi) return std::nullopt;
            if (!r.multiple) return *r.lo == *r.hi ? 1 : std::optional<std::uint64_t>();
            rational count = rational((*r.hi - *r.lo) / *r.multiple) + 1;
            if (count > rational(1'000'000)) return std::nullopt;
            return static_cast<std::uint64_t>(
                boost::multiprecision::numerator(rational_floor(count))
                    .convert_to<unsigned long long>());
        }
        default:
            return std::nullopt;
        }
    }

    bool inhabited_array(const schema& s) {
        rational min_items = s.at("minItems").as_number();
        std::optional<rational> max = max_items(s);
        if (max && *max < min_items) return false;
        const json_array& items = s.at("items").as_array();
        const schema& extra = s.at("additionalItems");
        // every position below minItems must admit a value
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (rational(static_cast<long long>(i)) >= min_items) break;
            if (!inhabited(items[i])) return false;
        }
        if (min_items > rational(static_cast<long long>(items.size())) && !inhabited(extra))
            return false;
        // uniqueItems with a length floor needs enough distinct values; the
        // check covers identical slot schemas, the common case
        if (s.at("uniqueItems").as_boolean() && min_items >= 2) {
            std::map<std::string, std::pair<std::uint64_t, std::optional<std::uint64_t>>> groups;
            rational idx(0);
            for (std::size_t i = 0; idx < min_items; ++i, idx += 1) {
                const schema& slot =
                    i < items.size() ? items[i] : extra;
                auto [it, inserted] = groups.emplace(
                    serialize_json(slot), std::make_pair(0ULL, distinct_count(slot)));
                it->second.first += 1;
            }
            for (const auto& [k, g] : groups)
                if (g.second && *g.second < g.first) return false;
        }
        return true;
    }

    // the unique pattern entry whose language contains the key, if any
    const schema* entry_for_key(const schema& object_node, const std::string& key) {
        for (const auto& [p, sub] : object_node.at("patternProperties").as_object())
            if (lang_of_pattern(p, opts.repeat_budget).matches(key)) return &sub;
        return nullptr;
    }

    std::optional<std::uint64_t> available_keys(const schema& s) {
        std::uint64_t total = 0;
        for (const auto& [p, sub] : s.at("patternProperties").as_object()) {
            if (!inhabited(sub)) continue;
            auto count = lang_of_pattern(p, opts.repeat_budget).count_words(1u << 20);
            if (!count) return std::nullopt;
            total += *count;
        }
        return total;
    }

    bool inhabited_object(const schema& s) {
        rational min_props = s.at("minProperties").as_number();
        std::optional<rational> max_props;
        if (const json_value* m = s.find("maxProperties")) max_props = m->as_number();
        if (max_props && *max_props < min_props) return false;
        std::size_t required_count = 0;
        if (const json_value* req = s.find("required")) {
            required_count = req->as_array().size();
            if (max_props && *max_props < rational(static_cast<long long>(required_count)))
                return false;
            for (const auto& k : req->as_array()) {
                const schema* entry = entry_for_key(s, k.as_string());
                if (entry && !inhabited(*entry)) return false;
            }
        }
        if (min_props > 0) {
            auto avail = available_keys(s);
            if (avail && rational(static_cast<long long>(*avail)) < min_props) return false;
        }
        return true;
    }

    // ---- comparison ---------------------------------------------------

    subtype_verdict compare(const schema& a, const schema& b, const std::string& path) {
        bump();
        if (is_top(b)) return subtype_verdict::holds(); // everything fits under top
        std::string key = serialize_json(a);
        key.push_back('\x1f');
        key += serialize_json(b);
        auto it = compare_memo.find(key);
        if (it != compare_memo.end()) return from_memo(it->second);
        if (++depth > 400) {
            --depth;
            fail(errc::capacity, "subtype recursion exceeded the depth limit");
        }
        subtype_verdict v = compare_uncached(a, b, path);
        --depth;
        memo_entry e{v.result(), v.witness(),
                     v.is_undecidable() ? v.reason() : undecidable_reason::capacity_limit};
        compare_memo.emplace(std::move(key), std::move(e));
        return v;
    }

    std::vector<schema> expand_branches(const schema& s) {
        if (is_bottom(s)) return {};
        if (is_top(s)) {
            std::vector<schema> out;
            for (json_type t : canonical_types()) out.push_back(simplify(typed_top(t), rewrites()));
            return out;
        }
        if (is_connective(s, "anyOf")) {
            const json_array& kids = s.at("anyOf").as_array();
            return {kids.begin(), kids.end()};
        }
        return {s};
    }

    subtype_verdict compare_uncached(const schema& a, const schema& b,
                                     const std::string& path) {
        if (!inhabited(a)) return subtype_verdict::holds();

        std::vector<schema> lefts = expand_branches(a);
        std::vector<schema> rights_raw = expand_branches(b);
        std::vector<branch_info> rights;
        for (auto& r : rights_raw) {
            if (!inhabited(r)) continue;
            rights.push_back(classify(r));
            if (rights.back().malformed)
                return subtype_verdict::undecidable(
                    undecidable_reason::overlapping_union,
                    path + ": unrecognized simplified form on the right");
        }

        std::vector<number_set> right_numbers;
        for (const auto& r : rights)
            if (r.type == json_type::number) right_numbers.push_back(to_number_set(r));

        for (const auto& l : lefts) {
            if (!inhabited(l)) continue;
            branch_info left = classify(l);
            if (left.malformed)
                return subtype_verdict::undecidable(
                    undecidable_reason::overlapping_union,
                    path + ": unrecognized simplified form on the left");

            if (left.type == json_type::number) {
                point_meter meter{opts.point_budget};
                number_union_checker nc{meter};
                if (!nc.includes(to_number_set(left), right_numbers)) {
                    std::string witness = path + ": number constraints not contained";
                    if (nc.counterexample)
                        witness += " (counterexample "
                                   + decimal_string(*nc.counterexample) + ")";
                    return subtype_verdict::does_not_hold(witness);
                }
                continue;
            }

            if (left.negated)
                return subtype_verdict::undecidable(
                    left.type == json_type::array ? undecidable_reason::negated_array
                                                  : undecidable_reason::negated_object,
                    path + ": negated " + std::string(to_string(left.type))
                        + " schema on the left");

            bool matched = false;
            bool saw_undecidable = false;
            undecidable_reason undecidable_why = undecidable_reason::overlapping_union;
            std::string undecidable_note;
            std::size_t plain_candidates = 0;
            std::string last_failure;
            for (const auto& r : rights) {
                if (r.type != left.type) continue;
                if (r.negated) {
                    saw_undecidable = true;
                    undecidable_why = r.type == json_type::array
                                          ? undecidable_reason::negated_array
                                          : undecidable_reason::negated_object;
                    undecidable_note = path + ": negated " + to_string(r.type)
                                       + " schema on the right";
                    continue;
                }
                ++plain_candidates;
                subtype_verdict v = branch_sub(left.positive, r.positive, path);
                if (v.is_holds()) { matched = true; break; }
                if (v.is_undecidable()) {
                    saw_undecidable = true;
                    undecidable_why = v.reason();
                    undecidable_note = v.witness();
                } else {
                    last_failure = v.witness();
                }
            }
            if (matched) continue;
            if (saw_undecidable)
                return subtype_verdict::undecidable(undecidable_why, undecidable_note);
            if (plain_candidates >= 2
                && (left.type == json_type::array || left.type == json_type::object))
                return subtype_verdict::undecidable(
                    undecidable_reason::overlapping_union,
                    path + ": multiple " + to_string(left.type)
                        + " branches on the right may jointly cover the left");
            if (!last_failure.empty()) return subtype_verdict::does_not_hold(last_failure);
            return subtype_verdict::does_not_hold(
                path + ": no " + std::string(to_string(left.type))
                + " schema on the right admits this branch");
        }
        return subtype_verdict::holds();
    }

    subtype_verdict branch_sub(const schema& l, const schema& r, const std::string& path) {
        bump();
        switch (node_type(l)) {
        case json_type::null:
            return subtype_verdict::holds();
        case json_type::boolean:
            return subtype_boolean(l, r)
                       ? subtype_verdict::holds()
                       : subtype_verdict::does_not_hold(path + ": boolean enum not contained");
        case json_type::string: {
            regex_lang ll = lang_of_pattern(l.at("pattern").as_string(), opts.repeat_budget);
            regex_lang rl = lang_of_pattern(r.at("pattern").as_string(), opts.repeat_budget);
            if (rl.includes(ll)) return subtype_verdict::holds();
            std::string witness = path + ": string pattern not included";
            if (auto w = ll.subtract(rl).sample_word())
                witness += " (counterexample \"" + *w + "\")";
            return subtype_verdict::does_not_hold(witness);
        }
        case json_type::array:
            return array_sub(l, r, path);
        case json_type::object:
            return object_sub(l, r, path);
        default:
            return subtype_verdict::does_not_hold(path + ": incomparable types");
        }
    }

    subtype_verdict array_sub(const schema& l, const schema& r, const std::string& path) {
        rational min_l = l.at("minItems").as_number();
        rational min_r = r.at("minItems").as_number();
        if (min_l < min_r)
            return subtype_verdict::does_not_hold(path + ": minItems allows shorter arrays");
        std::optional<rational> max_l = effective_max_items(l);
        std::optional<rational> max_r = max_items(r);
        if (max_r && (!max_l || *max_l > *max_r))
            return subtype_verdict::does_not_hold(path + ": maxItems allows longer arrays");

        const json_array& items_l = l.at("items").as_array();
        const json_array& items_r = r.at("items").as_array();
        const schema& extra_l = l.at("additionalItems");
        const schema& extra_r = r.at("additionalItems");
        std::size_t slots = std::max(items_l.size(), items_r.size()) + 1;
        for (std::size_t i = 0; i < slots; ++i) {
            // positions the left can never fill are vacuous
            if (max_l && rational(static_cast<long long>(i)) >= *max_l) break;
            const schema& sl = i < items_l.size() ? items_l[i] : extra_l;
            const schema& sr = i < items_r.size() ? items_r[i] : extra_r;
            subtype_verdict v =
                compare(sl, sr, path + ".items[" + std::to_string(i) + "]");
            if (!v.is_holds()) return v;
        }

        if (r.at("uniqueItems").as_boolean() && !l.at("uniqueItems").as_boolean()
            && !disjoint_items(l))
            return subtype_verdict::does_not_hold(
                path + ": right requires uniqueItems, left may repeat values");
        return subtype_verdict::holds();
    }

    bool disjoint_items(const schema& s) {
        const json_array& items = s.at("items").as_array();
        const schema& extra = s.at("additionalItems");
        std::optional<rational> max = effective_max_items(s);
        std::vector<schema> slots;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (max && rational(static_cast<long long>(i)) >= *max) break;
            slots.push_back(items[i]);
        }
        rational list_len(static_cast<long long>(items.size()));
        // unspecified positions share additionalItems; two of them always collide
        std::size_t extra_slots = 0;
        if (!max) extra_slots = 2;
        else if (*max > list_len) {
            rational spare = *max - list_len;
            extra_slots = spare >= 2 ? 2 : 1;
        }
        for (std::size_t i = 0; i < extra_slots; ++i) slots.push_back(extra);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (std::size_t j = i + 1; j < slots.size(); ++j) {
                schema conj = simplify(
                    json_value::object({{"allOf", json_value::array({slots[i], slots[j]})}}),
                    rewrites());
                if (inhabited(conj)) return false;
            }
        }
        return true;
    }

    subtype_verdict object_sub(const schema& l, const schema& r, const std::string& path) {
        rational min_l = l.at("minProperties").as_number();
        rational min_r = r.at("minProperties").as_number();
        if (min_l < min_r)
            return subtype_verdict::does_not_hold(path + ": minProperties allows smaller objects");
        std::optional<rational> max_l, max_r;
        if (const json_value* m = l.find("maxProperties")) max_l = m->as_number();
        if (const json_value* m = r.find("maxProperties")) max_r = m->as_number();
        if (!max_l) {
            // the key languages may bound the object size on their own
            if (auto avail = available_keys(l))
                max_l = rational(static_cast<long long>(*avail));
        }
        if (max_r && (!max_l || *max_l > *max_r))
            return subtype_verdict::does_not_hold(path + ": maxProperties allows larger objects");

        std::set<std::string> required_l;
        if (const json_value* req = l.find("required"))
            for (const auto& k : req->as_array()) required_l.insert(k.as_string());
        if (const json_value* req = r.find("required"))
            for (const auto& k : req->as_array())
                if (!required_l.count(k.as_string()))
                    return subtype_verdict::does_not_hold(
                        path + ": right requires property '" + k.as_string()
                        + "' the left does not");

        for (const auto& [p1, s1] : l.at("patternProperties").as_object()) {
            if (!inhabited(s1)) continue; // keys of this class never occur on the left
            regex_lang l1 = lang_of_pattern(p1, opts.repeat_budget);
            for (const auto& [p2, s2] : r.at("patternProperties").as_object()) {
                regex_lang l2 = lang_of_pattern(p2, opts.repeat_budget);
                if (l1.intersect(l2).is_empty()) continue;
                subtype_verdict v =
                    compare(s1, s2, path + ".patternProperties[" + p2 + "]");
                if (!v.is_holds()) return v;
            }
        }
        return subtype_verdict::holds();
    }
};

// shared pipeline: meta-check, resolve, canonicalize, simplify
schema prepare(const schema& s, const check_options& opts) {
    validation_report report = validate_meta(s);
    if (!report.empty()) {
        std::string msg = "schema violates the draft-04 meta-schema:";
        for (const auto& v : report) msg += " " + v.path + " (" + v.message + ")";
        fail(errc::meta_invalid, msg);
    }
    schema resolved = resolve_refs(s);
    rewrite_limits limits{opts.oneof_branch_limit, opts.step_budget, opts.repeat_budget};
    return simplify(canonicalize(resolved, limits), limits);
}

subtype_verdict run_subschema(const schema& lhs, const schema& rhs,
                              const check_options& opts) {
    schema a, b;
    try {
        a = prepare(lhs, opts);
        b = prepare(rhs, opts);
    } catch (const error& e) {
        switch (e.code()) {
        case errc::recursive_ref:
            return subtype_verdict::undecidable(undecidable_reason::recursive_ref, e.what());
        case errc::unsupported_pattern:
            return subtype_verdict::undecidable(undecidable_reason::non_regular_pattern,
                                                e.what());
        case errc::capacity:
            return subtype_verdict::undecidable(undecidable_reason::capacity_limit, e.what());
        default:
            throw;
        }
    }
    checker c{opts};
    try {
        return c.compare(a, b, "$");
    } catch (const error& e) {
        if (e.code() == errc::capacity || e.code() == errc::unsupported_pattern)
            return subtype_verdict::undecidable(e.code() == errc::capacity
                                                    ? undecidable_reason::capacity_limit
                                                    : undecidable_reason::non_regular_pattern,
                                                e.what());
        throw;
    }
}

} // namespace

subtype_verdict is_subschema(const schema& lhs, const schema& rhs,
                             const check_options& options) {
    return run_subschema(lhs, rhs, options);
}

subtype_verdict is_equivalent(const schema& lhs, const schema& rhs,
                              const check_options& options) {
    subtype_verdict forward = is_subschema(lhs, rhs, options);
    if (forward.is_does_not_hold())
        return subtype_verdict::does_not_hold("forward: " + forward.witness());
    subtype_verdict backward = is_subschema(rhs, lhs, options);
    if (backward.is_does_not_hold())
        return subtype_verdict::does_not_hold("backward: " + backward.witness());
    if (forward.is_undecidable()) return forward;
    if (backward.is_undecidable()) return backward;
    return subtype_verdict::holds();
}

subtype_verdict check(const schema& lhs, const schema& rhs, check_direction direction,
                      const check_options& options) {
    switch (direction) {
    case check_direction::sub: return is_subschema(lhs, rhs, options);
    case check_direction::super: return is_subschema(rhs, lhs, options);
    case check_direction::equiv: return is_equivalent(lhs, rhs, options);
    }
    return subtype_verdict::undecidable(undecidable_reason::capacity_limit, "bad direction");
}

bool inhabited(const schema& simplified, const check_options& options) {
    checker c{options};
    return c.inhabited(simplified);
}

bool all_disjoint_items(const schema& array_node, const check_options& options) {
    checker c{options};
    return c.disjoint_items(array_node);
}

bool subtype_null(const schema& a, const schema& b) {
    return node_type(a) == json_type::null && node_type(b) == json_type::null;
}

bool subtype_boolean(const schema& a, const schema& b) {
    const json_array& ae = a.at("enum").as_array();
    const json_array& be = b.at("enum").as_array();
    for (const auto& v : ae)
        if (std::find(be.begin(), be.end(), v) == be.end()) return false;
    return true;
}

bool subtype_string(const schema& a, const schema& b) {
    return lang_of_pattern(b.at("pattern").as_string())
        .includes(lang_of_pattern(a.at("pattern").as_string()));
}

bool subtype_number(const number_constraints& lhs, const number_constraints& rhs,
                    const check_options& options) {
    point_meter meter{options.point_budget};
    number_union_checker nc{meter};
    number_set a{lhs.positives, lhs.negatives};
    number_set b{rhs.positives, rhs.negatives};
    return nc.includes(a, {b});
}

} // namespace jsonsub
