#include "jsonsub/regex.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/json_value.hpp" // utf8 helpers

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>
#include <vector>

namespace jsonsub {

struct rx_access {
    static regex_lang wrap(std::uint32_t id) { return regex_lang(id); }
    static std::uint32_t id(regex_lang lang) { return lang.id(); }
};

namespace {

constexpr char32_t max_char = 0x10FFFF;

// ---------------------------------------------------------------- charset

// sorted, disjoint, merged inclusive intervals of code points
struct charset {
    std::vector<std::pair<char32_t, char32_t>> iv;

    static charset none() { return {}; }
    static charset all() { return {{{0, max_char}}}; }
    static charset single(char32_t c) { return {{{c, c}}}; }
    static charset range(char32_t lo, char32_t hi) {
        if (lo > hi) return none();
        return {{{lo, hi}}};
    }

    bool empty() const { return iv.empty(); }
    bool is_all() const { return iv.size() == 1 && iv[0].first == 0 && iv[0].second == max_char; }

    bool contains(char32_t c) const {
        auto it = std::upper_bound(iv.begin(), iv.end(), c,
                                   [](char32_t x, const auto& p) { return x < p.first; });
        return it != iv.begin() && c <= std::prev(it)->second;
    }

    char32_t lowest() const { return iv.front().first; }

    std::uint64_t size() const {
        std::uint64_t n = 0;
        for (auto& [a, b] : iv) n += static_cast<std::uint64_t>(b) - a + 1;
        return n;
    }

    void normalize() {
        std::sort(iv.begin(), iv.end());
        std::vector<std::pair<char32_t, char32_t>> out;
        for (auto& [a, b] : iv) {
            if (!out.empty() && a <= out.back().second + 1 && out.back().second + 1 != 0)
                out.back().second = std::max(out.back().second, b);
            else
                out.emplace_back(a, b);
        }
        iv = std::move(out);
    }

    friend charset cs_union(const charset& a, const charset& b) {
        charset out = a;
        out.iv.insert(out.iv.end(), b.iv.begin(), b.iv.end());
        out.normalize();
        return out;
    }

    friend charset cs_intersect(const charset& a, const charset& b) {
        charset out;
        std::size_t i = 0, j = 0;
        while (i < a.iv.size() && j < b.iv.size()) {
            char32_t lo = std::max(a.iv[i].first, b.iv[j].first);
            char32_t hi = std::min(a.iv[i].second, b.iv[j].second);
            if (lo <= hi) out.iv.emplace_back(lo, hi);
            if (a.iv[i].second < b.iv[j].second) ++i; else ++j;
        }
        return out;
    }

    friend charset cs_complement(const charset& a) {
        charset out;
        char32_t next = 0;
        bool open = true;
        for (auto& [lo, hi] : a.iv) {
            if (lo > next) out.iv.emplace_back(next, lo - 1);
            if (hi == max_char) { open = false; break; }
            next = hi + 1;
        }
        if (open) out.iv.emplace_back(next, max_char);
        return out;
    }

    bool operator==(const charset& other) const { return iv == other.iv; }
    bool operator<(const charset& other) const { return iv < other.iv; }
};

std::size_t hash_charset(const charset& cs) {
    std::size_t seed = cs.iv.size();
    for (auto& [a, b] : cs.iv) {
        seed ^= a + 0x9e3779b9 + (seed << 6) + (seed >> 2);
        seed ^= b + 0x9e3779b9 + (seed << 6) + (seed >> 2);
    }
    return seed;
}

// ------------------------------------------------------------- term arena

enum class rx_kind : std::uint8_t { empty, eps, chars, concat, alt, conj, neg, star };

struct rx_node {
    rx_kind kind;
    bool nullable;
    charset cs;                     // chars only
    std::vector<std::uint32_t> kids; // concat: ordered; alt/conj: sorted set; neg/star: one
};

struct node_key {
    rx_kind kind;
    charset cs;
    std::vector<std::uint32_t> kids;
    bool operator==(const node_key& o) const {
        return kind == o.kind && cs == o.cs && kids == o.kids;
    }
};

struct node_key_hash {
    std::size_t operator()(const node_key& k) const {
        std::size_t seed = static_cast<std::size_t>(k.kind);
        seed ^= hash_charset(k.cs) + 0x9e3779b9 + (seed << 6) + (seed >> 2);
        for (auto id : k.kids) seed ^= id + 0x9e3779b9 + (seed << 6) + (seed >> 2);
        return seed;
    }
};

struct arena {
    std::recursive_mutex mutex;
    std::vector<rx_node> nodes;
    std::unordered_map<node_key, std::uint32_t, node_key_hash> intern;
    // derivative memo keyed by (node, representative char)
    std::unordered_map<std::uint64_t, std::uint32_t> deriv_memo;
    std::unordered_map<std::uint32_t, std::vector<charset>> class_memo;
    std::unordered_map<std::uint32_t, bool> empty_memo;
    std::map<std::pair<std::string, int>, std::uint32_t> compile_memo;

    std::uint32_t id_empty, id_eps, id_any, id_universe;

    arena() {
        id_empty = put({rx_kind::empty, false, {}, {}});
        id_eps = put({rx_kind::eps, true, {}, {}});
        id_any = put({rx_kind::chars, false, charset::all(), {}});
        id_universe = put({rx_kind::star, true, {}, {id_any}});
    }

    std::uint32_t put(rx_node n) {
        node_key key{n.kind, n.cs, n.kids};
        auto it = intern.find(key);
        if (it != intern.end()) return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back(std::move(n));
        intern.emplace(std::move(key), id);
        return id;
    }

    const rx_node& at(std::uint32_t id) const { return nodes[id]; }
};

arena& rx() {
    static arena* a = new arena();
    return *a;
}

// --------------------------------------------------------- constructors

std::uint32_t mk_chars(const charset& cs) {
    if (cs.empty()) return rx().id_empty;
    return rx().put({rx_kind::chars, false, cs, {}});
}

std::uint32_t mk_concat(std::vector<std::uint32_t> kids);
std::uint32_t mk_alt(std::vector<std::uint32_t> kids);
std::uint32_t mk_conj(std::vector<std::uint32_t> kids);
std::uint32_t mk_neg(std::uint32_t kid);
std::uint32_t mk_star(std::uint32_t kid);

std::uint32_t mk_concat(std::vector<std::uint32_t> kids) {
    auto& a = rx();
    std::vector<std::uint32_t> flat;
    for (auto id : kids) {
        if (id == a.id_empty) return a.id_empty;
        if (id == a.id_eps) continue;
        const rx_node& n = a.at(id);
        if (n.kind == rx_kind::concat)
            flat.insert(flat.end(), n.kids.begin(), n.kids.end());
        else
            flat.push_back(id);
    }
    if (flat.empty()) return a.id_eps;
    if (flat.size() == 1) return flat[0];
    bool nullable = true;
    for (auto id : flat) nullable = nullable && a.at(id).nullable;
    return a.put({rx_kind::concat, nullable, {}, std::move(flat)});
}

std::uint32_t mk_alt(std::vector<std::uint32_t> kids) {
    auto& a = rx();
    std::set<std::uint32_t> members;
    charset merged;
    std::vector<std::uint32_t> work(kids.begin(), kids.end());
    while (!work.empty()) {
        std::uint32_t id = work.back();
        work.pop_back();
        if (id == a.id_empty) continue;
        if (id == a.id_universe) return a.id_universe;
        const rx_node& n = a.at(id);
        if (n.kind == rx_kind::alt) {
            work.insert(work.end(), n.kids.begin(), n.kids.end());
        } else if (n.kind == rx_kind::chars) {
            merged = cs_union(merged, n.cs);
        } else {
            members.insert(id);
        }
    }
    if (!merged.empty()) members.insert(mk_chars(merged));
    if (members.empty()) return a.id_empty;
    if (members.size() == 1) return *members.begin();
    bool nullable = false;
    for (auto id : members) nullable = nullable || a.at(id).nullable;
    return a.put({rx_kind::alt, nullable, {}, {members.begin(), members.end()}});
}

std::uint32_t mk_conj(std::vector<std::uint32_t> kids) {
    auto& a = rx();
    std::set<std::uint32_t> members;
    std::vector<std::uint32_t> work(kids.begin(), kids.end());
    bool have_chars = false;
    charset merged = charset::all();
    while (!work.empty()) {
        std::uint32_t id = work.back();
        work.pop_back();
        if (id == a.id_empty) return a.id_empty;
        if (id == a.id_universe) continue;
        const rx_node& n = a.at(id);
        if (n.kind == rx_kind::conj) {
            work.insert(work.end(), n.kids.begin(), n.kids.end());
        } else if (n.kind == rx_kind::chars) {
            merged = cs_intersect(merged, n.cs);
            have_chars = true;
        } else {
            members.insert(id);
        }
    }
    if (have_chars) {
        std::uint32_t id = mk_chars(merged);
        if (id == a.id_empty) return a.id_empty;
        members.insert(id);
    }
    if (members.empty()) return a.id_universe;
    if (members.size() == 1) return *members.begin();
    bool nullable = true;
    for (auto id : members) nullable = nullable && a.at(id).nullable;
    return a.put({rx_kind::conj, nullable, {}, {members.begin(), members.end()}});
}

std::uint32_t mk_neg(std::uint32_t kid) {
    auto& a = rx();
    if (kid == a.id_empty) return a.id_universe;
    if (kid == a.id_universe) return a.id_empty;
    const rx_node& n = a.at(kid);
    if (n.kind == rx_kind::neg) return n.kids[0];
    return a.put({rx_kind::neg, !n.nullable, {}, {kid}});
}

std::uint32_t mk_star(std::uint32_t kid) {
    auto& a = rx();
    if (kid == a.id_empty || kid == a.id_eps) return a.id_eps;
    const rx_node& n = a.at(kid);
    if (n.kind == rx_kind::star) return kid;
    return a.put({rx_kind::star, true, {}, {kid}});
}

// --------------------------------------------------------- derivatives

bool nullable(std::uint32_t id) { return rx().at(id).nullable; }

std::uint32_t deriv(std::uint32_t id, char32_t c);

std::uint32_t deriv_concat(const std::vector<std::uint32_t>& kids, std::size_t from, char32_t c) {
    // d(r . rest) = d(r) . rest | (nullable(r) ? d(rest) : empty)
    std::vector<std::uint32_t> first{deriv(kids[from], c)};
    first.insert(first.end(), kids.begin() + static_cast<std::ptrdiff_t>(from) + 1, kids.end());
    std::uint32_t lhs = mk_concat(std::move(first));
    if (!nullable(kids[from]) || from + 1 >= kids.size()) return lhs;
    return mk_alt({lhs, deriv_concat(kids, from + 1, c)});
}

std::uint32_t deriv_uncached(std::uint32_t id, char32_t c) {
    auto& a = rx();
    const rx_node n = a.at(id); // copy: arena may reallocate during recursion
    switch (n.kind) {
    case rx_kind::empty:
    case rx_kind::eps:
        return a.id_empty;
    case rx_kind::chars:
        return n.cs.contains(c) ? a.id_eps : a.id_empty;
    case rx_kind::concat:
        return deriv_concat(n.kids, 0, c);
    case rx_kind::alt: {
        std::vector<std::uint32_t> out;
        out.reserve(n.kids.size());
        for (auto k : n.kids) out.push_back(deriv(k, c));
        return mk_alt(std::move(out));
    }
    case rx_kind::conj: {
        std::vector<std::uint32_t> out;
        out.reserve(n.kids.size());
        for (auto k : n.kids) out.push_back(deriv(k, c));
        return mk_conj(std::move(out));
    }
    case rx_kind::neg:
        return mk_neg(deriv(n.kids[0], c));
    case rx_kind::star:
        return mk_concat({deriv(n.kids[0], c), id});
    }
    return a.id_empty;
}

// partition of the alphabet such that the derivative of `id` is uniform on
// each class (a refinement of the true uniformity classes)
std::vector<charset> deriv_classes(std::uint32_t id);

std::vector<charset> refine(const std::vector<charset>& p, const std::vector<charset>& q) {
    std::vector<charset> out;
    for (const auto& x : p)
        for (const auto& y : q) {
            charset z = cs_intersect(x, y);
            if (!z.empty()) out.push_back(std::move(z));
        }
    return out;
}

std::vector<charset> deriv_classes_uncached(std::uint32_t id) {
    auto& a = rx();
    const rx_node n = a.at(id);
    switch (n.kind) {
    case rx_kind::empty:
    case rx_kind::eps:
        return {charset::all()};
    case rx_kind::chars: {
        std::vector<charset> out{n.cs};
        charset rest = cs_complement(n.cs);
        if (!rest.empty()) out.push_back(std::move(rest));
        return out;
    }
    case rx_kind::concat: {
        std::vector<charset> out = deriv_classes(n.kids[0]);
        for (std::size_t i = 0; i + 1 < n.kids.size() && nullable(n.kids[i]); ++i)
            out = refine(out, deriv_classes(n.kids[i + 1]));
        return out;
    }
    case rx_kind::alt:
    case rx_kind::conj: {
        std::vector<charset> out{charset::all()};
        for (auto k : n.kids) out = refine(out, deriv_classes(k));
        return out;
    }
    case rx_kind::neg:
    case rx_kind::star:
        return deriv_classes(n.kids[0]);
    }
    return {charset::all()};
}

std::vector<charset> deriv_classes(std::uint32_t id) {
    auto& a = rx();
    auto it = a.class_memo.find(id);
    if (it != a.class_memo.end()) return it->second;
    auto classes = deriv_classes_uncached(id);
    a.class_memo.emplace(id, classes);
    return classes;
}

std::uint32_t deriv(std::uint32_t id, char32_t c) {
    auto& a = rx();
    // canonicalize c to its class representative so the memo stays small
    char32_t rep = c;
    for (const auto& cls : deriv_classes(id))
        if (cls.contains(c)) { rep = cls.lowest(); break; }
    std::uint64_t key = (static_cast<std::uint64_t>(id) << 21) | rep;
    auto it = a.deriv_memo.find(key);
    if (it != a.deriv_memo.end()) return it->second;
    std::uint32_t d = deriv_uncached(id, rep);
    a.deriv_memo.emplace(key, d);
    return d;
}

// ------------------------------------------------------------ decisions

constexpr std::size_t explore_budget = 200000;

bool lang_empty(std::uint32_t root) {
    auto& a = rx();
    auto memo = a.empty_memo.find(root);
    if (memo != a.empty_memo.end()) return memo->second;
    if (nullable(root)) {
        a.empty_memo.emplace(root, false);
        return false;
    }
    std::set<std::uint32_t> seen{root};
    std::deque<std::uint32_t> queue{root};
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        for (const auto& cls : deriv_classes(cur)) {
            std::uint32_t next = deriv(cur, cls.lowest());
            if (nullable(next)) {
                a.empty_memo.emplace(root, false);
                return false;
            }
            if (seen.insert(next).second) queue.push_back(next);
        }
        if (seen.size() > explore_budget)
            fail(errc::capacity, "regex emptiness check exceeded the state budget");
    }
    // nothing reachable accepts: every explored state denotes the empty language
    for (auto id : seen) a.empty_memo.emplace(id, true);
    return true;
}

// deterministic automaton snapshot used for counting and serialization
struct dfa {
    std::vector<std::uint32_t> node_of;
    std::vector<bool> accepting;
    std::vector<std::vector<std::pair<charset, std::uint32_t>>> trans;
    std::uint32_t start = 0;
};

dfa explore(std::uint32_t root, std::size_t max_states) {
    dfa out;
    std::unordered_map<std::uint32_t, std::uint32_t> index;
    auto state_of = [&](std::uint32_t id) {
        auto it = index.find(id);
        if (it != index.end()) return it->second;
        std::uint32_t s = static_cast<std::uint32_t>(out.node_of.size());
        index.emplace(id, s);
        out.node_of.push_back(id);
        out.accepting.push_back(nullable(id));
        out.trans.emplace_back();
        return s;
    };
    out.start = state_of(root);
    for (std::uint32_t s = 0; s < out.node_of.size(); ++s) {
        if (out.node_of.size() > max_states)
            fail(errc::capacity, "regex automaton exceeded the state budget");
        std::uint32_t id = out.node_of[s];
        for (const auto& cls : deriv_classes(id)) {
            std::uint32_t next_state = state_of(deriv(id, cls.lowest()));
            out.trans[s].emplace_back(cls, next_state);
        }
    }
    return out;
}

// states from which an accepting state is reachable
std::vector<bool> useful_states(const dfa& d) {
    std::vector<std::vector<std::uint32_t>> rev(d.node_of.size());
    for (std::uint32_t s = 0; s < d.trans.size(); ++s)
        for (const auto& [cs, t] : d.trans[s]) rev[t].push_back(s);
    std::vector<bool> useful(d.node_of.size(), false);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < d.node_of.size(); ++s)
        if (d.accepting[s]) { useful[s] = true; queue.push_back(s); }
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        for (auto p : rev[cur])
            if (!useful[p]) { useful[p] = true; queue.push_back(p); }
    }
    return useful;
}

// ---------------------------------------------------------- serialization

bool printable_ast(std::uint32_t id) {
    const rx_node& n = rx().at(id);
    if (n.kind == rx_kind::neg || n.kind == rx_kind::conj) return false;
    for (auto k : n.kids)
        if (!printable_ast(k)) return false;
    return true;
}

void print_char(char32_t c, bool in_class, std::string& out) {
    static const std::string_view meta = "^$\\.|?*+()[]{}";
    static const std::string_view class_meta = "\\]^-[";
    if (c == '\n') { out += "\\n"; return; }
    if (c == '\r') { out += "\\r"; return; }
    if (c == '\t') { out += "\\t"; return; }
    if (c < 0x20 || c == 0x7F) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned>(c));
        out += buf;
        return;
    }
    if (c > 0x7E) {
        if (c <= 0xFFFF) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
            out += buf;
        } else {
            out += utf8_encode({c});
        }
        return;
    }
    std::string_view metas = in_class ? class_meta : meta;
    if (metas.find(static_cast<char>(c)) != std::string_view::npos) out.push_back('\\');
    out.push_back(static_cast<char>(c));
}

void print_charset(const charset& cs, std::string& out) {
    if (cs.is_all()) { out.push_back('.'); return; }
    if (cs.iv.size() == 1 && cs.iv[0].first == cs.iv[0].second) {
        print_char(cs.iv[0].first, false, out);
        return;
    }
    charset comp = cs_complement(cs);
    bool negate = comp.iv.size() < cs.iv.size();
    const charset& body = negate ? comp : cs;
    out.push_back('[');
    if (negate) out.push_back('^');
    for (auto& [lo, hi] : body.iv) {
        print_char(lo, true, out);
        if (hi > lo) {
            if (hi > lo + 1) out.push_back('-');
            print_char(hi, true, out);
        }
    }
    out.push_back(']');
}

enum prec { prec_alt = 0, prec_concat = 1, prec_repeat = 2 };

void print_ast(std::uint32_t id, int context, std::string& out) {
    auto& a = rx();
    const rx_node& n = a.at(id);
    switch (n.kind) {
    case rx_kind::empty:
        out += "[]";
        return;
    case rx_kind::eps:
        out += "()";
        return;
    case rx_kind::chars:
        print_charset(n.cs, out);
        return;
    case rx_kind::star: {
        std::string body;
        print_ast(n.kids[0], prec_repeat, body);
        out += body;
        out.push_back('*');
        return;
    }
    case rx_kind::concat: {
        std::string body;
        for (auto k : n.kids) print_ast(k, prec_concat, body);
        if (context > prec_concat) {
            out.push_back('(');
            out += body;
            out.push_back(')');
        } else {
            out += body;
        }
        return;
    }
    case rx_kind::alt: {
        // print eps|X as X?
        std::vector<std::uint32_t> kids = n.kids;
        auto eps_it = std::find(kids.begin(), kids.end(), a.id_eps);
        if (eps_it != kids.end() && kids.size() > 1) {
            kids.erase(eps_it);
            std::uint32_t rest = mk_alt(kids);
            std::string body;
            print_ast(rest, prec_repeat, body);
            out += body;
            out.push_back('?');
            return;
        }
        std::string body;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) body.push_back('|');
            print_ast(kids[i], prec_alt, body);
        }
        if (context > prec_alt) {
            out.push_back('(');
            out += body;
            out.push_back(')');
        } else {
            out += body;
        }
        return;
    }
    case rx_kind::neg:
    case rx_kind::conj:
        assert(false && "negation/conjunction must go through state elimination");
        out += "[]";
        return;
    }
}

std::uint32_t via_state_elimination(std::uint32_t root) {
    auto& a = rx();
    dfa d = explore(root, 4000);
    std::vector<bool> useful = useful_states(d);
    if (!useful[d.start]) return a.id_empty;

    // GNFA with virtual start S and accept F holding AST-labeled edges
    std::uint32_t n = static_cast<std::uint32_t>(d.node_of.size());
    std::uint32_t S = n, F = n + 1;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge;
    auto add_edge = [&](std::uint32_t u, std::uint32_t v, std::uint32_t lang) {
        if (lang == a.id_empty) return;
        auto [it, inserted] = edge.emplace(std::make_pair(u, v), lang);
        if (!inserted) it->second = mk_alt({it->second, lang});
    };
    add_edge(S, d.start, a.id_eps);
    std::vector<std::uint32_t> alive;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!useful[s]) continue;
        alive.push_back(s);
        if (d.accepting[s]) add_edge(s, F, a.id_eps);
        std::map<std::uint32_t, charset> merged;
        for (const auto& [cs, t] : d.trans[s]) {
            if (!useful[t]) continue;
            auto [it, inserted] = merged.emplace(t, cs);
            if (!inserted) it->second = cs_union(it->second, cs);
        }
        for (auto& [t, cs] : merged) add_edge(s, t, mk_chars(cs));
    }

    while (!alive.empty()) {
        // pick the state with the fewest in*out edges
        std::uint32_t best = alive[0];
        std::size_t best_cost = static_cast<std::size_t>(-1);
        for (auto s : alive) {
            std::size_t ins = 0, outs = 0;
            for (auto& [uv, lang] : edge) {
                if (uv.second == s && uv.first != s) ++ins;
                if (uv.first == s && uv.second != s) ++outs;
            }
            if (ins * outs < best_cost) { best_cost = ins * outs; best = s; }
        }
        alive.erase(std::find(alive.begin(), alive.end(), best));

        std::uint32_t self = a.id_eps;
        auto self_it = edge.find({best, best});
        if (self_it != edge.end()) self = mk_star(self_it->second);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> ins, outs;
        for (auto& [uv, lang] : edge) {
            if (uv.second == best && uv.first != best) ins.emplace_back(uv.first, lang);
            if (uv.first == best && uv.second != best) outs.emplace_back(uv.second, lang);
        }
        for (auto& [u, in_lang] : ins)
            for (auto& [v, out_lang] : outs)
                add_edge(u, v, mk_concat({in_lang, self, out_lang}));
        for (auto it = edge.begin(); it != edge.end();) {
            if (it->first.first == best || it->first.second == best) it = edge.erase(it);
            else ++it;
        }
    }

    auto it = edge.find({S, F});
    return it == edge.end() ? a.id_empty : it->second;
}

std::string lang_to_pattern(std::uint32_t root) {
    std::uint32_t ast = printable_ast(root) ? root : via_state_elimination(root);
    auto& a = rx();
    if (ast == a.id_empty) return "[]";
    if (ast == a.id_eps) return "()";
    std::string out;
    print_ast(ast, prec_alt, out);
    return out;
}

// -------------------------------------------------------------- parsing

struct pattern_parser {
    std::vector<char32_t> cp;
    std::size_t pos = 0;
    std::size_t repeat_budget;
    std::size_t repeat_spent = 0;

    explicit pattern_parser(std::string_view pattern, std::size_t budget)
        : cp(utf8_decode(pattern)), repeat_budget(budget) {}

    [[noreturn]] void reject(const std::string& why) {
        fail(errc::unsupported_pattern, why + " at offset " + std::to_string(pos));
    }

    bool eof() const { return pos >= cp.size(); }
    char32_t peek() const { return cp[pos]; }
    bool eat(char32_t c) {
        if (!eof() && cp[pos] == c) { ++pos; return true; }
        return false;
    }

    // parse tree with anchor markers; lowered to arena nodes afterwards
    struct pnode {
        enum kind_t { chars, concat, alt, rep, anchor_start, anchor_end } kind;
        charset cs;
        std::vector<pnode> kids;
        std::size_t lo = 0;
        std::optional<std::size_t> hi;
    };

    static charset class_digit() { return charset::range('0', '9'); }
    static charset class_word() {
        charset cs = cs_union(charset::range('a', 'z'), charset::range('A', 'Z'));
        cs = cs_union(cs, charset::range('0', '9'));
        return cs_union(cs, charset::single('_'));
    }
    static charset class_space() {
        charset cs;
        for (char32_t c : {U'\t', U'\n', U'\v', U'\f', U'\r', U' '}) cs = cs_union(cs, charset::single(c));
        return cs;
    }

    charset parse_class_escape(bool& is_class) {
        // assumes backslash consumed
        if (eof()) reject("dangling backslash");
        char32_t c = cp[pos++];
        is_class = true;
        switch (c) {
        case 'd': return class_digit();
        case 'D': return cs_complement(class_digit());
        case 'w': return class_word();
        case 'W': return cs_complement(class_word());
        case 's': return class_space();
        case 'S': return cs_complement(class_space());
        default: break;
        }
        is_class = false;
        switch (c) {
        case 'n': return charset::single('\n');
        case 'r': return charset::single('\r');
        case 't': return charset::single('\t');
        case 'f': return charset::single('\f');
        case 'v': return charset::single('\v');
        case '0': return charset::single('\0');
        case 'b': reject("word-boundary assertions are not supported");
        case 'B': reject("word-boundary assertions are not supported");
        case 'x': {
            char32_t v = 0;
            for (int i = 0; i < 2; ++i) {
                if (eof()) reject("truncated \\x escape");
                v = v * 16 + hex_digit(cp[pos++]);
            }
            return charset::single(v);
        }
        case 'u': {
            char32_t v = 0;
            for (int i = 0; i < 4; ++i) {
                if (eof()) reject("truncated \\u escape");
                v = v * 16 + hex_digit(cp[pos++]);
            }
            return charset::single(v);
        }
        case '1': case '2': case '3': case '4': case '5':
        case '6': case '7': case '8': case '9':
            reject("backreferences are not supported");
        default:
            return charset::single(c);
        }
    }

    char32_t hex_digit(char32_t c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        reject("bad hex digit in escape");
    }

    charset parse_char_class() {
        // assumes '[' consumed
        bool negate = eat('^');
        charset cs;
        if (eat(']')) {
            // ECMA reads [] as the empty class and [^] as any char
            return negate ? charset::all() : charset::none();
        }
        while (true) {
            if (eof()) reject("unterminated character class");
            if (eat(']')) break;
            charset first;
            bool first_is_class = false;
            if (eat('\\')) first = parse_class_escape(first_is_class);
            else first = charset::single(cp[pos++]);
            if (!first_is_class && !eof() && peek() == '-' && pos + 1 < cp.size()
                && cp[pos + 1] != ']') {
                ++pos; // '-'
                charset second;
                bool second_is_class = false;
                if (eat('\\')) second = parse_class_escape(second_is_class);
                else second = charset::single(cp[pos++]);
                if (second_is_class) reject("class escape cannot end a range");
                cs = cs_union(cs, charset::range(first.lowest(), second.lowest()));
            } else {
                cs = cs_union(cs, first);
            }
        }
        return negate ? cs_complement(cs) : cs;
    }

    pnode parse_alternation() {
        pnode node{pnode::alt, {}, {}, 0, {}};
        node.kids.push_back(parse_sequence());
        while (eat('|')) node.kids.push_back(parse_sequence());
        if (node.kids.size() == 1) return std::move(node.kids[0]);
        return node;
    }

    pnode parse_sequence() {
        pnode node{pnode::concat, {}, {}, 0, {}};
        while (!eof() && peek() != '|' && peek() != ')') node.kids.push_back(parse_repeat());
        return node;
    }

    pnode parse_repeat() {
        pnode atom = parse_atom();
        while (!eof()) {
            std::size_t lo;
            std::optional<std::size_t> hi;
            if (eat('*')) { lo = 0; hi = std::nullopt; }
            else if (eat('+')) { lo = 1; hi = std::nullopt; }
            else if (eat('?')) { lo = 0; hi = 1; }
            else if (peek() == '{') {
                std::size_t save = pos;
                if (!parse_bounds(lo, hi)) { pos = save; break; }
            } else {
                break;
            }
            eat('?'); // lazy quantifiers accept the same language
            if (atom.kind == pnode::anchor_start || atom.kind == pnode::anchor_end)
                reject("quantified anchor");
            pnode rep{pnode::rep, {}, {}, lo, hi};
            rep.kids.push_back(std::move(atom));
            atom = std::move(rep);
        }
        return atom;
    }

    bool parse_bounds(std::size_t& lo, std::optional<std::size_t>& hi) {
        // returns false when the brace sequence is not a quantifier; ECMA
        // then treats '{' as a literal
        std::size_t p = pos + 1;
        auto read_int = [&](std::size_t& out) {
            if (p >= cp.size() || cp[p] < '0' || cp[p] > '9') return false;
            out = 0;
            while (p < cp.size() && cp[p] >= '0' && cp[p] <= '9') {
                out = out * 10 + (cp[p] - '0');
                if (out > 1'000'000) fail(errc::unsupported_pattern, "repetition count too large");
                ++p;
            }
            return true;
        };
        std::size_t a = 0;
        if (!read_int(a)) return false;
        if (p < cp.size() && cp[p] == '}') {
            lo = a; hi = a; pos = p + 1;
            return true;
        }
        if (p < cp.size() && cp[p] == ',') {
            ++p;
            if (p < cp.size() && cp[p] == '}') {
                lo = a; hi = std::nullopt; pos = p + 1;
                return true;
            }
            std::size_t b = 0;
            if (!read_int(b)) return false;
            if (p < cp.size() && cp[p] == '}') {
                if (b < a) reject("repetition bounds out of order");
                lo = a; hi = b; pos = p + 1;
                return true;
            }
        }
        return false;
    }

    pnode parse_atom() {
        if (eof()) reject("expected an atom");
        char32_t c = cp[pos];
        if (c == '^') { ++pos; return {pnode::anchor_start, {}, {}, 0, {}}; }
        if (c == '$') { ++pos; return {pnode::anchor_end, {}, {}, 0, {}}; }
        if (c == '(') {
            ++pos;
            if (!eof() && peek() == '?') {
                if (pos + 1 < cp.size() && cp[pos + 1] == ':') {
                    pos += 2; // non-capturing group
                } else {
                    reject("look-around and special groups are not supported");
                }
            }
            pnode inner = parse_alternation();
            if (!eat(')')) reject("unbalanced parenthesis");
            return inner;
        }
        if (c == ')') reject("unbalanced parenthesis");
        if (c == '[') {
            ++pos;
            return {pnode::chars, parse_char_class(), {}, 0, {}};
        }
        if (c == '.') {
            ++pos;
            // the dialect reads '.' as any character
            return {pnode::chars, charset::all(), {}, 0, {}};
        }
        if (c == '\\') {
            ++pos;
            bool ignored = false;
            return {pnode::chars, parse_class_escape(ignored), {}, 0, {}};
        }
        if (c == '*' || c == '+' || c == '?') reject("quantifier with nothing to repeat");
        ++pos;
        return {pnode::chars, charset::single(c), {}, 0, {}};
    }

    bool contains_anchor(const pnode& n) const {
        if (n.kind == pnode::anchor_start || n.kind == pnode::anchor_end) return true;
        for (const auto& k : n.kids)
            if (contains_anchor(k)) return true;
        return false;
    }

    std::uint32_t lower(const pnode& n) {
        switch (n.kind) {
        case pnode::chars:
            return mk_chars(n.cs);
        case pnode::concat: {
            std::vector<std::uint32_t> kids;
            for (const auto& k : n.kids) kids.push_back(lower(k));
            return mk_concat(std::move(kids));
        }
        case pnode::alt: {
            std::vector<std::uint32_t> kids;
            for (const auto& k : n.kids) kids.push_back(lower(k));
            return mk_alt(std::move(kids));
        }
        case pnode::rep: {
            std::size_t width = n.hi ? *n.hi : n.lo + 1;
            repeat_spent += std::max<std::size_t>(width, 1);
            if (repeat_spent > repeat_budget)
                fail(errc::unsupported_pattern,
                     "bounded repetition exceeds the expansion budget");
            std::uint32_t body = lower(n.kids[0]);
            std::vector<std::uint32_t> kids(n.lo, body);
            if (!n.hi) {
                kids.push_back(mk_star(body));
            } else {
                std::uint32_t opt = rx().id_eps;
                for (std::size_t i = n.lo; i < *n.hi; ++i)
                    opt = mk_alt({rx().id_eps, mk_concat({body, opt})});
                kids.push_back(opt);
            }
            return mk_concat(std::move(kids));
        }
        case pnode::anchor_start:
        case pnode::anchor_end:
            fail(errc::unsupported_pattern,
                 "anchors are only supported at the boundaries of a branch");
        }
        return rx().id_empty;
    }

    std::uint32_t compile(anchor_mode mode) {
        pnode top = parse_alternation();
        if (!eof()) reject("trailing input");
        std::vector<pnode> branches;
        if (top.kind == pnode::alt) branches = std::move(top.kids);
        else branches.push_back(std::move(top));

        std::vector<std::uint32_t> lowered;
        for (auto& br : branches) {
            std::vector<pnode> seq;
            if (br.kind == pnode::concat) seq = std::move(br.kids);
            else seq.push_back(std::move(br));
            bool anchored_left = false, anchored_right = false;
            std::size_t begin = 0, end = seq.size();
            while (begin < end && seq[begin].kind == pnode::anchor_start) {
                anchored_left = true;
                ++begin;
            }
            while (end > begin && seq[end - 1].kind == pnode::anchor_end) {
                anchored_right = true;
                --end;
            }
            pnode body{pnode::concat, {}, {}, 0, {}};
            for (std::size_t i = begin; i < end; ++i) body.kids.push_back(std::move(seq[i]));
            if (contains_anchor(body))
                fail(errc::unsupported_pattern,
                     "anchors are only supported at the boundaries of a branch");
            std::uint32_t lang = lower(body);
            if (mode == anchor_mode::partial_match) {
                std::vector<std::uint32_t> parts;
                if (!anchored_left) parts.push_back(rx().id_universe);
                parts.push_back(lang);
                if (!anchored_right) parts.push_back(rx().id_universe);
                lang = mk_concat(std::move(parts));
            }
            lowered.push_back(lang);
        }
        return mk_alt(std::move(lowered));
    }
};

std::unique_lock<std::recursive_mutex> rx_lock() {
    return std::unique_lock<std::recursive_mutex>(rx().mutex);
}

} // namespace

// -------------------------------------------------------------- public api

regex_lang::regex_lang() : id_(0) {
    auto lock = rx_lock();
    id_ = rx().id_empty;
}

regex_lang regex_lang::empty() {
    auto lock = rx_lock();
    return regex_lang(rx().id_empty);
}

regex_lang regex_lang::epsilon() {
    auto lock = rx_lock();
    return regex_lang(rx().id_eps);
}

regex_lang regex_lang::universe() {
    auto lock = rx_lock();
    return regex_lang(rx().id_universe);
}

regex_lang regex_lang::literal(std::string_view text) {
    auto lock = rx_lock();
    std::vector<std::uint32_t> kids;
    for (char32_t c : utf8_decode(text)) kids.push_back(mk_chars(charset::single(c)));
    return regex_lang(mk_concat(std::move(kids)));
}

regex_lang regex_lang::length_between(std::size_t lo, std::optional<std::size_t> hi) {
    auto lock = rx_lock();
    auto& a = rx();
    std::vector<std::uint32_t> kids(lo, a.id_any);
    if (!hi) {
        kids.push_back(a.id_universe);
    } else {
        if (*hi < lo) return regex_lang(a.id_empty);
        std::uint32_t opt = a.id_eps;
        for (std::size_t i = lo; i < *hi; ++i)
            opt = mk_alt({a.id_eps, mk_concat({a.id_any, opt})});
        kids.push_back(opt);
    }
    return regex_lang(mk_concat(std::move(kids)));
}

regex_lang regex_lang::intersect(regex_lang other) const {
    auto lock = rx_lock();
    return regex_lang(mk_conj({id_, other.id_}));
}

regex_lang regex_lang::union_with(regex_lang other) const {
    auto lock = rx_lock();
    return regex_lang(mk_alt({id_, other.id_}));
}

regex_lang regex_lang::complement() const {
    auto lock = rx_lock();
    return regex_lang(mk_neg(id_));
}

regex_lang regex_lang::subtract(regex_lang other) const {
    auto lock = rx_lock();
    return regex_lang(mk_conj({id_, mk_neg(other.id_)}));
}

bool regex_lang::is_empty() const {
    auto lock = rx_lock();
    return lang_empty(id_);
}

bool regex_lang::includes(regex_lang sub) const {
    auto lock = rx_lock();
    return lang_empty(mk_conj({sub.id_, mk_neg(id_)}));
}

bool regex_lang::equals(regex_lang other) const {
    if (id_ == other.id_) return true;
    return includes(other) && other.includes(*this);
}

bool regex_lang::matches(std::string_view text) const {
    auto lock = rx_lock();
    std::uint32_t cur = id_;
    for (char32_t c : utf8_decode(text)) {
        cur = deriv(cur, c);
        if (cur == rx().id_empty) return false;
    }
    return nullable(cur);
}

std::optional<std::uint64_t> regex_lang::count_words(std::uint64_t cap) const {
    auto lock = rx_lock();
    dfa d = explore(id_, 20000);
    std::vector<bool> useful = useful_states(d);
    if (!useful[d.start]) return 0;
    // cycle within useful states means infinitely many words
    enum { white, grey, black };
    std::vector<int> color(d.node_of.size(), white);
    std::vector<std::uint64_t> count(d.node_of.size(), 0);
    bool infinite = false;
    auto dfs = [&](auto&& self, std::uint32_t s) -> void {
        color[s] = grey;
        std::uint64_t total = d.accepting[s] ? 1 : 0;
        for (const auto& [cs, t] : d.trans[s]) {
            if (!useful[t]) continue;
            if (color[t] == grey) { infinite = true; continue; }
            if (color[t] == white) self(self, t);
            if (infinite) break;
            std::uint64_t ways = cs.size();
            std::uint64_t add = (count[t] > 0 && ways > cap / count[t]) ? cap : ways * count[t];
            total = total > cap - std::min(add, cap) ? cap : total + std::min(add, cap);
        }
        count[s] = std::min(total, cap);
        color[s] = black;
    };
    dfs(dfs, d.start);
    if (infinite) return std::nullopt;
    return count[d.start];
}

std::optional<std::string> regex_lang::sample_word() const {
    auto lock = rx_lock();
    if (lang_empty(id_)) return std::nullopt;
    // BFS over derivatives for a shortest witness
    std::map<std::uint32_t, std::pair<std::uint32_t, char32_t>> parent;
    std::deque<std::uint32_t> queue{id_};
    parent.emplace(id_, std::make_pair(id_, U'\0'));
    std::uint32_t found = id_;
    if (!nullable(id_)) {
        bool done = false;
        while (!queue.empty() && !done) {
            std::uint32_t cur = queue.front();
            queue.pop_front();
            for (const auto& cls : deriv_classes(cur)) {
                char32_t c = cls.lowest();
                std::uint32_t next = deriv(cur, c);
                if (next == rx().id_empty) continue;
                if (parent.emplace(next, std::make_pair(cur, c)).second) {
                    if (nullable(next)) { found = next; done = true; break; }
                    queue.push_back(next);
                }
            }
            if (parent.size() > explore_budget)
                fail(errc::capacity, "regex witness search exceeded the state budget");
        }
        if (!done) return std::nullopt;
    }
    std::vector<char32_t> cps;
    for (std::uint32_t cur = found; cur != id_;) {
        auto [prev, c] = parent.at(cur);
        cps.push_back(c);
        cur = prev;
    }
    std::reverse(cps.begin(), cps.end());
    return utf8_encode(cps);
}

std::string regex_lang::to_pattern() const {
    auto lock = rx_lock();
    return lang_to_pattern(id_);
}

regex_lang compile_pattern(std::string_view pattern, anchor_mode mode,
                           std::size_t repeat_budget) {
    auto lock = rx_lock();
    auto key = std::make_pair(std::string(pattern),
                              (mode == anchor_mode::partial_match ? 1 : 0) * 2'000'003
                                  + static_cast<int>(repeat_budget % 2'000'003));
    auto it = rx().compile_memo.find(key);
    if (it != rx().compile_memo.end()) return rx_access::wrap(it->second);
    pattern_parser parser(pattern, repeat_budget);
    std::uint32_t id = parser.compile(mode);
    rx().compile_memo.emplace(std::move(key), id);
    return rx_access::wrap(id);
}

void register_pattern(std::string_view pattern, anchor_mode mode, regex_lang lang,
                      std::size_t repeat_budget) {
    auto lock = rx_lock();
    auto key = std::make_pair(std::string(pattern),
                              (mode == anchor_mode::partial_match ? 1 : 0) * 2'000'003
                                  + static_cast<int>(repeat_budget % 2'000'003));
    rx().compile_memo.emplace(std::move(key), rx_access::id(lang));
}

} // namespace jsonsub
