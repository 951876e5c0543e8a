#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace jsonsub {

enum class anchor_mode {
    partial_match, // JSON Schema `pattern` semantics: the regex may match any substring
    full_match,    // the regex must match the whole string
};

// A regular language over Unicode code points. Values are cheap handles into
// a shared hash-consed term arena; all set algebra is O(1) symbolic
// construction, decisions (emptiness, inclusion, membership) run Brzozowski
// derivatives over character-class partitions. Immutable and safe to share
// across threads.
class regex_lang {
public:
    regex_lang(); // the empty language

    static regex_lang empty();
    static regex_lang epsilon();
    static regex_lang universe(); // all strings
    static regex_lang literal(std::string_view text);
    // strings with lo <= length and (when hi is set) length <= hi
    static regex_lang length_between(std::size_t lo, std::optional<std::size_t> hi);

    regex_lang intersect(regex_lang other) const;
    regex_lang union_with(regex_lang other) const;
    regex_lang complement() const;
    regex_lang subtract(regex_lang other) const;

    bool is_empty() const;
    // true iff L(sub) is a subset of L(*this)
    bool includes(regex_lang sub) const;
    bool equals(regex_lang other) const;
    bool matches(std::string_view text) const;

    // number of words, nullopt when infinite; saturates at cap
    std::optional<std::uint64_t> count_words(std::uint64_t cap = 1u << 20) const;
    // a shortest word, nullopt when empty
    std::optional<std::string> sample_word() const;

    // A pattern in the supported dialect denoting this language under
    // full-match semantics, without anchors. Complement/intersection results
    // go through automaton state elimination.
    std::string to_pattern() const;

    std::uint32_t id() const { return id_; }
    bool operator==(const regex_lang& other) const { return id_ == other.id_; }
    bool operator!=(const regex_lang& other) const { return id_ != other.id_; }
    bool operator<(const regex_lang& other) const { return id_ < other.id_; }

private:
    explicit regex_lang(std::uint32_t id) : id_(id) {}
    std::uint32_t id_;
    friend struct rx_access;
};

// Compiles a pattern in the supported dialect: literals, '.', character
// classes, grouping, '|', '*', '+', '?', '{m}', '{m,}', '{m,n}', '^'/'$'
// string anchors at branch boundaries, and the usual escapes. Look-around,
// backreferences, and repetitions beyond repeat_budget raise
// errc::unsupported_pattern.
regex_lang compile_pattern(std::string_view pattern, anchor_mode mode,
                           std::size_t repeat_budget = 1000);

// Pre-seeds the compile cache so a pattern string produced from `lang`
// compiles back to the identical term, keeping serialize/compile round
// trips stable.
void register_pattern(std::string_view pattern, anchor_mode mode, regex_lang lang,
                      std::size_t repeat_budget = 1000);

} // namespace jsonsub
