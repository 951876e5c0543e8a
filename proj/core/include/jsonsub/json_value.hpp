#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jsonsub {

// Numbers are exact rationals so that decimal literals, multipleOf
// arithmetic, and equality never suffer floating-point drift.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

rational parse_decimal(std::string_view text);
// Renders a rational whose denominator is of the form 2^a * 5^b.
// Anything else cannot be written as a finite decimal and throws.
std::string decimal_string(const rational& value);
bool is_integral(const rational& value);
bool is_multiple_of(const rational& value, const rational& step);
rational rational_floor(const rational& value);
rational rational_ceil(const rational& value);

enum class json_type : std::uint8_t {
    boolean,
    null,
    number,
    integer,
    string,
    array,
    object,
};

const char* to_string(json_type t);
bool json_type_from_string(std::string_view name, json_type& out);

class json_value;
using json_array = std::vector<json_value>;
using json_object = std::map<std::string, json_value>;

class json_value {
public:
    json_value() : data_(nullptr) {}
    json_value(std::nullptr_t) : data_(nullptr) {}
    json_value(bool b) : data_(b) {}
    json_value(int n) : data_(rational(n)) {}
    json_value(long long n) : data_(rational(n)) {}
    json_value(rational n) : data_(std::move(n)) {}
    json_value(const char* s) : data_(std::string(s)) {}
    json_value(std::string s) : data_(std::move(s)) {}
    json_value(json_array a) : data_(std::move(a)) {}
    json_value(json_object o) : data_(std::move(o)) {}

    bool is_null() const { return std::holds_alternative<std::nullptr_t>(data_); }
    bool is_boolean() const { return std::holds_alternative<bool>(data_); }
    bool is_number() const { return std::holds_alternative<rational>(data_); }
    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_array() const { return std::holds_alternative<json_array>(data_); }
    bool is_object() const { return std::holds_alternative<json_object>(data_); }

    bool as_boolean() const { return std::get<bool>(data_); }
    const rational& as_number() const { return std::get<rational>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    const json_array& as_array() const { return std::get<json_array>(data_); }
    json_array& as_array() { return std::get<json_array>(data_); }
    const json_object& as_object() const { return std::get<json_object>(data_); }
    json_object& as_object() { return std::get<json_object>(data_); }

    bool operator==(const json_value& other) const { return data_ == other.data_; }
    bool operator!=(const json_value& other) const { return !(*this == other); }
    // total order used for deterministic sorting; not meaningful semantically
    bool operator<(const json_value& other) const;

    // object helpers
    bool contains(const std::string& key) const;
    const json_value* find(const std::string& key) const;
    json_value& operator[](const std::string& key);
    const json_value& at(const std::string& key) const;

    static json_value object(std::initializer_list<std::pair<std::string, json_value>> init);
    static json_value array(std::initializer_list<json_value> init);

private:
    std::variant<std::nullptr_t, bool, rational, std::string, json_array, json_object> data_;
};

// Maps a value to its type tag. With distinguish_integer, integral numbers
// report json_type::integer, mirroring how draft-04 treats 1 as a valid
// "integer"; otherwise all numbers report json_type::number.
json_type type_of(const json_value& v, bool distinguish_integer = false);

inline bool json_equal(const json_value& a, const json_value& b) { return a == b; }

// JSON pointer in "#/a/b" fragment syntax with ~0/~1 escapes.
const json_value& resolve_pointer(const json_value& root, std::string_view pointer);

json_value parse_json(std::string_view text);
json_value parse_json_file(const std::string& path);
// Deterministic: object keys sorted, numbers in canonical decimal form.
std::string serialize_json(const json_value& v, bool pretty = false);

std::size_t hash_value(const json_value& v);

// Counts Unicode code points; draft-04 string lengths are code points,
// not bytes. Input must be valid UTF-8 (guaranteed after parse_json).
std::size_t utf8_length(std::string_view s);
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(const std::vector<char32_t>& cps);

} // namespace jsonsub
