#include "jsonsub/json_value.hpp"
#include "jsonsub/error.hpp"

#include <boost/functional/hash.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace jsonsub {

const char* to_string(errc code) {
    switch (code) {
    case errc::parse_error: return "parse_error";
    case errc::pointer_syntax: return "pointer_syntax";
    case errc::pointer_not_found: return "pointer_not_found";
    case errc::meta_invalid: return "meta_invalid";
    case errc::recursive_ref: return "recursive_ref";
    case errc::ref_target_missing: return "ref_target_missing";
    case errc::unsupported_pattern: return "unsupported_pattern";
    case errc::capacity: return "capacity";
    case errc::number_format: return "number_format";
    case errc::io_error: return "io_error";
    }
    return "unknown";
}

rational parse_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    bigint mantissa = 0;
    long long exponent10 = 0;
    bool any_digit = false;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
        mantissa = mantissa * 10 + (text[i] - '0');
        any_digit = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            mantissa = mantissa * 10 + (text[i] - '0');
            --exponent10;
            any_digit = true;
        }
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            exp_neg = text[i] == '-';
            ++i;
        }
        long long exp = 0;
        bool exp_digit = false;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
            exp = exp * 10 + (text[i] - '0');
            exp_digit = true;
            if (exp > 1'000'000) fail(errc::number_format, "exponent out of range");
        }
        if (!exp_digit) fail(errc::number_format, "malformed exponent");
        exponent10 += exp_neg ? -exp : exp;
    }
    if (!any_digit || i != text.size())
        fail(errc::number_format, "malformed number literal: " + std::string(text));
    rational value(mantissa);
    if (exponent10 > 0) {
        bigint p = boost::multiprecision::pow(bigint(10), static_cast<unsigned>(exponent10));
        value *= rational(p);
    } else if (exponent10 < 0) {
        bigint p = boost::multiprecision::pow(bigint(10), static_cast<unsigned>(-exponent10));
        value /= rational(p);
    }
    if (negative) value = -value;
    return value;
}

bool is_integral(const rational& value) {
    return boost::multiprecision::denominator(value) == 1;
}

bool is_multiple_of(const rational& value, const rational& step) {
    if (step == 0) return false;
    return is_integral(rational(value / step));
}

rational rational_floor(const rational& value) {
    bigint num = boost::multiprecision::numerator(value);
    bigint den = boost::multiprecision::denominator(value);
    bigint q = num / den;
    if (num < 0 && q * den != num) --q;
    return rational(q);
}

rational rational_ceil(const rational& value) {
    return -rational_floor(-value);
}

std::string decimal_string(const rational& value) {
    bigint num = boost::multiprecision::numerator(value);
    bigint den = boost::multiprecision::denominator(value);
    bool negative = num < 0;
    if (negative) num = -num;
    // scale denominator to a power of ten: den must be 2^a * 5^b
    unsigned twos = 0, fives = 0;
    bigint d = den;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1)
        fail(errc::number_format,
             "number " + num.str() + "/" + den.str() + " has no finite decimal form");
    unsigned digits = std::max(twos, fives);
    num *= boost::multiprecision::pow(bigint(2), digits - twos);
    num *= boost::multiprecision::pow(bigint(5), digits - fives);
    std::string s = num.str();
    std::string out;
    if (negative) out.push_back('-');
    if (digits == 0) {
        out += s;
        return out;
    }
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    out += s.substr(0, s.size() - digits);
    std::string frac = s.substr(s.size() - digits);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) {
        out.push_back('.');
        out += frac;
    }
    return out;
}

const char* to_string(json_type t) {
    switch (t) {
    case json_type::boolean: return "boolean";
    case json_type::null: return "null";
    case json_type::number: return "number";
    case json_type::integer: return "integer";
    case json_type::string: return "string";
    case json_type::array: return "array";
    case json_type::object: return "object";
    }
    return "unknown";
}

bool json_type_from_string(std::string_view name, json_type& out) {
    if (name == "boolean") out = json_type::boolean;
    else if (name == "null") out = json_type::null;
    else if (name == "number") out = json_type::number;
    else if (name == "integer") out = json_type::integer;
    else if (name == "string") out = json_type::string;
    else if (name == "array") out = json_type::array;
    else if (name == "object") out = json_type::object;
    else return false;
    return true;
}

json_type type_of(const json_value& v, bool distinguish_integer) {
    if (v.is_null()) return json_type::null;
    if (v.is_boolean()) return json_type::boolean;
    if (v.is_number())
        return distinguish_integer && is_integral(v.as_number()) ? json_type::integer
                                                                 : json_type::number;
    if (v.is_string()) return json_type::string;
    if (v.is_array()) return json_type::array;
    return json_type::object;
}

bool json_value::operator<(const json_value& other) const {
    auto rank = [](const json_value& v) { return static_cast<int>(type_of(v)); };
    if (rank(*this) != rank(other)) return rank(*this) < rank(other);
    if (is_boolean()) return !as_boolean() && other.as_boolean();
    if (is_number()) return as_number() < other.as_number();
    if (is_string()) return as_string() < other.as_string();
    if (is_array()) return as_array() < other.as_array();
    if (is_object()) return as_object() < other.as_object();
    return false; // nulls are equal
}

bool json_value::contains(const std::string& key) const {
    return is_object() && as_object().count(key) > 0;
}

const json_value* json_value::find(const std::string& key) const {
    if (!is_object()) return nullptr;
    auto it = as_object().find(key);
    return it == as_object().end() ? nullptr : &it->second;
}

json_value& json_value::operator[](const std::string& key) {
    if (!is_object()) data_ = json_object{};
    return std::get<json_object>(data_)[key];
}

const json_value& json_value::at(const std::string& key) const {
    auto it = as_object().find(key);
    if (it == as_object().end()) fail(errc::pointer_not_found, "missing key: " + key);
    return it->second;
}

json_value json_value::object(std::initializer_list<std::pair<std::string, json_value>> init) {
    json_object o;
    for (const auto& [k, v] : init) o.emplace(k, v);
    return json_value(std::move(o));
}

json_value json_value::array(std::initializer_list<json_value> init) {
    return json_value(json_array(init));
}

namespace {

// builds exact values through the SAX interface; floats arrive with their
// raw literal so 0.1 stays 1/10
struct exact_builder : nlohmann::json_sax<nlohmann::json> {
    std::vector<json_value> stack;
    std::vector<std::string> keys;
    json_value result;
    bool done = false;

    void emplace(json_value v) {
        if (stack.empty()) {
            result = std::move(v);
            done = true;
        } else if (stack.back().is_array()) {
            stack.back().as_array().push_back(std::move(v));
        } else {
            stack.back().as_object().emplace(std::move(keys.back()), std::move(v));
            keys.pop_back();
        }
    }

    bool null() override { emplace(json_value(nullptr)); return true; }
    bool boolean(bool b) override { emplace(json_value(b)); return true; }
    bool number_integer(number_integer_t v) override {
        emplace(json_value(rational(static_cast<long long>(v))));
        return true;
    }
    bool number_unsigned(number_unsigned_t v) override {
        emplace(json_value(rational(bigint(v))));
        return true;
    }
    bool number_float(number_float_t, const string_t& raw) override {
        emplace(json_value(parse_decimal(raw)));
        return true;
    }
    bool string(string_t& s) override { emplace(json_value(std::string(s))); return true; }
    bool binary(binary_t&) override { return false; }
    bool start_object(std::size_t) override {
        stack.emplace_back(json_object{});
        return true;
    }
    bool key(string_t& k) override { keys.push_back(std::string(k)); return true; }
    bool end_object() override {
        json_value v = std::move(stack.back());
        stack.pop_back();
        emplace(std::move(v));
        return true;
    }
    bool start_array(std::size_t) override {
        stack.emplace_back(json_array{});
        return true;
    }
    bool end_array() override {
        json_value v = std::move(stack.back());
        stack.pop_back();
        emplace(std::move(v));
        return true;
    }
    bool parse_error(std::size_t pos, const std::string&,
                     const nlohmann::detail::exception& e) override {
        fail(errc::parse_error, "JSON parse error at byte " + std::to_string(pos) + ": " + e.what());
    }
};

void escape_string(const std::string& s, std::string& out) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\b': out += "\\b"; break;
        case '\f': out += "\\f"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out.push_back(static_cast<char>(c));
            }
        }
    }
    out.push_back('"');
}

void serialize_rec(const json_value& v, std::string& out, bool pretty, int indent) {
    auto pad = [&](int n) {
        if (pretty) {
            out.push_back('\n');
            out.append(static_cast<std::size_t>(n) * 2, ' ');
        }
    };
    if (v.is_null()) {
        out += "null";
    } else if (v.is_boolean()) {
        out += v.as_boolean() ? "true" : "false";
    } else if (v.is_number()) {
        out += decimal_string(v.as_number());
    } else if (v.is_string()) {
        escape_string(v.as_string(), out);
    } else if (v.is_array()) {
        const auto& a = v.as_array();
        out.push_back('[');
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i) out.push_back(',');
            pad(indent + 1);
            serialize_rec(a[i], out, pretty, indent + 1);
        }
        if (!a.empty()) pad(indent);
        out.push_back(']');
    } else {
        const auto& o = v.as_object();
        out.push_back('{');
        bool first = true;
        for (const auto& [k, val] : o) {
            if (!first) out.push_back(',');
            first = false;
            pad(indent + 1);
            escape_string(k, out);
            out.push_back(':');
            if (pretty) out.push_back(' ');
            serialize_rec(val, out, pretty, indent + 1);
        }
        if (!o.empty()) pad(indent);
        out.push_back('}');
    }
}

} // namespace

json_value parse_json(std::string_view text) {
    exact_builder builder;
    nlohmann::json::sax_parse(text, &builder);
    if (!builder.done) fail(errc::parse_error, "empty JSON input");
    return std::move(builder.result);
}

json_value parse_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

std::string serialize_json(const json_value& v, bool pretty) {
    std::string out;
    serialize_rec(v, out, pretty, 0);
    return out;
}

std::size_t hash_value(const json_value& v) {
    std::size_t seed = static_cast<std::size_t>(type_of(v));
    if (v.is_boolean()) {
        boost::hash_combine(seed, v.as_boolean());
    } else if (v.is_number()) {
        boost::hash_combine(seed, boost::hash<rational>{}(v.as_number()));
    } else if (v.is_string()) {
        boost::hash_combine(seed, v.as_string());
    } else if (v.is_array()) {
        for (const auto& e : v.as_array()) boost::hash_combine(seed, hash_value(e));
    } else if (v.is_object()) {
        for (const auto& [k, val] : v.as_object()) {
            boost::hash_combine(seed, k);
            boost::hash_combine(seed, hash_value(val));
        }
    }
    return seed;
}

namespace {

std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            int hi, lo;
            auto hex = [](char c) {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'a' && c <= 'f') return c - 'a' + 10;
                if (c >= 'A' && c <= 'F') return c - 'A' + 10;
                return -1;
            };
            hi = hex(s[i + 1]);
            lo = hex(s[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(s[i]);
    }
    return out;
}

std::string unescape_segment(std::string_view seg) {
    std::string out;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg[i] == '~') {
            if (i + 1 >= seg.size()) fail(errc::pointer_syntax, "dangling ~ in pointer");
            if (seg[i + 1] == '0') out.push_back('~');
            else if (seg[i + 1] == '1') out.push_back('/');
            else fail(errc::pointer_syntax, "bad escape in pointer segment");
            ++i;
        } else {
            out.push_back(seg[i]);
        }
    }
    return out;
}

} // namespace

const json_value& resolve_pointer(const json_value& root, std::string_view pointer) {
    if (pointer.empty() || pointer[0] != '#')
        fail(errc::pointer_syntax, "pointer must start with '#': " + std::string(pointer));
    pointer.remove_prefix(1);
    if (pointer.empty()) return root;
    if (pointer[0] != '/')
        fail(errc::pointer_syntax, "pointer fragment must start with '/'");
    const json_value* cur = &root;
    std::size_t pos = 1;
    while (pos <= pointer.size()) {
        std::size_t next = pointer.find('/', pos);
        if (next == std::string_view::npos) next = pointer.size();
        std::string seg = unescape_segment(percent_decode(pointer.substr(pos, next - pos)));
        if (cur->is_object()) {
            const json_value* child = cur->find(seg);
            if (!child)
                fail(errc::pointer_not_found, "no member '" + seg + "' in pointer target");
            cur = child;
        } else if (cur->is_array()) {
            std::size_t idx = 0;
            auto [p, ec] = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
            if (ec != std::errc() || p != seg.data() + seg.size())
                fail(errc::pointer_syntax, "non-numeric array index: " + seg);
            if (idx >= cur->as_array().size())
                fail(errc::pointer_not_found, "array index out of range: " + seg);
            cur = &cur->as_array()[idx];
        } else {
            fail(errc::pointer_not_found, "pointer descends into a scalar");
        }
        pos = next + 1;
    }
    return *cur;
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        char32_t cp;
        std::size_t len;
        if (c < 0x80) { cp = c; len = 1; }
        else if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
        else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
        else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
        else { cp = 0xFFFD; len = 1; }
        for (std::size_t k = 1; k < len && i + k < s.size(); ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
    std::string out;
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

} // namespace jsonsub
