#include "jsonsub/error.hpp"
#include "jsonsub/json_value.hpp"

#include <doctest.h>
#include <generators.hpp>
#include <test_util.hpp>

#include <random>

using namespace jsonsub;
using testutil::J;

TEST_CASE("type_of maps values to their tags") {
    CHECK(type_of(J("null")) == json_type::null);
    CHECK(type_of(J("\"a\"")) == json_type::string);
    CHECK(type_of(J("[0.5, {}, \"a\"]")) == json_type::array);
    CHECK(type_of(J("true")) == json_type::boolean);
    CHECK(type_of(J("{}")) == json_type::object);
    CHECK(type_of(J("1.5")) == json_type::number);

    // integer distinction only in classifying mode
    CHECK(type_of(J("1")) == json_type::number);
    CHECK(type_of(J("1"), true) == json_type::integer);
    CHECK(type_of(J("1.0"), true) == json_type::integer);
    CHECK(type_of(J("1.5"), true) == json_type::number);
}

TEST_CASE("structural equality") {
    CHECK(J("{\"a\":1,\"b\":2}") == J("{\"b\":2,\"a\":1}"));
    CHECK(J("[1,2]") != J("[2,1]"));
    CHECK(J("1") == J("1.0")); // numbers compare by exact rational value
    CHECK(J("0.1") == J("1e-1"));
    CHECK(J("0.1") != J("0.10000000000000001"));
}

TEST_CASE("json_equal is an equivalence relation on random values") {
    std::mt19937 rng(7);
    std::vector<json_value> values;
    for (int i = 0; i < 60; ++i) values.push_back(testgen::random_document(rng));
    for (const auto& a : values) CHECK(a == a);
    for (const auto& a : values)
        for (const auto& b : values)
            CHECK((a == b) == (b == a));
    for (const auto& a : values)
        for (const auto& b : values)
            for (const auto& c : values)
                if (a == b && b == c) CHECK(a == c);
}

TEST_CASE("pointer resolution") {
    json_value root = J("{\"p\":{\"q\":7}}");
    CHECK(resolve_pointer(root, "#/p/q") == J("7"));
    CHECK(resolve_pointer(root, "#") == root);
    CHECK(resolve_pointer(J("{\"a\":[10,20]}"), "#/a/1") == J("20"));
    CHECK(resolve_pointer(J("{\"a~b\":{\"c/d\":1}}"), "#/a~0b/c~1d") == J("1"));

    CHECK_THROWS_AS(resolve_pointer(root, "#/missing"), error);
    CHECK_THROWS_AS(resolve_pointer(root, "p/q"), error);
    try {
        resolve_pointer(root, "#/p/zap");
    } catch (const error& e) {
        CHECK(e.code() == errc::pointer_not_found);
    }
}

TEST_CASE("pointer root is identity for random values") {
    std::mt19937 rng(11);
    for (int i = 0; i < 40; ++i) {
        json_value v = testgen::random_document(rng);
        CHECK(resolve_pointer(v, "#") == v);
    }
}

TEST_CASE("decimal literals parse exactly") {
    CHECK(parse_decimal("0.1") == rational(1, 10));
    CHECK(parse_decimal("1e-3") == rational(1, 1000));
    CHECK(parse_decimal("-2.50") == rational(-5, 2));
    CHECK(parse_decimal("123456789012345678901234567890")
          == rational(bigint("123456789012345678901234567890")));
    CHECK(is_multiple_of(parse_decimal("0.3"), parse_decimal("0.1")));

    CHECK(decimal_string(rational(1, 10)) == "0.1");
    CHECK(decimal_string(rational(-5, 2)) == "-2.5");
    CHECK(decimal_string(rational(5)) == "5");
    CHECK_THROWS_AS(decimal_string(rational(1, 3)), error);
}

TEST_CASE("serialization is deterministic and round-trips") {
    json_value v = J("{\"b\":[1,2.5,\"x\"],\"a\":{\"k\":null}}");
    std::string s = serialize_json(v);
    CHECK(s == "{\"a\":{\"k\":null},\"b\":[1,2.5,\"x\"]}");
    CHECK(parse_json(s) == v);

    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        json_value doc = testgen::random_document(rng);
        CHECK(parse_json(serialize_json(doc)) == doc);
    }
}

TEST_CASE("string lengths count code points") {
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("") == 0);
    CHECK(utf8_length("\xc3\xa9") == 1);         // e-acute
    CHECK(utf8_length("\xf0\x9f\x8d\x8c") == 1); // one astral code point
}

TEST_CASE("rational floor and ceil") {
    CHECK(rational_floor(rational(7, 2)) == rational(3));
    CHECK(rational_floor(rational(-7, 2)) == rational(-4));
    CHECK(rational_ceil(rational(7, 2)) == rational(4));
    CHECK(rational_ceil(rational(-7, 2)) == rational(-3));
    CHECK(rational_floor(rational(4)) == rational(4));
}
