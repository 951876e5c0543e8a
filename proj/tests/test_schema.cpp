#include "jsonsub/error.hpp"
#include "jsonsub/schema.hpp"

#include <doctest.h>
#include <test_util.hpp>

using namespace jsonsub;
using testutil::J;

TEST_CASE("dom") {
    CHECK(dom(J("{\"type\":\"string\",\"pattern\":\"a\"}"))
          == std::set<std::string>{"type", "pattern"});
    CHECK(dom(schema_top()).empty());
    CHECK(dom(J("{\"allOf\":[{}],\"enum\":[1]}")) == std::set<std::string>{"allOf", "enum"});
}

TEST_CASE("top and bottom") {
    CHECK(is_top(schema_top()));
    CHECK(is_bottom(schema_bottom()));
    CHECK(is_bottom(J("{\"not\":{}}")));
    CHECK_FALSE(is_bottom(J("{\"not\":{},\"type\":\"string\"}")));
    CHECK_FALSE(is_top(J("{\"type\":\"string\"}")));
}

TEST_CASE("meta validation accepts well-formed schemas") {
    CHECK(validate_meta(J("{\"type\":\"string\",\"minLength\":1}")).empty());
    // the example column of the keyword overview
    CHECK(validate_meta(J("{\"type\":\"string\",\"minLength\":1,\"pattern\":\"[a-z]*\"}"))
              .empty());
    CHECK(validate_meta(J("{\"type\":\"number\",\"minimum\":0.0,\"multipleOf\":0.1}")).empty());
    CHECK(validate_meta(
              J("{\"type\":\"array\",\"items\":{\"type\":\"string\"},\"minItems\":1,"
                "\"uniqueItems\":true}"))
              .empty());
    CHECK(validate_meta(
              J("{\"type\":\"object\",\"properties\":{\"a\":{\"type\":\"string\"},"
                "\"b\":{\"enum\":[0,1]}}}"))
              .empty());
    CHECK(validate_meta(
              J("{\"anyOf\":[{\"type\":\"string\"},{\"$ref\":\"#/some/type\"}]}"))
              .empty());
    CHECK(validate_meta(J("{}")).empty());
    CHECK(validate_meta(J("{\"description\":\"free text\",\"unknown\":42}")).empty());
}

TEST_CASE("meta validation reports violations with paths") {
    validation_report r = validate_meta(J("{\"type\":\"string\",\"minLength\":-1}"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].path == "/minLength");

    r = validate_meta(J("{\"type\":\"strng\"}"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].path == "/type");

    CHECK_FALSE(validate_meta(J("{\"minLength\":0.5}")).empty());
    CHECK_FALSE(validate_meta(J("{\"multipleOf\":0}")).empty());
    CHECK_FALSE(validate_meta(J("{\"multipleOf\":-2}")).empty());
    CHECK_FALSE(validate_meta(J("{\"enum\":[]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"enum\":[1,1.0]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"required\":[]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"required\":[\"a\",\"a\"]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"type\":[]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"type\":[\"string\",\"string\"]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"allOf\":[]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"items\":[]}")).empty());
    CHECK_FALSE(validate_meta(J("{\"exclusiveMinimum\":1}")).empty());
    // violations nested inside subschemas are found too
    r = validate_meta(J("{\"properties\":{\"x\":{\"minimum\":\"nope\"}}}"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].path == "/properties/x/minimum");
}

TEST_CASE("ref resolution: one-step substitution") {
    schema s = J("{\"definitions\":{\"a\":{\"type\":\"null\"}},"
                 "\"properties\":{\"x\":{\"$ref\":\"#/definitions/a\"}},"
                 "\"type\":\"object\"}");
    schema resolved = resolve_refs(s);
    CHECK(resolved.at("properties").at("x") == J("{\"type\":\"null\"}"));
    CHECK(resolved.at("type") == J("\"object\""));
}

TEST_CASE("ref resolution: chains collapse to the target") {
    schema s = J("{\"definitions\":{"
                 "\"a\":{\"$ref\":\"#/definitions/b\"},"
                 "\"b\":{\"type\":\"number\"}},"
                 "\"properties\":{\"x\":{\"$ref\":\"#/definitions/a\"}},"
                 "\"type\":\"object\"}");
    schema resolved = resolve_refs(s);
    CHECK(resolved.at("properties").at("x") == J("{\"type\":\"number\"}"));
}

TEST_CASE("ref resolution: recursion is an error") {
    CHECK_THROWS_AS(resolve_refs(J("{\"$ref\":\"#\"}")), error);
    try {
        resolve_refs(J("{\"$ref\":\"#\"}"));
    } catch (const error& e) {
        CHECK(e.code() == errc::recursive_ref);
    }
    // mutual recursion through definitions
    try {
        resolve_refs(J("{\"definitions\":{"
                       "\"a\":{\"$ref\":\"#/definitions/b\"},"
                       "\"b\":{\"$ref\":\"#/definitions/a\"}},"
                       "\"allOf\":[{\"$ref\":\"#/definitions/a\"}]}"));
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::recursive_ref);
    }
}

TEST_CASE("ref resolution: dangling refs are reported") {
    try {
        resolve_refs(J("{\"$ref\":\"#/definitions/missing\"}"));
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::ref_target_missing);
    }
    try {
        resolve_refs(J("{\"$ref\":\"http://example.com/schema.json#\"}"));
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::ref_target_missing);
    }
}

TEST_CASE("ref resolution is idempotent on ref-free schemas") {
    schema s = J("{\"type\":\"object\",\"properties\":{\"x\":{\"enum\":[1,2]}},"
                 "\"items\":[{\"type\":\"null\"}],\"not\":{\"type\":\"string\"}}");
    CHECK(resolve_refs(s) == s);
    schema resolved = resolve_refs(J("{\"definitions\":{\"a\":{\"type\":\"null\"}},"
                                     "\"not\":{\"$ref\":\"#/definitions/a\"}}"));
    CHECK(resolve_refs(resolved) == resolved);
}

TEST_CASE("cross-document refs through a store") {
    document_store store;
    store.add("lib.json", J("{\"definitions\":{\"id\":{\"type\":\"integer\"}}}"));
    schema s = J("{\"properties\":{\"x\":{\"$ref\":\"lib.json#/definitions/id\"}},"
                 "\"type\":\"object\"}");
    schema resolved = resolve_refs(s, store, "main.json");
    CHECK(resolved.at("properties").at("x") == J("{\"type\":\"integer\"}"));
}

TEST_CASE("keyword table") {
    const auto& string_kws = keywords_for(json_type::string);
    CHECK(std::find(string_kws.begin(), string_kws.end(), "pattern") != string_kws.end());
    CHECK(keywords_for(json_type::null).empty());
    CHECK(keywords_for(json_type::boolean).empty());
    CHECK(keywords_for(json_type::integer) == keywords_for(json_type::number));
    REQUIRE(keyword_default("minLength"));
    CHECK(*keyword_default("minLength") == J("0"));
    CHECK(*keyword_default("additionalItems") == J("{}"));
    CHECK(keyword_default("maximum") == nullptr); // infinite bounds have no JSON form
    CHECK(keyword_default("maxLength") == nullptr);
}
