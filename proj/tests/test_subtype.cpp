#include "jsonsub/canonical.hpp"
#include "jsonsub/error.hpp"
#include "jsonsub/simplify.hpp"
#include "jsonsub/subtype.hpp"
#include "jsonsub/validator.hpp"

#include <doctest.h>
#include <generators.hpp>
#include <test_util.hpp>

#include <random>

using namespace jsonsub;
using testutil::J;

namespace {

subtype_verdict sub(const std::string& a, const std::string& b) {
    return is_subschema(J(a), J(b));
}

bool holds(const std::string& a, const std::string& b) { return sub(a, b).is_holds(); }

schema prep(const std::string& text) { return simplify(canonicalize(J(text))); }

} // namespace

TEST_CASE("integer is a subtype of number") {
    CHECK(holds("{\"type\":\"integer\"}", "{\"type\":\"number\"}"));
    CHECK(sub("{\"type\":\"number\"}", "{\"type\":\"integer\"}").is_does_not_hold());
}

TEST_CASE("enum widening is backward compatible, narrowing is not") {
    const char* v061 = "{\"type\":\"string\",\"enum\":[\"staff\",\"wires\",\"freelance\","
                       "\"other\"]}";
    const char* v062 = "{\"type\":\"string\",\"enum\":[\"staff\",\"wires\",\"freelance\","
                       "\"stock\",\"handout\",\"other\"]}";
    CHECK(holds(v061, v062));
    CHECK(sub(v062, v061).is_does_not_hold());
}

TEST_CASE("uninhabited schemas are subtypes of everything") {
    CHECK(holds("{\"type\":\"number\",\"minimum\":5,\"maximum\":0}", "{\"type\":\"string\"}"));
    CHECK(holds("{\"type\":\"string\",\"enum\":[1]}", "{\"type\":\"boolean\"}"));
    CHECK(holds("{\"not\":{}}", "{\"type\":\"null\"}"));
}

TEST_CASE("enums compare by value, not order") {
    CHECK(is_equivalent(J("{\"enum\":[1,2]}"), J("{\"enum\":[2,1]}")).is_holds());
}

TEST_CASE("type lists compare as sets") {
    CHECK(is_equivalent(J("{\"type\":[\"string\",\"null\"]}"),
                        J("{\"type\":[\"null\",\"string\"]}"))
              .is_holds());
    CHECK(is_equivalent(J("{\"type\":\"string\"}"), J("{\"type\":\"number\"}"))
              .is_does_not_hold());
}

TEST_CASE("bottom below everything, everything below top") {
    for (const char* s :
         {"{\"type\":\"string\"}", "{\"enum\":[1,\"a\"]}", "{\"type\":\"object\"}",
          "{\"anyOf\":[{\"type\":\"null\"},{\"type\":\"array\"}]}"}) {
        CHECK(holds("{\"not\":{}}", s));
        CHECK(holds(s, "{}"));
    }
}

TEST_CASE("single-type helpers") {
    CHECK(subtype_null(prep("{\"type\":\"null\"}"), prep("{\"type\":\"null\"}")));
    CHECK(subtype_boolean(prep("{\"type\":\"boolean\",\"enum\":[true]}"),
                          prep("{\"type\":\"boolean\"}")));
    CHECK_FALSE(subtype_boolean(prep("{\"type\":\"boolean\"}"),
                                prep("{\"type\":\"boolean\",\"enum\":[true]}")));
    CHECK(subtype_string(prep("{\"type\":\"string\",\"pattern\":\"^[A-Za-z0-9.]+$\"}"),
                         prep("{\"type\":\"string\"}")));
    CHECK_FALSE(subtype_string(prep("{\"type\":\"string\"}"),
                               prep("{\"type\":\"string\",\"pattern\":\"^a$\"}")));
}

TEST_CASE("number containment with steps") {
    CHECK(holds("{\"type\":\"number\",\"multipleOf\":4}",
                "{\"type\":\"number\",\"multipleOf\":2}"));
    CHECK(sub("{\"type\":\"number\",\"multipleOf\":2}",
              "{\"type\":\"number\",\"multipleOf\":4}")
              .is_does_not_hold());
    CHECK(holds("{\"type\":\"number\",\"multipleOf\":1}",
                "{\"type\":\"number\",\"multipleOf\":1}"));
    CHECK(holds("{\"type\":\"number\",\"minimum\":0,\"maximum\":10,\"multipleOf\":3}",
                "{\"type\":\"number\",\"minimum\":0,\"maximum\":10}"));
    CHECK(holds("{\"type\":\"number\",\"minimum\":0,\"maximum\":10,\"multipleOf\":3}",
                "{\"type\":\"number\",\"minimum\":0,\"maximum\":9}"));
    CHECK(sub("{\"type\":\"number\",\"minimum\":0,\"maximum\":10,\"multipleOf\":3}",
              "{\"type\":\"number\",\"minimum\":0,\"maximum\":8}")
              .is_does_not_hold());
    CHECK(holds("{\"type\":\"integer\",\"minimum\":1}",
                "{\"type\":\"number\",\"minimum\":0,\"exclusiveMinimum\":true}"));
    // fractional steps
    CHECK(holds("{\"type\":\"number\",\"multipleOf\":1}",
                "{\"type\":\"number\",\"multipleOf\":0.5}"));
    CHECK(sub("{\"type\":\"number\",\"multipleOf\":0.5}",
              "{\"type\":\"number\",\"multipleOf\":0.3}")
              .is_does_not_hold());
}

TEST_CASE("subtype_number on constraint sets agrees with brute force") {
    // positives intersect, negatives carve out; oracle enumerates integers
    number_constraints lhs, rhs;
    lhs.positives.push_back(numeric_range{{}, {}, false, false, rational(4)});
    rhs.positives.push_back(numeric_range{{}, {}, false, false, rational(2)});
    CHECK(subtype_number(lhs, rhs));
    CHECK_FALSE(subtype_number(rhs, lhs));

    number_constraints left;
    left.positives.push_back(
        numeric_range{rational(0), rational(100), false, false, rational(2)});
    left.negatives.push_back(numeric_range{{}, {}, false, false, rational(3)});
    number_constraints right;
    right.positives.push_back(
        numeric_range{rational(-10), rational(200), false, false, rational(1)});
    right.negatives.push_back(numeric_range{{}, {}, false, false, rational(6)});
    // left: even, not multiple of 3 => never multiple of 6; contained
    CHECK(subtype_number(left, right));
    // tighten the right: exclude multiples of 4 as well; 2 is still fine but 4 is not
    right.negatives.push_back(numeric_range{{}, {}, false, false, rational(4)});
    CHECK_FALSE(subtype_number(left, right));
}

TEST_CASE("negated number constraints decide through divisibility") {
    // everything except multiples of 2 is contained in everything except
    // multiples of 6's complement reasoning
    CHECK(holds("{\"allOf\":[{\"type\":\"number\"},"
                "{\"not\":{\"type\":\"number\",\"multipleOf\":2}}]}",
                "{\"allOf\":[{\"type\":\"number\"},"
                "{\"not\":{\"type\":\"number\",\"multipleOf\":6}}]}"));
    CHECK(sub("{\"allOf\":[{\"type\":\"number\"},"
              "{\"not\":{\"type\":\"number\",\"multipleOf\":6}}]}",
              "{\"allOf\":[{\"type\":\"number\"},"
              "{\"not\":{\"type\":\"number\",\"multipleOf\":2}}]}")
              .is_does_not_hold());
}

TEST_CASE("array rules") {
    CHECK(holds("{\"type\":\"array\",\"items\":[{\"enum\":[0]},{\"enum\":[1]}],"
                "\"maxItems\":2}",
                "{\"type\":\"array\",\"uniqueItems\":true}"));
    CHECK(sub("{\"type\":\"array\"}", "{\"type\":\"array\",\"minItems\":1}")
              .is_does_not_hold());
    CHECK(holds("{\"type\":\"array\",\"minItems\":2,\"maxItems\":3}",
                "{\"type\":\"array\",\"minItems\":1,\"maxItems\":4}"));
    CHECK(holds("{\"type\":\"array\",\"items\":{\"type\":\"integer\"}}",
                "{\"type\":\"array\",\"items\":{\"type\":\"number\"}}"));
    CHECK(sub("{\"type\":\"array\",\"items\":{\"type\":\"number\"}}",
              "{\"type\":\"array\",\"items\":{\"type\":\"integer\"}}")
              .is_does_not_hold());
    // uniqueItems on the left only strengthens
    CHECK(holds("{\"type\":\"array\",\"uniqueItems\":true}", "{\"type\":\"array\"}"));
    CHECK(sub("{\"type\":\"array\"}", "{\"type\":\"array\",\"uniqueItems\":true}")
              .is_does_not_hold());
}

TEST_CASE("fixed-length tuples against uniform element schemas") {
    const char* nmf = "{\"type\":\"array\",\"items\":{\"type\":\"array\","
                      "\"items\":{\"type\":\"number\",\"minimum\":0.0}}}";
    const char* housing =
        "{\"type\":\"array\",\"items\":{\"type\":\"array\",\"minItems\":4,\"maxItems\":4,"
        "\"items\":[{\"type\":\"number\",\"minimum\":0.0},"
        "{\"type\":\"number\",\"minimum\":0.0},{\"type\":\"number\",\"minimum\":0.0},"
        "{\"type\":\"number\"}]}}";
    const char* housing_fixed =
        "{\"type\":\"array\",\"items\":{\"type\":\"array\",\"minItems\":4,\"maxItems\":4,"
        "\"items\":[{\"type\":\"number\",\"minimum\":0.0},"
        "{\"type\":\"number\",\"minimum\":0.0},{\"type\":\"number\",\"minimum\":0.0},"
        "{\"type\":\"number\",\"minimum\":0.0}]}}";
    CHECK(sub(housing, nmf).is_does_not_hold());
    CHECK(holds(housing_fixed, nmf));
}

TEST_CASE("all_disjoint_items") {
    CHECK(all_disjoint_items(
        prep("{\"type\":\"array\",\"items\":[{\"enum\":[0]},{\"enum\":[1]}],"
             "\"maxItems\":2}")));
    CHECK_FALSE(all_disjoint_items(
        prep("{\"type\":\"array\",\"items\":[{\"type\":\"number\"},{\"type\":\"number\"}],"
             "\"maxItems\":2}")));
    CHECK(all_disjoint_items(
        prep("{\"type\":\"array\",\"items\":[{\"type\":\"string\",\"pattern\":\"^a$\"},"
             "{\"type\":\"string\",\"pattern\":\"^b$\"}],\"maxItems\":2}")));
    // an open tail shares additionalItems between positions
    CHECK_FALSE(all_disjoint_items(prep("{\"type\":\"array\"}")));
}

TEST_CASE("object rules") {
    CHECK(holds("{\"type\":\"object\",\"required\":[\"a\",\"b\"]}",
                "{\"type\":\"object\",\"required\":[\"a\"]}"));
    CHECK(sub("{\"type\":\"object\"}", "{\"type\":\"object\",\"required\":[\"a\"]}")
              .is_does_not_hold());
    CHECK(holds("{\"type\":\"object\",\"properties\":{\"a\":{\"type\":\"integer\"}}}",
                "{\"type\":\"object\",\"properties\":{\"a\":{\"type\":\"number\"}}}"));
    CHECK(sub("{\"type\":\"object\",\"properties\":{\"a\":{\"type\":\"number\"}}}",
              "{\"type\":\"object\",\"properties\":{\"a\":{\"type\":\"integer\"}}}")
              .is_does_not_hold());
    CHECK(holds("{\"type\":\"object\",\"additionalProperties\":false}",
                "{\"type\":\"object\",\"maxProperties\":1}"));
    CHECK(holds("{\"type\":\"object\",\"properties\":{\"a\":{}},"
                "\"additionalProperties\":false}",
                "{\"type\":\"object\",\"maxProperties\":1}"));
    CHECK(sub("{\"type\":\"object\",\"minProperties\":1}",
              "{\"type\":\"object\",\"minProperties\":2}")
              .is_does_not_hold());
    // patternProperties containment
    CHECK(holds("{\"type\":\"object\",\"patternProperties\":{\"^a\":{\"type\":\"integer\"}}}",
                "{\"type\":\"object\",\"patternProperties\":{\"^a\":{\"type\":\"number\"}}}"));
}

TEST_CASE("kubernetes node address") {
    schema permissive = parse_json_file(testutil::data_path("k8s_nodeaddress_permissive.json"));
    schema strict = parse_json_file(testutil::data_path("k8s_nodeaddress_strict.json"));
    CHECK(is_subschema(strict, permissive).is_holds());
    CHECK_FALSE(is_subschema(permissive, strict).is_holds());
}

TEST_CASE("anyOf branch containment") {
    CHECK(holds("{\"anyOf\":[{\"type\":\"null\"},{\"type\":\"string\",\"pattern\":\".+\"}]}",
                "{\"anyOf\":[{\"type\":\"null\"},{\"type\":\"string\",\"pattern\":\".+\"}]}"));
    CHECK(holds("{\"anyOf\":[{\"type\":\"null\"}]}",
                "{\"anyOf\":[{\"type\":\"null\"},{\"type\":\"boolean\"}]}"));
    // overlapping number unions refine against the right-hand pieces
    CHECK(holds("{\"anyOf\":[{\"type\":\"number\",\"minimum\":0,\"maximum\":10}]}",
                "{\"anyOf\":[{\"type\":\"number\",\"minimum\":0,\"maximum\":5},"
                "{\"type\":\"number\",\"minimum\":5,\"maximum\":10}]}"));
    CHECK(sub("{\"anyOf\":[{\"type\":\"number\",\"minimum\":0,\"maximum\":10}]}",
              "{\"anyOf\":[{\"type\":\"number\",\"minimum\":0,\"maximum\":4},"
              "{\"type\":\"number\",\"minimum\":5,\"maximum\":10}]}")
              .is_does_not_hold());
}

TEST_CASE("undecidable features carry their tags") {
    subtype_verdict rec = is_subschema(J("{\"$ref\":\"#\"}"), J("{\"type\":\"number\"}"));
    REQUIRE(rec.is_undecidable());
    CHECK(rec.reason() == undecidable_reason::recursive_ref);

    subtype_verdict pat = is_subschema(J("{\"type\":\"string\",\"pattern\":\"(?=a)b\"}"),
                                       J("{\"type\":\"string\"}"));
    REQUIRE(pat.is_undecidable());
    CHECK(pat.reason() == undecidable_reason::non_regular_pattern);

    // negated object schemas survive simplification and stay undecidable
    subtype_verdict neg = is_subschema(
        J("{\"allOf\":[{\"type\":\"object\",\"minProperties\":1},"
          "{\"not\":{\"type\":\"object\",\"required\":[\"a\"]}}]}"),
        J("{\"type\":\"object\"}"));
    REQUIRE(neg.is_undecidable());
    CHECK(neg.reason() == undecidable_reason::negated_object);
}

TEST_CASE("meta-invalid inputs raise errors instead of verdicts") {
    CHECK_THROWS_AS(is_subschema(J("{\"type\":\"strng\"}"), J("{}")), error);
    CHECK_THROWS_AS(is_subschema(J("{}"), J("{\"minLength\":-1}")), error);
}

TEST_CASE("inhabited") {
    CHECK_FALSE(inhabited(prep("{\"type\":\"string\",\"enum\":[1]}")));
    CHECK_FALSE(inhabited(schema_bottom()));
    CHECK(inhabited(schema_top()));
    CHECK_FALSE(inhabited(prep("{\"type\":\"object\",\"required\":[\"a\"],"
                               "\"maxProperties\":0}")));
    CHECK_FALSE(inhabited(prep("{\"type\":\"number\",\"minimum\":5,\"maximum\":0}")));
    CHECK_FALSE(inhabited(prep("{\"type\":\"number\",\"minimum\":0.1,\"maximum\":0.9,"
                               "\"multipleOf\":1}")));
    CHECK(inhabited(prep("{\"type\":\"number\",\"minimum\":0.1,\"maximum\":1,"
                         "\"multipleOf\":1}")));
    CHECK_FALSE(inhabited(prep("{\"type\":\"array\",\"minItems\":1,"
                               "\"items\":[{\"type\":\"string\",\"enum\":[1]}]}")));
    CHECK_FALSE(inhabited(prep("{\"type\":\"array\",\"minItems\":2,\"maxItems\":1}")));
    // required key whose schema is empty
    CHECK_FALSE(inhabited(prep("{\"type\":\"object\",\"required\":[\"a\"],"
                               "\"properties\":{\"a\":{\"type\":\"string\",\"enum\":[1]}}}")));
    // uniqueItems with too few distinct values
    CHECK_FALSE(inhabited(prep("{\"type\":\"array\",\"uniqueItems\":true,\"minItems\":3,"
                               "\"items\":{\"type\":\"boolean\"}}")));
    CHECK(inhabited(prep("{\"type\":\"array\",\"uniqueItems\":true,\"minItems\":2,"
                         "\"items\":{\"type\":\"boolean\"}}")));
}

TEST_CASE("reflexivity on generated schemas") {
    std::mt19937 rng(4242);
    testgen::gen_config cfg;
    cfg.allow_oneof = false; // negated structures are not decidable
    cfg.allow_negation = true;
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        schema s = testgen::random_schema(rng, cfg);
        subtype_verdict v = subtype_verdict::holds();
        try {
            v = is_equivalent(s, s);
        } catch (const error&) {
            continue;
        }
        CHECK_MESSAGE(v.is_holds(), "self-equivalence failed for ", serialize_json(s),
                      " witness: ", v.witness());
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("transitivity on sampled triples") {
    std::mt19937 rng(515);
    testgen::gen_config cfg;
    cfg.max_depth = 1;
    cfg.allow_oneof = false;
    std::vector<schema> pool;
    for (int i = 0; i < 18; ++i) pool.push_back(testgen::random_schema(rng, cfg));
    const std::size_t n = pool.size();
    // precompute the relation, then scan triples over the cached matrix
    std::vector<std::vector<int>> rel(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            try {
                rel[i][j] = is_subschema(pool[i], pool[j]).is_holds() ? 1 : 0;
            } catch (const error&) {
                rel[i][j] = 0;
            }
        }
    int found = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (rel[a][b] && rel[b][c]) {
                    CHECK(rel[a][c] == 1);
                    ++found;
                }
    CHECK(found > 30);
}

TEST_CASE("verdicts agree with exhaustive enumeration on small universes") {
    std::mt19937 rng(909);
    testgen::gen_config cfg;
    cfg.exhaustive = true;
    cfg.max_depth = 1; // container children stay primitive, like the universe
    auto universe = enumerate_universe(testgen::oracle_budget());
    int compared = 0, undecidable_count = 0;
    for (int i = 0; i < 120; ++i) {
        schema a = testgen::random_schema(rng, cfg);
        schema b = testgen::random_schema(rng, cfg);
        subtype_verdict v = subtype_verdict::holds();
        try {
            v = is_subschema(a, b);
        } catch (const error&) {
            continue;
        }
        if (v.is_undecidable()) {
            ++undecidable_count;
            continue;
        }
        bool oracle = true;
        for (const auto& d : universe) {
            bool in_a, in_b;
            try {
                in_a = validate(d, a);
                in_b = validate(d, b);
            } catch (const error&) {
                in_a = in_b = false;
            }
            if (in_a && !in_b) {
                oracle = false;
                break;
            }
        }
        CHECK_MESSAGE(v.is_holds() == oracle, "lhs=", serialize_json(a),
                      " rhs=", serialize_json(b), " verdict=",
                      (v.is_holds() ? "holds" : v.witness()));
        ++compared;
    }
    CHECK(compared > 80);
    CHECK(undecidable_count < 30);
}
