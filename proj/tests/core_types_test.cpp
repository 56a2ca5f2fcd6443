#include "kgnav/core_types.hpp"

#include <doctest.h>

#include <random>

using namespace kgnav;

TEST_CASE("entity ids parse under their own dialect") {
    CHECK(parse_entity_ref("m.07_m2", SchemaDialect::Freebase).id == "m.07_m2");
    CHECK(parse_entity_ref("g.11b7d5ml9q", SchemaDialect::Freebase).id == "g.11b7d5ml9q");
    CHECK(parse_entity_ref("wd:Q5089", SchemaDialect::Wikidata).id == "wd:Q5089");
}

TEST_CASE("entity ids are rejected under the other dialect") {
    CHECK_THROWS_AS(parse_entity_ref("m.07_m2", SchemaDialect::Wikidata), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("wd:Q5089", SchemaDialect::Freebase), MalformedIdentifier);
}

TEST_CASE("malformed entity ids are rejected") {
    CHECK_THROWS_AS(parse_entity_ref("", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("", SchemaDialect::Wikidata), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("m.", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("x.07_m2", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("m.07 m2", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("wd:Q", SchemaDialect::Wikidata), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("wd:Q50x89", SchemaDialect::Wikidata), MalformedIdentifier);
    CHECK_THROWS_AS(parse_entity_ref("wdt:P885", SchemaDialect::Wikidata), MalformedIdentifier);
}

TEST_CASE("property ids follow the dialect grammar") {
    CHECK(parse_property_ref("people.person.place_of_birth", SchemaDialect::Freebase).id ==
          "people.person.place_of_birth");
    CHECK(parse_property_ref("common.topic", SchemaDialect::Freebase).id == "common.topic");
    CHECK(parse_property_ref("wdt:P885", SchemaDialect::Wikidata).id == "wdt:P885");

    CHECK_THROWS_AS(parse_property_ref("people", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_property_ref("Capital", SchemaDialect::Freebase), MalformedIdentifier);
    CHECK_THROWS_AS(parse_property_ref("people..person", SchemaDialect::Freebase),
                    MalformedIdentifier);
    CHECK_THROWS_AS(parse_property_ref("People.Person.Children", SchemaDialect::Freebase),
                    MalformedIdentifier);
    CHECK_THROWS_AS(parse_property_ref("wd:Q5089", SchemaDialect::Wikidata), MalformedIdentifier);
    CHECK_THROWS_AS(parse_property_ref("", SchemaDialect::Wikidata), MalformedIdentifier);
}

TEST_CASE("parsing is idempotent over generated valid ids") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> tail(0, 999999);
    for (int i = 0; i < 200; ++i) {
        std::string freebase_id = "m.0" + std::to_string(tail(rng));
        auto once = parse_entity_ref(freebase_id, SchemaDialect::Freebase);
        auto twice = parse_entity_ref(once.id, SchemaDialect::Freebase);
        CHECK(once == twice);

        std::string wikidata_id = "wd:Q" + std::to_string(tail(rng));
        CHECK(parse_entity_ref(wikidata_id, SchemaDialect::Wikidata) ==
              parse_entity_ref(parse_entity_ref(wikidata_id, SchemaDialect::Wikidata).id,
                               SchemaDialect::Wikidata));
    }
}

TEST_CASE("node values keep literal text byte-for-byte") {
    auto date = NodeValue::literal("1853-03-30");
    CHECK(date.text() == "1853-03-30");
    CHECK_FALSE(date.label().has_value());

    auto offset_date = NodeValue::literal("2007-06-05-08:00");
    CHECK(offset_date.text() == "2007-06-05-08:00");

    auto entity = NodeValue::entity(EntityRef{"m.0vlxv", "Zundert"});
    CHECK(entity.text() == "m.0vlxv");
    CHECK(entity.label() == "Zundert");
}

TEST_CASE("direction and dialect names round-trip") {
    CHECK(direction_from_string("outgoing") == Direction::Outgoing);
    CHECK(direction_from_string("incoming") == Direction::Incoming);
    CHECK_FALSE(direction_from_string("sideways").has_value());
    CHECK(dialect_from_string(to_string(SchemaDialect::Wikidata)) == SchemaDialect::Wikidata);
    CHECK(dialect_from_string(to_string(SchemaDialect::Freebase)) == SchemaDialect::Freebase);
}
