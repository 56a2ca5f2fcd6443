#pragma once
// Shared vocabulary: entities, properties, triples, directions, and the
// identifier grammars of the two supported KG schema families.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kgnav {

// Base error for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedIdentifier final : public Error {
public:
    using Error::Error;
};

// Schema conventions of a KG family: identifier grammar and prefixes.
enum class SchemaDialect { Freebase, Wikidata };

// Which side of the triple the queried entity sits on.
// Outgoing: entity is the subject. Incoming: entity is the object.
enum class Direction { Outgoing, Incoming };

const char* to_string(SchemaDialect dialect);
const char* to_string(Direction direction);
std::optional<SchemaDialect> dialect_from_string(std::string_view text);
std::optional<Direction> direction_from_string(std::string_view text);

struct EntityRef {
    std::string id;
    std::optional<std::string> label;

    bool operator==(const EntityRef&) const = default;
};

struct PropertyRef {
    std::string id;
    std::optional<std::string> label;

    bool operator==(const PropertyRef&) const = default;
};

// A literal object value. Text is kept byte-for-byte as it appeared in the
// source (dates like "1853-03-30" or "2007-06-05-08:00" are never reshaped).
struct Literal {
    std::string text;
    std::optional<std::string> datatype;

    bool operator==(const Literal&) const = default;
};

// Object position of a triple: either another entity or a literal.
class NodeValue {
public:
    static NodeValue entity(EntityRef e) { return NodeValue(std::move(e)); }
    static NodeValue literal(std::string text, std::optional<std::string> datatype = std::nullopt) {
        return NodeValue(Literal{std::move(text), std::move(datatype)});
    }

    bool is_entity() const { return std::holds_alternative<EntityRef>(value_); }
    bool is_literal() const { return !is_entity(); }

    const EntityRef& entity_ref() const { return std::get<EntityRef>(value_); }
    const Literal& literal_value() const { return std::get<Literal>(value_); }

    // The text that goes in a result table's value column: entity id or literal text.
    const std::string& text() const {
        return is_entity() ? entity_ref().id : literal_value().text;
    }

    // Label for the value column's label cell; literals never have one.
    const std::optional<std::string>& label() const {
        static const std::optional<std::string> none;
        return is_entity() ? entity_ref().label : none;
    }

    bool operator==(const NodeValue&) const = default;

private:
    explicit NodeValue(EntityRef e) : value_(std::move(e)) {}
    explicit NodeValue(Literal l) : value_(std::move(l)) {}

    std::variant<EntityRef, Literal> value_;
};

// One (subject, predicate, object) fact.
struct Triple {
    EntityRef subject;
    PropertyRef predicate;
    NodeValue object;

    bool operator==(const Triple&) const = default;
};

// One line of a Search result table: a property and the neighbour it leads to.
struct NeighborRow {
    PropertyRef property;
    NodeValue value;

    bool operator==(const NeighborRow&) const = default;
};

// Optional property restriction on an adjacency lookup. Empty optional means
// "no filter"; a present filter is never empty.
using PropertyFilter = std::optional<std::vector<PropertyRef>>;

// Identifier grammars.
//
// Freebase: entity ids are `m.` or `g.` plus alphanumerics/underscores
// (m.07_m2); property ids are dot-separated lowercase paths with at least two
// segments (people.person.place_of_birth).
//
// Wikidata: entity ids are `wd:Q<digits>`, property ids `wdt:P<digits>`.
bool valid_entity_id(std::string_view text, SchemaDialect dialect);
bool valid_property_id(std::string_view text, SchemaDialect dialect);

// Validate and wrap an identifier. Throws MalformedIdentifier for ids that do
// not fit the dialect's grammar (a bad dataset entry or a hallucinated id).
EntityRef parse_entity_ref(std::string_view text, SchemaDialect dialect);
PropertyRef parse_property_ref(std::string_view text, SchemaDialect dialect);

}  // namespace kgnav
