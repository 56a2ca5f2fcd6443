#include "kgnav/core_types.hpp"

#include <cctype>

namespace kgnav {

namespace {

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_lower_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool valid_freebase_entity(std::string_view s) {
    if (s.size() < 3) return false;
    if (s[0] != 'm' && s[0] != 'g') return false;
    if (s[1] != '.') return false;
    for (char c : s.substr(2)) {
        if (!is_ident_char(c)) return false;
    }
    return true;
}

// Dot-separated lowercase path, at least two non-empty segments.
bool valid_freebase_property(std::string_view s) {
    std::size_t segments = 0;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = s.find('.', start);
        std::string_view seg = s.substr(start, dot == std::string_view::npos ? dot : dot - start);
        if (seg.empty()) return false;
        for (char c : seg) {
            if (!is_lower_ident_char(c)) return false;
        }
        ++segments;
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return segments >= 2;
}

}  // namespace

const char* to_string(SchemaDialect dialect) {
    return dialect == SchemaDialect::Freebase ? "freebase" : "wikidata";
}

const char* to_string(Direction direction) {
    return direction == Direction::Outgoing ? "outgoing" : "incoming";
}

std::optional<SchemaDialect> dialect_from_string(std::string_view text) {
    if (text == "freebase") return SchemaDialect::Freebase;
    if (text == "wikidata") return SchemaDialect::Wikidata;
    return std::nullopt;
}

std::optional<Direction> direction_from_string(std::string_view text) {
    if (text == "outgoing") return Direction::Outgoing;
    if (text == "incoming") return Direction::Incoming;
    return std::nullopt;
}

bool valid_entity_id(std::string_view text, SchemaDialect dialect) {
    switch (dialect) {
        case SchemaDialect::Freebase:
            return valid_freebase_entity(text);
        case SchemaDialect::Wikidata:
            return text.size() > 4 && text.substr(0, 4) == "wd:Q" && all_digits(text.substr(4));
    }
    return false;
}

bool valid_property_id(std::string_view text, SchemaDialect dialect) {
    switch (dialect) {
        case SchemaDialect::Freebase:
            return valid_freebase_property(text);
        case SchemaDialect::Wikidata:
            return text.size() > 5 && text.substr(0, 5) == "wdt:P" && all_digits(text.substr(5));
    }
    return false;
}

EntityRef parse_entity_ref(std::string_view text, SchemaDialect dialect) {
    if (text.empty()) {
        throw MalformedIdentifier("empty entity id");
    }
    if (!valid_entity_id(text, dialect)) {
        throw MalformedIdentifier("invalid " + std::string(to_string(dialect)) +
                                  " entity id '" + std::string(text) + "'");
    }
    return EntityRef{std::string(text), std::nullopt};
}

PropertyRef parse_property_ref(std::string_view text, SchemaDialect dialect) {
    if (text.empty()) {
        throw MalformedIdentifier("empty property id");
    }
    if (!valid_property_id(text, dialect)) {
        throw MalformedIdentifier("invalid " + std::string(to_string(dialect)) +
                                  " property id '" + std::string(text) + "'");
    }
    return PropertyRef{std::string(text), std::nullopt};
}

}  // namespace kgnav
