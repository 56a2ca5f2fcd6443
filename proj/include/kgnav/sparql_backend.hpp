#pragma once
// SPARQL text generation for adjacency retrieval in both schema dialects,
// HTTP execution against live endpoints, and parsing of standard SPARQL JSON
// results into neighbour rows.

#include "kgnav/backend.hpp"
#include "kgnav/core_types.hpp"
#include "kgnav/search_tool.hpp"

#include <chrono>
#include <mutex>

namespace kgnav {

class HttpError final : public Error {
public:
    HttpError(int status, const std::string& message) : Error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

class QueryRejected final : public Error {
public:
    using Error::Error;
};

class MalformedResults final : public Error {
public:
    using Error::Error;
};

enum class QueryMode { Rows, DistinctProperties };

// How the Freebase deployment resolves labels. Wikidata always goes through
// the property entity's rdfs:label.
enum class LabelMechanism { RdfsLabel, NameProperty };

struct EndpointConfig {
    std::string url;  // e.g. "https://query.wikidata.org/sparql"
    SchemaDialect dialect = SchemaDialect::Freebase;
    std::chrono::milliseconds timeout{30000};
    std::chrono::milliseconds min_request_interval{0};
    int max_retries = 3;
    LabelMechanism label_mechanism = LabelMechanism::RdfsLabel;
    std::optional<std::string> bearer_token;  // pass-through Authorization header
};

// Builds the adjacency query for one request. Rows mode projects
// (?property ?propertyLabel ?value ?valueLabel) over `entity ?property
// ?value` (outgoing) or `?value ?property entity` (incoming), labels via
// OPTIONAL patterns; a filter becomes a VALUES constraint on ?property.
// Distinct-properties mode projects DISTINCT (?property ?propertyLabel).
// Exactly one LIMIT clause, equal to `limit`.
std::string build_adjacency_query(SchemaDialect dialect, const EntityRef& entity,
                                  Direction direction, const PropertyFilter& filter,
                                  QueryMode mode, std::size_t limit,
                                  LabelMechanism labels = LabelMechanism::RdfsLabel);

// Parses a W3C SPARQL JSON results document. Full Freebase/Wikidata URIs are
// shortened to dialect form (m.…, wd:Q…, wdt:P…); other URIs keep their text.
// Non-URI value bindings become literals verbatim; absent label bindings
// yield absent labels. Throws MalformedResults on anything else.
std::vector<NeighborRow> parse_row_bindings(const std::string& results_doc);
std::vector<PropertyRef> parse_property_bindings(const std::string& results_doc);

// Shortens a full URI to dialect form when its namespace is known; otherwise
// returns the input unchanged.
std::string shorten_uri(const std::string& uri);

// Serializes request admission so that any two request start times across
// concurrent callers differ by at least the configured interval.
class RateLimiter {
public:
    explicit RateLimiter(std::chrono::milliseconds min_interval) : min_interval_(min_interval) {}

    // Blocks until a slot is available; returns the admitted slot time.
    std::chrono::steady_clock::time_point acquire();

private:
    std::chrono::milliseconds min_interval_;
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_slot_{};
};

// Live SPARQL endpoint speaking the Backend interface. Queries go out as
// HTTP POST with a urlencoded `query` parameter and
// `Accept: application/sparql-results+json`. Transient failures (transport
// errors, 429, 5xx) are retried with exponential backoff.
class SparqlClient final : public Backend {
public:
    explicit SparqlClient(EndpointConfig cfg);

    std::vector<NeighborRow> fetch_rows(const EntityRef& entity, Direction direction,
                                        const PropertyFilter& filter,
                                        std::size_t limit) override;

    std::vector<PropertyRef> fetch_distinct_properties(const EntityRef& entity,
                                                       Direction direction,
                                                       std::size_t limit) override;

    // Two-stage adaptive retrieval against the endpoint: an unfiltered
    // request probes k+1 rows and falls back to a DISTINCT-properties query
    // when more than k come back; a filtered request fetches p+1 rows and
    // reports overflow via the truncated flag.
    SearchResult fetch_neighbors(const EntityRef& entity, Direction direction,
                                 const PropertyFilter& filter, std::size_t k, std::size_t p);

    const EndpointConfig& config() const { return cfg_; }

    // Raw query execution (rate limited, retried). Returns the response body.
    std::string execute(const std::string& query);

private:
    EndpointConfig cfg_;
    RateLimiter limiter_;
};

}  // namespace kgnav
