#include "kgnav/sparql_backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <thread>

namespace kgnav {

namespace {

constexpr const char* kFreebaseNs = "http://rdf.freebase.com/ns/";
constexpr const char* kWikidataEntityNs = "http://www.wikidata.org/entity/";
constexpr const char* kWikidataDirectNs = "http://www.wikidata.org/prop/direct/";

// Renders an id in query position: ns:m.07_m2 for Freebase, wd:Q5089 /
// wdt:P885 already carry their prefix.
std::string term(SchemaDialect dialect, const std::string& id) {
    return dialect == SchemaDialect::Freebase ? "ns:" + id : id;
}

std::string prologue(SchemaDialect dialect) {
    if (dialect == SchemaDialect::Freebase) {
        return "PREFIX ns: <http://rdf.freebase.com/ns/>\n"
               "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n";
    }
    return "PREFIX wd: <http://www.wikidata.org/entity/>\n"
           "PREFIX wdt: <http://www.wikidata.org/prop/direct/>\n"
           "PREFIX wikibase: <http://wikiba.se/ontology#>\n"
           "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n";
}

std::string property_label_pattern(SchemaDialect dialect, LabelMechanism labels) {
    if (dialect == SchemaDialect::Wikidata) {
        // The direct-claim predicate carries no label; the property entity does.
        return "  OPTIONAL { ?prop wikibase:directClaim ?property . ?prop rdfs:label "
               "?propertyLabel . FILTER(LANG(?propertyLabel) = \"en\") }\n";
    }
    const char* predicate =
        labels == LabelMechanism::RdfsLabel ? "rdfs:label" : "ns:type.object.name";
    return std::string("  OPTIONAL { ?property ") + predicate +
           " ?propertyLabel . FILTER(LANG(?propertyLabel) = \"en\") }\n";
}

std::string value_label_pattern(SchemaDialect dialect, LabelMechanism labels) {
    const char* predicate = dialect == SchemaDialect::Freebase &&
                                    labels == LabelMechanism::NameProperty
                                ? "ns:type.object.name"
                                : "rdfs:label";
    return std::string("  OPTIONAL { ?value ") + predicate +
           " ?valueLabel . FILTER(LANG(?valueLabel) = \"en\") }\n";
}

const nlohmann::json* find_binding(const nlohmann::json& binding, const char* name) {
    auto it = binding.find(name);
    if (it == binding.end() || it->is_null()) return nullptr;
    if (!it->is_object() || !it->contains("value")) {
        throw MalformedResults(std::string("binding '") + name + "' is not a well-formed term");
    }
    return &*it;
}

std::optional<std::string> binding_label(const nlohmann::json& binding, const char* name) {
    const auto* term = find_binding(binding, name);
    if (term == nullptr) return std::nullopt;
    return (*term)["value"].get<std::string>();
}

// Splits "scheme://host[:port]/some/path" into the client base and the
// request path ("/" when the URL has none).
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

nlohmann::json parse_results_doc(const std::string& results_doc) {
    nlohmann::json doc = nlohmann::json::parse(results_doc, nullptr, false);
    if (doc.is_discarded()) {
        throw MalformedResults("results document is not valid JSON");
    }
    if (!doc.contains("results") || !doc["results"].contains("bindings") ||
        !doc["results"]["bindings"].is_array()) {
        throw MalformedResults("results document lacks results.bindings");
    }
    return doc;
}

}  // namespace

std::string shorten_uri(const std::string& uri) {
    if (uri.rfind(kFreebaseNs, 0) == 0) return uri.substr(std::string_view(kFreebaseNs).size());
    if (uri.rfind(kWikidataEntityNs, 0) == 0) {
        return "wd:" + uri.substr(std::string_view(kWikidataEntityNs).size());
    }
    if (uri.rfind(kWikidataDirectNs, 0) == 0) {
        return "wdt:" + uri.substr(std::string_view(kWikidataDirectNs).size());
    }
    return uri;
}

std::string build_adjacency_query(SchemaDialect dialect, const EntityRef& entity,
                                  Direction direction, const PropertyFilter& filter,
                                  QueryMode mode, std::size_t limit, LabelMechanism labels) {
    if (!valid_entity_id(entity.id, dialect)) {
        throw MalformedIdentifier("entity '" + entity.id + "' is not valid under the " +
                                  to_string(dialect) + " dialect");
    }
    if (mode == QueryMode::DistinctProperties && filter) {
        throw Error("distinct-properties query does not accept a property filter");
    }
    if (filter) {
        for (const auto& p : *filter) {
            if (!valid_property_id(p.id, dialect)) {
                throw MalformedIdentifier("property '" + p.id + "' is not valid under the " +
                                          to_string(dialect) + " dialect");
            }
        }
    }
    if (limit < 1) {
        throw Error("query limit must be at least 1");
    }

    std::string query = prologue(dialect);
    query += mode == QueryMode::Rows
                 ? "SELECT ?property ?propertyLabel ?value ?valueLabel WHERE {\n"
                 : "SELECT DISTINCT ?property ?propertyLabel WHERE {\n";

    if (filter) {
        query += "  VALUES ?property {";
        for (const auto& p : *filter) {
            query += ' ';
            query += term(dialect, p.id);
        }
        query += " }\n";
    }

    const std::string subject = term(dialect, entity.id);
    query += direction == Direction::Outgoing ? "  " + subject + " ?property ?value .\n"
                                              : "  ?value ?property " + subject + " .\n";

    // Restrict Wikidata traversal to direct claims; with a filter the VALUES
    // list (all wdt: terms) already guarantees it.
    if (dialect == SchemaDialect::Wikidata && !filter) {
        query += "  FILTER(STRSTARTS(STR(?property), \"";
        query += kWikidataDirectNs;
        query += "\"))\n";
    }

    query += property_label_pattern(dialect, labels);
    if (mode == QueryMode::Rows) {
        query += value_label_pattern(dialect, labels);
    }
    query += "}\nLIMIT " + std::to_string(limit) + "\n";
    return query;
}

std::vector<NeighborRow> parse_row_bindings(const std::string& results_doc) {
    nlohmann::json doc = parse_results_doc(results_doc);

    std::vector<NeighborRow> rows;
    for (const auto& binding : doc["results"]["bindings"]) {
        const auto* property = find_binding(binding, "property");
        const auto* value = find_binding(binding, "value");
        if (property == nullptr || value == nullptr) {
            throw MalformedResults("row binding lacks required variable 'property' or 'value'");
        }

        NeighborRow row{PropertyRef{shorten_uri((*property)["value"].get<std::string>()),
                                    binding_label(binding, "propertyLabel")},
                        NodeValue::literal("")};

        const std::string value_text = (*value)["value"].get<std::string>();
        if ((*value).value("type", "") == "uri") {
            row.value = NodeValue::entity(
                EntityRef{shorten_uri(value_text), binding_label(binding, "valueLabel")});
        } else {
            std::optional<std::string> datatype;
            if (value->contains("datatype")) datatype = (*value)["datatype"].get<std::string>();
            row.value = NodeValue::literal(value_text, std::move(datatype));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<PropertyRef> parse_property_bindings(const std::string& results_doc) {
    nlohmann::json doc = parse_results_doc(results_doc);

    std::vector<PropertyRef> properties;
    for (const auto& binding : doc["results"]["bindings"]) {
        const auto* property = find_binding(binding, "property");
        if (property == nullptr) {
            throw MalformedResults("property binding lacks required variable 'property'");
        }
        properties.push_back(PropertyRef{shorten_uri((*property)["value"].get<std::string>()),
                                         binding_label(binding, "propertyLabel")});
    }
    return properties;
}

std::chrono::steady_clock::time_point RateLimiter::acquire() {
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        auto now = std::chrono::steady_clock::now();
        slot = next_slot_ > now ? next_slot_ : now;
        next_slot_ = slot + min_interval_;
    }
    std::this_thread::sleep_until(slot);
    return slot;
}

SparqlClient::SparqlClient(EndpointConfig cfg)
    : cfg_(std::move(cfg)), limiter_(cfg_.min_request_interval) {
    if (cfg_.timeout.count() <= 0) {
        throw Error("endpoint timeout must be positive");
    }
    if (cfg_.min_request_interval.count() < 0) {
        throw Error("endpoint rate-limit interval must be non-negative");
    }
}

std::string SparqlClient::execute(const std::string& query) {
    httplib::Params params{{"query", query}};
    httplib::Headers headers{{"Accept", "application/sparql-results+json"}};
    if (cfg_.bearer_token) {
        headers.emplace("Authorization", "Bearer " + *cfg_.bearer_token);
    }

    auto [base, path] = split_url(cfg_.url);

    std::string last_error = "no request attempted";
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(100) * (1 << (attempt - 1)));
        }
        limiter_.acquire();

        // A fresh client per request keeps this safe under concurrent callers.
        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
        client.set_follow_location(true);

        auto res = client.Post(path, headers, params);
        if (!res) {
            last_error = "endpoint unreachable: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            return res->body;
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "transient HTTP " + std::to_string(res->status);
            continue;
        }
        throw QueryRejected("endpoint rejected query with HTTP " + std::to_string(res->status) +
                            ": " + res->body);
    }
    throw HttpError(0, "SPARQL request failed after " + std::to_string(cfg_.max_retries + 1) +
                           " attempts (" + last_error + ")");
}

std::vector<NeighborRow> SparqlClient::fetch_rows(const EntityRef& entity, Direction direction,
                                                  const PropertyFilter& filter,
                                                  std::size_t limit) {
    auto query = build_adjacency_query(cfg_.dialect, entity, direction, filter, QueryMode::Rows,
                                       limit, cfg_.label_mechanism);
    auto rows = parse_row_bindings(execute(query));
    if (rows.size() > limit) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(limit), rows.end());
    return rows;
}

std::vector<PropertyRef> SparqlClient::fetch_distinct_properties(const EntityRef& entity,
                                                                 Direction direction,
                                                                 std::size_t limit) {
    auto query = build_adjacency_query(cfg_.dialect, entity, direction, std::nullopt,
                                       QueryMode::DistinctProperties, limit,
                                       cfg_.label_mechanism);
    auto properties = parse_property_bindings(execute(query));
    if (properties.size() > limit) properties.resize(limit);
    return properties;
}

SearchResult SparqlClient::fetch_neighbors(const EntityRef& entity, Direction direction,
                                           const PropertyFilter& filter, std::size_t k,
                                           std::size_t p) {
    return search(*this, SearchRequest{entity, direction, filter},
                  SearchConfig{k, p});
}

}  // namespace kgnav
