#include "kgnav/search_tool.hpp"

#include <json.hpp>

#include <unordered_set>

namespace kgnav {

std::vector<NeighborRow> LocalBackend::fetch_rows(const EntityRef& entity, Direction direction,
                                                  const PropertyFilter& filter,
                                                  std::size_t limit) {
    auto rows = store_.adjacent(entity, direction, filter);
    if (rows.size() > limit) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(limit), rows.end());
    return rows;
}

std::vector<PropertyRef> LocalBackend::fetch_distinct_properties(const EntityRef& entity,
                                                                 Direction direction,
                                                                 std::size_t limit) {
    return distinct_properties(store_.adjacent(entity, direction), limit);
}

std::vector<PropertyRef> distinct_properties(const std::vector<NeighborRow>& rows,
                                             std::size_t limit) {
    std::vector<PropertyRef> properties;
    std::unordered_set<std::string_view> seen;
    for (const auto& row : rows) {
        if (properties.size() >= limit) break;
        if (seen.insert(row.property.id).second) {
            properties.push_back(row.property);
        }
    }
    return properties;
}

SearchResult search(Backend& backend, const SearchRequest& request, const SearchConfig& cfg) {
    const std::size_t k = cfg.high_degree_threshold;
    const std::size_t p = cfg.max_rows;
    if (k < 1 || p < 1) {
        throw Error("search thresholds must be at least 1");
    }
    if (request.properties && request.properties->empty()) {
        throw Error("a present property filter must be non-empty");
    }

    std::vector<NeighborRow> rows;
    if (!request.properties) {
        // Probe one row past k: enough to decide the high-degree branch, and
        // when the branch is not taken the probe already holds every row.
        rows = backend.fetch_rows(request.entity, request.direction, std::nullopt, k + 1);
        if (rows.size() > k) {
            auto properties =
                backend.fetch_distinct_properties(request.entity, request.direction, p + 1);
            PropertyTable table;
            table.truncated = properties.size() > p;
            if (table.truncated) properties.resize(p);
            table.properties = std::move(properties);
            return table;
        }
    } else {
        rows = backend.fetch_rows(request.entity, request.direction, request.properties, p + 1);
    }

    RowTable table;
    table.truncated = rows.size() > p;
    if (table.truncated) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(p), rows.end());
    table.rows = std::move(rows);
    return table;
}

namespace {

std::string sanitize_cell(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '|') {
            out.push_back('/');
        } else if (c == '\n' || c == '\r') {
            out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string cell(const std::optional<std::string>& label) {
    return label ? sanitize_cell(*label) : std::string();
}

}  // namespace

std::string render_markdown(const SearchResult& result) {
    std::string out;
    if (const auto* table = std::get_if<RowTable>(&result)) {
        out += std::to_string(table->returned_count());
        out += table->truncated ? " rows (truncated):" : " rows:";
        out += "\nproperty|propertyLabel|value|valueLabel\n--|--|--|--";
        for (const auto& row : table->rows) {
            out += '\n';
            out += sanitize_cell(row.property.id);
            out += '|';
            out += cell(row.property.label);
            out += '|';
            out += sanitize_cell(row.value.text());
            out += '|';
            out += cell(row.value.label());
        }
    } else {
        const auto& props = std::get<PropertyTable>(result);
        out += "property|propertyLabel\n--|--";
        for (const auto& property : props.properties) {
            out += '\n';
            out += sanitize_cell(property.id);
            out += '|';
            out += cell(property.label);
        }
    }
    return out;
}

std::string render_json(const SearchResult& result) {
    nlohmann::json doc;
    nlohmann::json bindings = nlohmann::json::array();

    if (const auto* table = std::get_if<RowTable>(&result)) {
        doc["head"]["vars"] = {"property", "propertyLabel", "value", "valueLabel"};
        for (const auto& row : table->rows) {
            nlohmann::json b;
            b["property"] = {{"type", "uri"}, {"value", row.property.id}};
            if (row.property.label) {
                b["propertyLabel"] = {{"type", "literal"}, {"value", *row.property.label}};
            }
            if (row.value.is_entity()) {
                b["value"] = {{"type", "uri"}, {"value", row.value.entity_ref().id}};
            } else {
                const auto& lit = row.value.literal_value();
                b["value"] = {{"type", "literal"}, {"value", lit.text}};
                if (lit.datatype) b["value"]["datatype"] = *lit.datatype;
            }
            if (row.value.label()) {
                b["valueLabel"] = {{"type", "literal"}, {"value", *row.value.label()}};
            }
            bindings.push_back(std::move(b));
        }
    } else {
        const auto& props = std::get<PropertyTable>(result);
        doc["head"]["vars"] = {"property", "propertyLabel"};
        for (const auto& property : props.properties) {
            nlohmann::json b;
            b["property"] = {{"type", "uri"}, {"value", property.id}};
            if (property.label) {
                b["propertyLabel"] = {{"type", "literal"}, {"value", *property.label}};
            }
            bindings.push_back(std::move(b));
        }
    }

    doc["results"]["bindings"] = std::move(bindings);
    return doc.dump();
}

}  // namespace kgnav
