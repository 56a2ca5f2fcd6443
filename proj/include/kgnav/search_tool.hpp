#pragma once
// The Search tool: adaptive 1-hop neighbourhood retrieval over any backend,
// rendered as the compact markdown tables the model reads (or as a
// SPARQL-results-style JSON document, for format comparisons).

#include "kgnav/backend.hpp"
#include "kgnav/core_types.hpp"

#include <cstddef>
#include <variant>

namespace kgnav {

struct SearchConfig {
    // Above this many unfiltered rows, the tool answers with unique
    // properties instead of row instances.
    std::size_t high_degree_threshold = 50;  // k
    // Hard cap on returned rows (and on the property list).
    std::size_t max_rows = 1000;  // p
};

struct SearchRequest {
    EntityRef entity;
    Direction direction = Direction::Outgoing;
    PropertyFilter properties;  // present => non-empty
};

struct RowTable {
    std::vector<NeighborRow> rows;
    bool truncated = false;  // true iff the result was capped at max_rows

    std::size_t returned_count() const { return rows.size(); }
    bool operator==(const RowTable&) const = default;
};

struct PropertyTable {
    std::vector<PropertyRef> properties;  // distinct, first-occurrence order
    bool truncated = false;               // distinct properties alone exceeded max_rows

    bool operator==(const PropertyTable&) const = default;
};

using SearchResult = std::variant<RowTable, PropertyTable>;

// Adaptive neighbourhood retrieval. With R the matching rows:
//   |R| > k and no filter  -> PropertyTable of the distinct properties of R
//   |R| > p                -> RowTable of the first p rows, truncated
//   otherwise              -> RowTable of all rows
// Both comparisons are strict. Transfers stay bounded: the unfiltered probe
// fetches at most max(k, p)+1 rows, the filtered fetch at most p+1.
SearchResult search(Backend& backend, const SearchRequest& request, const SearchConfig& cfg);

// Row tables render as a `"{n} rows:"` count line (with a `(truncated)`
// marker when capped), a four-column header, the `--|--|--|--` separator, and
// one line per row; absent labels are empty cells, literal values go in the
// value column. Property tables render a two-column header and no count line.
// `|` in cell text becomes `/`, newlines become spaces.
std::string render_markdown(const SearchResult& result);

// SPARQL-results-style document equivalent to the markdown rendering:
// head.vars carries the column names, results.bindings one object per row.
std::string render_json(const SearchResult& result);

}  // namespace kgnav
