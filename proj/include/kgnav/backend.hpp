#pragma once
// Backend abstraction for adjacency retrieval. The search tool composes the
// two primitives below; any backend honouring their contracts is
// indistinguishable to the agent.

#include "kgnav/core_types.hpp"
#include "kgnav/local_store.hpp"

#include <cstddef>

namespace kgnav {

class Backend {
public:
    virtual ~Backend() = default;

    // Rows matching (entity, direction, filter) in backend order, at most
    // `limit` of them.
    virtual std::vector<NeighborRow> fetch_rows(const EntityRef& entity, Direction direction,
                                                const PropertyFilter& filter,
                                                std::size_t limit) = 0;

    // Distinct properties over the unfiltered rows, first-occurrence order,
    // at most `limit` of them.
    virtual std::vector<PropertyRef> fetch_distinct_properties(const EntityRef& entity,
                                                               Direction direction,
                                                               std::size_t limit) = 0;
};

// Adapter serving a Store through the Backend interface. The store must
// outlive the backend.
class LocalBackend final : public Backend {
public:
    explicit LocalBackend(const Store& store) : store_(store) {}

    std::vector<NeighborRow> fetch_rows(const EntityRef& entity, Direction direction,
                                        const PropertyFilter& filter,
                                        std::size_t limit) override;

    std::vector<PropertyRef> fetch_distinct_properties(const EntityRef& entity,
                                                       Direction direction,
                                                       std::size_t limit) override;

    const Store& store() const { return store_; }

private:
    const Store& store_;
};

// First-occurrence-order deduplication by property id, capped at `limit`.
std::vector<PropertyRef> distinct_properties(const std::vector<NeighborRow>& rows,
                                             std::size_t limit);

}  // namespace kgnav
