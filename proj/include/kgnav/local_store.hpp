#pragma once
// In-memory, fully indexed triple store. Serves as the offline KG backend and
// as the ground truth the search tool is tested against.
//
// Triples file: UTF-8, one triple per line, three tab-separated fields
// (subject-id, property-id, object). An `L:` prefix on the object marks a
// literal; the prefix is stripped. Lines starting with `#` and blank lines
// are skipped. Labels file: tab-separated `id \t label`.

#include "kgnav/core_types.hpp"

#include <cstddef>
#include <istream>
#include <unordered_map>

namespace kgnav {

class MalformedRow final : public Error {
public:
    using Error::Error;
};

class Store {
public:
    Store() = default;

    // Loads triples (and optional labels) from streams. Row order becomes
    // insertion order. Throws MalformedRow with the offending line number.
    static Store load(std::istream& triples, std::istream* labels = nullptr);
    static Store load_files(const std::string& triples_path,
                            const std::optional<std::string>& labels_path = std::nullopt);

    std::size_t triple_count() const { return triples_.size(); }
    const std::vector<Triple>& triples() const { return triples_; }

    std::optional<std::string> label_of(const std::string& id) const;

    // All rows whose triple matches (entity as subject for outgoing, as
    // object for incoming), restricted to `filter` when present, with labels
    // attached, in insertion order of the underlying triples. An unknown
    // entity is indistinguishable from a degree-0 node: empty list.
    std::vector<NeighborRow> adjacent(const EntityRef& entity, Direction direction,
                                      const PropertyFilter& filter = std::nullopt) const;

    // True iff a path of at most max_hops edges, traversed in either
    // direction, connects start to goal. Zero hops means start == goal.
    bool reachable_within(const EntityRef& start, const EntityRef& goal,
                          std::size_t max_hops) const;

private:
    std::vector<Triple> triples_;
    // id -> positions in triples_, ascending. Literal objects are not indexed
    // by object: they have no id an incoming query could name.
    std::unordered_map<std::string, std::vector<std::size_t>> by_subject_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_object_;
    std::unordered_map<std::string, std::string> labels_;

    void add_triple(Triple t);
};

}  // namespace kgnav
