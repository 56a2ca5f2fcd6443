#include "kgnav/local_store.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <unordered_set>

namespace kgnav {

namespace {

// Splits a line on tabs. No escaping: the file format has none.
std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool skippable(const std::string& line) {
    return line.empty() || line[0] == '#';
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

void Store::add_triple(Triple t) {
    std::size_t pos = triples_.size();
    by_subject_[t.subject.id].push_back(pos);
    if (t.object.is_entity()) {
        by_object_[t.object.entity_ref().id].push_back(pos);
    }
    triples_.push_back(std::move(t));
}

Store Store::load(std::istream& triples, std::istream* labels) {
    Store store;

    if (labels != nullptr) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(*labels, line)) {
            ++line_no;
            line = chomp(std::move(line));
            if (skippable(line)) continue;
            auto fields = split_tabs(line);
            if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
                throw MalformedRow("labels line " + std::to_string(line_no) +
                                   ": expected 'id<TAB>label', got '" + line + "'");
            }
            store.labels_[fields[0]] = fields[1];
        }
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(triples, line)) {
        ++line_no;
        line = chomp(std::move(line));
        if (skippable(line)) continue;
        auto fields = split_tabs(line);
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw MalformedRow("triples line " + std::to_string(line_no) +
                               ": expected 3 tab-separated fields, got '" + line + "'");
        }

        Triple t{EntityRef{fields[0], store.label_of(fields[0])},
                 PropertyRef{fields[1], store.label_of(fields[1])},
                 NodeValue::literal("")};
        if (fields[2].rfind("L:", 0) == 0) {
            std::string text = fields[2].substr(2);
            if (text.empty()) {
                throw MalformedRow("triples line " + std::to_string(line_no) +
                                   ": empty literal object");
            }
            t.object = NodeValue::literal(std::move(text));
        } else {
            t.object = NodeValue::entity(EntityRef{fields[2], store.label_of(fields[2])});
        }
        store.add_triple(std::move(t));
    }
    return store;
}

Store Store::load_files(const std::string& triples_path,
                        const std::optional<std::string>& labels_path) {
    std::ifstream triples(triples_path);
    if (!triples) {
        throw Error("cannot open triples file '" + triples_path + "'");
    }
    if (labels_path) {
        std::ifstream labels(*labels_path);
        if (!labels) {
            throw Error("cannot open labels file '" + *labels_path + "'");
        }
        return load(triples, &labels);
    }
    return load(triples, nullptr);
}

std::optional<std::string> Store::label_of(const std::string& id) const {
    auto it = labels_.find(id);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
}

std::vector<NeighborRow> Store::adjacent(const EntityRef& entity, Direction direction,
                                         const PropertyFilter& filter) const {
    const auto& index = direction == Direction::Outgoing ? by_subject_ : by_object_;
    auto it = index.find(entity.id);
    if (it == index.end()) return {};

    std::unordered_set<std::string_view> wanted;
    if (filter) {
        for (const auto& p : *filter) wanted.insert(p.id);
    }

    std::vector<NeighborRow> rows;
    for (std::size_t pos : it->second) {
        const Triple& t = triples_[pos];
        if (filter && wanted.find(t.predicate.id) == wanted.end()) continue;
        NodeValue value = direction == Direction::Outgoing ? t.object
                                                           : NodeValue::entity(t.subject);
        rows.push_back(NeighborRow{t.predicate, std::move(value)});
    }
    return rows;
}

bool Store::reachable_within(const EntityRef& start, const EntityRef& goal,
                             std::size_t max_hops) const {
    if (start.id == goal.id) return true;

    std::unordered_set<std::string> seen{start.id};
    std::deque<std::string> frontier{start.id};

    for (std::size_t hop = 0; hop < max_hops && !frontier.empty(); ++hop) {
        std::deque<std::string> next;
        for (const auto& id : frontier) {
            auto visit = [&](const std::string& neighbor) {
                if (neighbor == goal.id) return true;
                if (seen.insert(neighbor).second) next.push_back(neighbor);
                return false;
            };
            if (auto it = by_subject_.find(id); it != by_subject_.end()) {
                for (std::size_t pos : it->second) {
                    const Triple& t = triples_[pos];
                    if (t.object.is_entity() && visit(t.object.entity_ref().id)) return true;
                }
            }
            if (auto it = by_object_.find(id); it != by_object_.end()) {
                for (std::size_t pos : it->second) {
                    if (visit(triples_[pos].subject.id)) return true;
                }
            }
        }
        frontier = std::move(next);
    }
    return false;
}

}  // namespace kgnav
