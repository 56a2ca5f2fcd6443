#pragma once
// Shared inline fixtures and repo-path helpers for the test suites.

#include "kgnav/local_store.hpp"

#include <filesystem>
#include <sstream>
#include <string>

namespace kgnav::testing {

inline std::filesystem::path source_dir() {
    return std::filesystem::path(KGNAV_SOURCE_DIR);
}

inline std::filesystem::path data_dir() {
    return source_dir() / "data";
}

inline Store store_from_text(const std::string& triples, const std::string& labels = "") {
    std::istringstream triples_in(triples);
    if (labels.empty()) {
        return Store::load(triples_in);
    }
    std::istringstream labels_in(labels);
    return Store::load(triples_in, &labels_in);
}

// The painter fixture used across suites: five outgoing rows on m.07_m2.
inline Store van_gogh_store() {
    return store_from_text(
        "m.07_m2\tpeople.person.profession\tm.0n1h\n"
        "m.07_m2\tvisual_art.visual_artist.art_forms\tm.05qdh\n"
        "m.07_m2\tpeople.person.place_of_birth\tm.0vlxv\n"
        "m.07_m2\tpeople.person.date_of_birth\tL:1853-03-30\n"
        "m.07_m2\tpeople.person.nationality\tm.059j2\n",
        "m.07_m2\tVincent van Gogh\n"
        "m.0n1h\tArtist\n"
        "m.05qdh\tPainting\n"
        "m.0vlxv\tZundert\n"
        "m.059j2\tNetherlands\n"
        "people.person.profession\tProfession\n"
        "visual_art.visual_artist.art_forms\tArt forms\n"
        "people.person.place_of_birth\tPlace of birth\n"
        "people.person.date_of_birth\tDate of birth\n"
        "people.person.nationality\tNationality\n");
}

}  // namespace kgnav::testing
