#pragma once
// System-prompt assembly: tool instructions plus dataset-specific worked
// navigation exemplars, and the per-dialect tool-definition document.

#include "kgnav/core_types.hpp"

#include <json.hpp>

#include <filesystem>

namespace kgnav {

// One worked navigation demonstration, embedded verbatim in the prompt.
struct Exemplar {
    std::string dataset;  // directory the exemplar came from
    std::string body;
};

struct PromptBundle {
    std::string system_text;
    nlohmann::json tool_definitions;
    std::size_t shot_count = 0;
};

// The single `search` function: entity (string), direction (enum
// incoming/outgoing), properties_to_filter_for (optional string array), with
// dialect-appropriate example identifiers and additionalProperties disallowed.
nlohmann::json tool_definitions(SchemaDialect dialect);

// Loads every *.txt under `dir` (recursively), ordered lexicographically by
// relative path; an n-shot prompt embeds the first n. The dataset name is the
// containing directory's name.
std::vector<Exemplar> load_exemplars(const std::filesystem::path& dir);

// An exemplar must demonstrate at least one "Tool Call:" and exactly one
// final-answer line with brace-enclosed entities. Throws Error otherwise.
void validate_exemplar(const Exemplar& exemplar);

// instruction block, then the first `shots` exemplar bodies, blank-line
// separated, embedded byte-for-byte. The n-shot text extends the (n-1)-shot
// text, so shot sweeps share a stable prefix.
PromptBundle build_system_prompt(const std::string& instructions,
                                 const std::vector<Exemplar>& exemplars, std::size_t shots,
                                 SchemaDialect dialect);

std::string load_text_file(const std::filesystem::path& path);

}  // namespace kgnav
