#include "kgnav/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace kgnav {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

nlohmann::json tool_definitions(SchemaDialect dialect) {
    const bool freebase = dialect == SchemaDialect::Freebase;
    const std::string kg_name = freebase ? "Freebase" : "Wikidata";
    const std::string entity_example = freebase ? "m.04yd0fh" : "wd:Q187805";

    nlohmann::json parameters = {
        {"type", "object"},
        {"properties",
         {{"entity",
           {{"type", "string"},
            {"description", "The entity (e.g., '" + entity_example +
                                "') whose adjacent relations and entities we want to fetch."}}},
          {"direction",
           {{"type", "string"},
            {"enum", {"incoming", "outgoing"}},
            {"description", "Direction of relationship to consider"}}},
          {"properties_to_filter_for",
           {{"type", "array"},
            {"items", {{"type", "string"}}},
            {"description",
             "Optional list of specific properties to filter by (e.g., "
             "['people.person.place_of_birth', 'people.person.nationality'])."}}}}},
        {"required", {"entity", "direction"}},
        {"additionalProperties", false}};

    return nlohmann::json::array(
        {{{"type", "function"},
          {"function",
           {{"name", "search"},
            {"description",
             "Build and execute a SPARQL query on " + kg_name +
                 " that retrieves adjacent properties, property labels, values, and value "
                 "labels in the specified direction for a given entity."},
            {"parameters", parameters}}}}});
}

std::string load_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open text file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<Exemplar> load_exemplars(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error("exemplar directory '" + dir.string() + "' does not exist");
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(), [&](const auto& a, const auto& b) {
        return a.lexically_relative(dir) < b.lexically_relative(dir);
    });

    std::vector<Exemplar> exemplars;
    for (const auto& file : files) {
        Exemplar exemplar{file.parent_path().filename().string(), load_text_file(file)};
        validate_exemplar(exemplar);
        exemplars.push_back(std::move(exemplar));
    }
    return exemplars;
}

void validate_exemplar(const Exemplar& exemplar) {
    if (exemplar.body.find("Tool Call:") == std::string::npos) {
        throw Error("exemplar from '" + exemplar.dataset +
                    "' demonstrates no \"Tool Call:\" line");
    }

    std::size_t final_answer_lines = 0;
    std::istringstream lines(exemplar.body);
    std::string line;
    while (std::getline(lines, line)) {
        const std::string lowered = lowercase(line);
        auto marker = lowered.find("final answer:");
        if (marker == std::string::npos) continue;
        auto open = line.find('{', marker);
        if (open != std::string::npos && line.find('}', open) != std::string::npos) {
            ++final_answer_lines;
        }
    }
    if (final_answer_lines != 1) {
        throw Error("exemplar from '" + exemplar.dataset + "' has " +
                    std::to_string(final_answer_lines) +
                    " final-answer lines with brace-enclosed entities; expected exactly 1");
    }
}

PromptBundle build_system_prompt(const std::string& instructions,
                                 const std::vector<Exemplar>& exemplars, std::size_t shots,
                                 SchemaDialect dialect) {
    if (shots > exemplars.size()) {
        throw Error("requested " + std::to_string(shots) + " shots but only " +
                    std::to_string(exemplars.size()) + " exemplars are available");
    }

    PromptBundle bundle;
    bundle.system_text = instructions;
    for (std::size_t i = 0; i < shots; ++i) {
        bundle.system_text += "\n\n";
        bundle.system_text += exemplars[i].body;
    }
    bundle.tool_definitions = tool_definitions(dialect);
    bundle.shot_count = shots;
    return bundle;
}

}  // namespace kgnav
