#include "kgnav/agent_loop.hpp"

#include "kgnav/eval_harness.hpp"

#include <fstream>
#include <unordered_set>

namespace kgnav {

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Answered: return "answered";
        case Outcome::BudgetExhausted: return "budget-exhausted";
        case Outcome::RunError: return "error";
    }
    return "error";
}

std::string format_user_message(const Question& question) {
    std::string text = "Question: " + question.text + " {";
    bool first = true;
    for (const auto& [label, id] : question.topic_entities) {
        if (!first) text += ", ";
        text += "'" + label + "': '" + id + "'";
        first = false;
    }
    text += "}";
    return text;
}

namespace {

std::string one_line(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

struct Dispatch {
    ChatMessage message;
    // Set only for successful searches; rows are empty for property tables.
    std::optional<std::string> queried_entity;
    std::vector<NeighborRow> rows;
};

Dispatch dispatch_search(const ToolCall& call, Backend& backend, const RunConfig& cfg) {
    auto error_reply = [&](const std::string& text) {
        return Dispatch{ChatMessage::tool(call.id, text), std::nullopt, {}};
    };

    if (call.name != "search") {
        return error_reply("error: unknown tool '" + one_line(call.name) +
                           "'; the only available tool is 'search'");
    }

    nlohmann::json args = nlohmann::json::parse(call.arguments, nullptr, false);
    if (args.is_discarded()) {
        return error_reply("error: malformed arguments: not valid JSON");
    }
    if (!args.is_object()) {
        return error_reply("error: malformed arguments: expected a JSON object");
    }

    // A "question" member is tolerated and ignored, as are other extras.
    if (!args.contains("entity") || !args["entity"].is_string()) {
        return error_reply("error: missing string parameter 'entity'");
    }
    if (!args.contains("direction") || !args["direction"].is_string()) {
        return error_reply("error: direction must be 'incoming' or 'outgoing'");
    }
    auto direction = direction_from_string(args["direction"].get<std::string>());
    if (!direction) {
        return error_reply("error: direction must be 'incoming' or 'outgoing'");
    }

    SearchRequest request;
    request.direction = *direction;
    try {
        request.entity = parse_entity_ref(args["entity"].get<std::string>(), cfg.dialect);
    } catch (const MalformedIdentifier& e) {
        return error_reply("error: " + one_line(e.what()));
    }

    if (args.contains("properties_to_filter_for") && !args["properties_to_filter_for"].is_null()) {
        const auto& raw = args["properties_to_filter_for"];
        if (!raw.is_array()) {
            return error_reply(
                "error: properties_to_filter_for must be an array of property id strings");
        }
        std::vector<PropertyRef> properties;
        for (const auto& entry : raw) {
            if (!entry.is_string()) {
                return error_reply(
                    "error: properties_to_filter_for must be an array of property id strings");
            }
            try {
                properties.push_back(parse_property_ref(entry.get<std::string>(), cfg.dialect));
            } catch (const MalformedIdentifier& e) {
                return error_reply("error: " + one_line(e.what()));
            }
        }
        // An empty list filters nothing.
        if (!properties.empty()) {
            request.properties = std::move(properties);
        }
    }

    SearchResult result;
    try {
        result = search(backend, request, cfg.search);
    } catch (const std::exception& e) {
        return error_reply("error: search backend failure (retriable): " + one_line(e.what()));
    }

    Dispatch dispatch{ChatMessage::tool(call.id, render_markdown(result)),
                      request.entity.id,
                      {}};
    if (auto* table = std::get_if<RowTable>(&result)) {
        dispatch.rows = std::move(table->rows);
    }
    return dispatch;
}

// Best-effort path recording. A hop is accepted when the model navigates to
// an entity it saw in an earlier result, or when a final answer names a value
// from one. Most recent results are matched first.
class PathRecorder {
public:
    explicit PathRecorder(const Question& question) {
        for (const auto& [label, id] : question.topic_entities) {
            visited_.insert(id);
        }
    }

    void record_result(const std::string& queried_entity, std::vector<NeighborRow> rows) {
        results_.push_back({queried_entity, std::move(rows)});
    }

    void on_query(const std::string& entity_id, std::vector<PathHop>& path) {
        if (!visited_.insert(entity_id).second) return;
        for (auto it = results_.rbegin(); it != results_.rend(); ++it) {
            for (const auto& row : it->rows) {
                if (row.value.is_entity() && row.value.entity_ref().id == entity_id) {
                    append(path, {it->entity, row.property.id, entity_id, row.value.label()});
                    return;
                }
            }
        }
    }

    void on_answers(const std::vector<std::string>& answers, std::vector<PathHop>& path) {
        for (const auto& answer : answers) {
            bool matched = false;
            for (auto it = results_.rbegin(); it != results_.rend() && !matched; ++it) {
                for (const auto& row : it->rows) {
                    if ((row.value.label() && *row.value.label() == answer) ||
                        row.value.text() == answer) {
                        append(path, {it->entity, row.property.id, row.value.text(),
                                      row.value.label()});
                        matched = true;
                        break;
                    }
                }
            }
        }
    }

private:
    struct LoggedResult {
        std::string entity;
        std::vector<NeighborRow> rows;
    };

    static void append(std::vector<PathHop>& path, PathHop hop) {
        for (const auto& existing : path) {
            if (existing == hop) return;
        }
        path.push_back(std::move(hop));
    }

    std::unordered_set<std::string> visited_;
    std::vector<LoggedResult> results_;
};

}  // namespace

ChatMessage handle_tool_call(const ToolCall& call, Backend& backend, const RunConfig& cfg) {
    return dispatch_search(call, backend, cfg).message;
}

Transcript run_question(const Question& question, ChatClient& gateway, Backend& backend,
                        const PromptBundle& prompts, const RunConfig& cfg) {
    Transcript transcript;
    transcript.question_id = question.id;

    auto add_message = [&](ChatMessage message) {
        if (message.content) transcript.counters.main_chars += message.content->size();
        if (message.reasoning) transcript.counters.reasoning_chars += message.reasoning->size();
        for (const auto& call : message.tool_calls) {
            transcript.counters.main_chars += call.name.size() + call.arguments.size();
        }
        transcript.messages.push_back(std::move(message));
    };

    add_message(ChatMessage::system(prompts.system_text));
    add_message(ChatMessage::user(format_user_message(question)));

    PathRecorder recorder(question);

    try {
        for (;;) {
            ChatMessage turn = gateway.complete(transcript.messages, prompts.tool_definitions);
            turn.role = Role::Assistant;
            transcript.counters.turns += 1;
            const std::string content = turn.content.value_or("");
            const auto calls = turn.tool_calls;
            add_message(std::move(turn));

            if (calls.empty()) {
                transcript.outcome = Outcome::Answered;
                transcript.final_answers = extract_final_answers(content);
                break;
            }
            if (transcript.counters.turns >= cfg.max_turns) {
                // Budget spent; the pending calls are recorded but not dispatched.
                transcript.outcome = Outcome::BudgetExhausted;
                transcript.final_answers = extract_final_answers(content);
                break;
            }

            for (const auto& call : calls) {
                transcript.counters.tool_calls += 1;
                Dispatch dispatch = dispatch_search(call, backend, cfg);
                if (dispatch.queried_entity) {
                    recorder.on_query(*dispatch.queried_entity, transcript.path);
                    recorder.record_result(*dispatch.queried_entity, std::move(dispatch.rows));
                }
                add_message(std::move(dispatch.message));
            }
        }
        recorder.on_answers(transcript.final_answers, transcript.path);
    } catch (const std::exception& e) {
        transcript.outcome = Outcome::RunError;
        transcript.error = e.what();
    }

    return transcript;
}

nlohmann::json transcript_to_json(const Transcript& transcript) {
    nlohmann::json doc;
    doc["question_id"] = transcript.question_id;
    doc["outcome"] = to_string(transcript.outcome);
    if (transcript.error) {
        doc["error"] = *transcript.error;
    }
    doc["final_answers"] = transcript.final_answers;

    auto& path = doc["path"] = nlohmann::json::array();
    for (const auto& hop : transcript.path) {
        nlohmann::json entry{{"entity", hop.entity_id},
                             {"property", hop.property_id},
                             {"value", hop.value_id}};
        if (hop.value_label) entry["value_label"] = *hop.value_label;
        path.push_back(std::move(entry));
    }

    doc["counters"] = {{"turns", transcript.counters.turns},
                       {"tool_calls", transcript.counters.tool_calls},
                       {"main_chars", transcript.counters.main_chars},
                       {"reasoning_chars", transcript.counters.reasoning_chars}};

    auto& messages = doc["messages"] = nlohmann::json::array();
    for (const auto& message : transcript.messages) {
        messages.push_back(message_to_json(message));
    }
    return doc;
}

void write_transcript(const Transcript& transcript, const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write transcript to '" + path.string() + "'");
    }
    out << transcript_to_json(transcript).dump(2) << '\n';
}

}  // namespace kgnav
