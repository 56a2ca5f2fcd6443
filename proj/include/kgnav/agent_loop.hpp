#pragma once
// Drives one question to completion: maintains the conversation, dispatches
// search tool calls against a backend, enforces the turn budget, and records
// the transcript and the traversed path.

#include "kgnav/backend.hpp"
#include "kgnav/llm_gateway.hpp"
#include "kgnav/prompting.hpp"
#include "kgnav/search_tool.hpp"

#include <filesystem>

namespace kgnav {

// One benchmark item. Topic entities keep dataset order; their ids are the
// gold annotations (no entity linking happens here).
struct Question {
    std::string id;
    std::string text;
    std::vector<std::pair<std::string, std::string>> topic_entities;  // label -> id
    std::vector<std::string> gold_answers;
};

struct RunConfig {
    std::size_t max_turns = 16;
    SearchConfig search;
    SchemaDialect dialect = SchemaDialect::Freebase;
};

enum class Outcome { Answered, BudgetExhausted, RunError };

const char* to_string(Outcome outcome);

// One accepted hop of the traversed reasoning path.
struct PathHop {
    std::string entity_id;
    std::string property_id;
    std::string value_id;
    std::optional<std::string> value_label;

    bool operator==(const PathHop&) const = default;
};

struct Counters {
    std::size_t turns = 0;          // assistant messages
    std::size_t tool_calls = 0;     // dispatched tool calls
    std::size_t main_chars = 0;     // characters on the visible channel
    std::size_t reasoning_chars = 0;

    bool operator==(const Counters&) const = default;
};

struct Transcript {
    std::string question_id;
    std::vector<ChatMessage> messages;
    std::vector<PathHop> path;
    std::vector<std::string> final_answers;
    Counters counters;
    Outcome outcome = Outcome::RunError;
    std::optional<std::string> error;
};

// The user turn that seeds the conversation, shaped like the exemplars'
// question lines: `Question: <text> {'label': 'id', ...}`.
std::string format_user_message(const Question& question);

// Parses and validates one tool call, dispatches it, and wraps the rendered
// result in a tool message. Never throws: every failure (malformed argument
// JSON, unknown tool, bad identifiers, backend faults) becomes a one-line
// `error: ...` tool body the model can react to.
ChatMessage handle_tool_call(const ToolCall& call, Backend& backend, const RunConfig& cfg);

// Runs the full loop. Gateway failures and exhausted scripts end the run with
// Outcome::RunError; they never propagate to the caller.
Transcript run_question(const Question& question, ChatClient& gateway, Backend& backend,
                        const PromptBundle& prompts, const RunConfig& cfg);

nlohmann::json transcript_to_json(const Transcript& transcript);
void write_transcript(const Transcript& transcript, const std::filesystem::path& path);

}  // namespace kgnav
