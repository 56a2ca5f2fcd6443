#pragma once
// Final-answer extraction from assistant text and exact-match Hits@1 scoring,
// with aggregate accuracy and efficiency statistics.

#include "kgnav/agent_loop.hpp"

#include <json.hpp>

namespace kgnav {

class IdMismatch final : public Error {
public:
    using Error::Error;
};

// Contents of every `{...}` group at or after the last (case-insensitive)
// "final answer:" marker, in order, whitespace-trimmed, duplicates kept.
// Empty when the marker or braces are absent. Total: never fails.
std::vector<std::string> extract_final_answers(const std::string& text);

// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
// Nothing else: no punctuation stripping, no alias tables.
std::string normalize_answer(std::string_view text);

// 1 iff some predicted string equals some gold string under normalization.
int score_hits_at_1(const std::vector<std::string>& predicted,
                    const std::vector<std::string>& gold);

struct QuestionScore {
    std::string question_id;
    std::vector<std::string> predicted;
    std::vector<std::string> gold;
    int hit = 0;
    Outcome outcome = Outcome::RunError;
    Counters counters;
};

struct EvalReport {
    std::vector<QuestionScore> per_question;
    double hits_at_1 = 0.0;
    double avg_turns = 0.0;
    double avg_tool_calls = 0.0;
    double avg_main_chars = 0.0;
    double avg_total_chars = 0.0;  // main + reasoning
};

// Transcripts and questions must align one-to-one by question id. Runs that
// ended in an error score 0 and stay in the denominator.
EvalReport summarize(const std::vector<Transcript>& transcripts,
                     const std::vector<Question>& questions);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);

}  // namespace kgnav
