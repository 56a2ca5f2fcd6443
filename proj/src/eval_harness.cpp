#include "kgnav/eval_harness.hpp"

#include <cctype>

namespace kgnav {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

char fold(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

// Position just past the last case-insensitive occurrence of `needle`.
std::optional<std::size_t> find_last_marker(const std::string& text, std::string_view needle) {
    std::optional<std::size_t> found;
    if (needle.empty() || text.size() < needle.size()) return found;
    for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (fold(text[i + j]) != fold(needle[j])) {
                match = false;
                break;
            }
        }
        if (match) found = i + needle.size();
    }
    return found;
}

}  // namespace

std::vector<std::string> extract_final_answers(const std::string& text) {
    auto marker = find_last_marker(text, "final answer:");
    if (!marker) return {};

    std::vector<std::string> answers;
    std::size_t pos = *marker;
    while (true) {
        auto open = text.find('{', pos);
        if (open == std::string::npos) break;
        auto close = text.find('}', open + 1);
        if (close == std::string::npos) break;
        answers.push_back(trim(std::string_view(text).substr(open + 1, close - open - 1)));
        pos = close + 1;
    }
    return answers;
}

std::string normalize_answer(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(fold(c));
    }
    return out;
}

int score_hits_at_1(const std::vector<std::string>& predicted,
                    const std::vector<std::string>& gold) {
    for (const auto& p : predicted) {
        const std::string np = normalize_answer(p);
        for (const auto& g : gold) {
            if (np == normalize_answer(g)) return 1;
        }
    }
    return 0;
}

EvalReport summarize(const std::vector<Transcript>& transcripts,
                     const std::vector<Question>& questions) {
    if (transcripts.size() != questions.size()) {
        throw IdMismatch("got " + std::to_string(transcripts.size()) + " transcripts for " +
                         std::to_string(questions.size()) + " questions");
    }

    EvalReport report;
    double hits = 0, turns = 0, tool_calls = 0, main_chars = 0, total_chars = 0;
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const Transcript& t = transcripts[i];
        const Question& q = questions[i];
        if (t.question_id != q.id) {
            throw IdMismatch("transcript '" + t.question_id + "' does not match question '" +
                             q.id + "' at position " + std::to_string(i));
        }

        QuestionScore score;
        score.question_id = q.id;
        score.predicted = t.final_answers;
        score.gold = q.gold_answers;
        score.outcome = t.outcome;
        score.counters = t.counters;
        score.hit = t.outcome == Outcome::RunError
                        ? 0
                        : score_hits_at_1(t.final_answers, q.gold_answers);

        hits += score.hit;
        turns += static_cast<double>(t.counters.turns);
        tool_calls += static_cast<double>(t.counters.tool_calls);
        main_chars += static_cast<double>(t.counters.main_chars);
        total_chars += static_cast<double>(t.counters.main_chars + t.counters.reasoning_chars);
        report.per_question.push_back(std::move(score));
    }

    const double n = static_cast<double>(questions.size());
    if (n > 0) {
        report.hits_at_1 = hits / n;
        report.avg_turns = turns / n;
        report.avg_tool_calls = tool_calls / n;
        report.avg_main_chars = main_chars / n;
        report.avg_total_chars = total_chars / n;
    }
    return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json doc;
    doc["aggregate"] = {{"hits_at_1", report.hits_at_1},
                        {"questions", report.per_question.size()},
                        {"avg_turns", report.avg_turns},
                        {"avg_tool_calls", report.avg_tool_calls},
                        {"avg_main_chars", report.avg_main_chars},
                        {"avg_total_chars", report.avg_total_chars}};
    auto& rows = doc["per_question"] = nlohmann::json::array();
    for (const auto& score : report.per_question) {
        rows.push_back({{"question_id", score.question_id},
                        {"predicted", score.predicted},
                        {"gold", score.gold},
                        {"hit", score.hit},
                        {"outcome", to_string(score.outcome)},
                        {"turns", score.counters.turns},
                        {"tool_calls", score.counters.tool_calls},
                        {"main_chars", score.counters.main_chars},
                        {"reasoning_chars", score.counters.reasoning_chars}});
    }
    return doc;
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += "; ";
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string report_to_csv(const EvalReport& report) {
    std::string csv =
        "question_id,hit,outcome,turns,tool_calls,main_chars,reasoning_chars,predicted,gold\n";
    for (const auto& score : report.per_question) {
        csv += csv_escape(score.question_id);
        csv += ',' + std::to_string(score.hit);
        csv += ',';
        csv += to_string(score.outcome);
        csv += ',' + std::to_string(score.counters.turns);
        csv += ',' + std::to_string(score.counters.tool_calls);
        csv += ',' + std::to_string(score.counters.main_chars);
        csv += ',' + std::to_string(score.counters.reasoning_chars);
        csv += ',' + csv_escape(join(score.predicted));
        csv += ',' + csv_escape(join(score.gold));
        csv += '\n';
    }
    return csv;
}

}  // namespace kgnav
