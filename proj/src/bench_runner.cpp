#include "kgnav/bench_runner.hpp"

#include "kgnav/sparql_backend.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

namespace kgnav {

namespace {

std::string sanitize_filename(const std::string& id) {
    std::string out;
    out.reserve(id.size());
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "question" : out;
}

// Forwards to a shared live client so each question still gets its own
// ChatClient handle.
class SharedClient final : public ChatClient {
public:
    explicit SharedClient(std::shared_ptr<ChatClient> inner) : inner_(std::move(inner)) {}
    ChatMessage complete(const std::vector<ChatMessage>& messages,
                         const nlohmann::json& tools) override {
        return inner_->complete(messages, tools);
    }

private:
    std::shared_ptr<ChatClient> inner_;
};

}  // namespace

void validate_spec(const BenchSpec& spec) {
    if (spec.search.high_degree_threshold < 1 || spec.search.max_rows < 1) {
        throw ConfigError("--k and --p must be at least 1");
    }
    if (spec.max_turns < 1) {
        throw ConfigError("--max-turns must be at least 1");
    }
    if (spec.out_dir.empty() && !spec.dataset_path.empty()) {
        throw ConfigError("--out is required for benchmark runs");
    }
}

std::vector<Question> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open dataset file '" + path.string() + "'");
    }

    std::vector<Question> questions;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        // ordered_json keeps topic-entity order as written in the dataset.
        auto doc = nlohmann::ordered_json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ConfigError("dataset line " + std::to_string(line_no) + ": not a JSON object");
        }
        try {
            Question q;
            q.id = doc.at("id").get<std::string>();
            q.text = doc.at("question").get<std::string>();
            for (const auto& [label, id] : doc.at("topic_entities").items()) {
                q.topic_entities.emplace_back(label, id.get<std::string>());
            }
            if (doc.contains("answers")) {
                for (const auto& a : doc["answers"]) {
                    q.gold_answers.push_back(a.get<std::string>());
                }
            }
            if (q.topic_entities.empty()) {
                throw ConfigError("dataset line " + std::to_string(line_no) + " (id '" + q.id +
                                  "'): topic_entities must be non-empty");
            }
            questions.push_back(std::move(q));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("dataset line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return questions;
}

std::unique_ptr<Backend> make_backend(const BenchSpec& spec, std::unique_ptr<Store>& store_out) {
    const std::string& s = spec.backend_spec;
    if (s.rfind("local:", 0) == 0) {
        std::string paths = s.substr(6);
        auto comma = paths.find(',');
        std::optional<std::string> labels;
        std::string triples = paths.substr(0, comma);
        if (comma != std::string::npos && comma + 1 < paths.size()) {
            labels = paths.substr(comma + 1);
        }
        if (triples.empty()) {
            throw ConfigError("backend spec '" + s + "' names no triples file");
        }
        try {
            store_out = std::make_unique<Store>(Store::load_files(triples, labels));
        } catch (const Error& e) {
            throw ConfigError(std::string("cannot load local backend: ") + e.what());
        }
        return std::make_unique<LocalBackend>(*store_out);
    }
    if (s.rfind("sparql:", 0) == 0) {
        if (!spec.allow_network) {
            throw ConfigError("a sparql: backend needs --allow-network");
        }
        EndpointConfig cfg;
        cfg.url = s.substr(7);
        cfg.dialect = spec.dialect;
        if (cfg.url.empty()) {
            throw ConfigError("backend spec '" + s + "' names no endpoint URL");
        }
        return std::make_unique<SparqlClient>(cfg);
    }
    throw ConfigError("backend spec must start with 'local:' or 'sparql:', got '" + s + "'");
}

GatewayFactory make_gateway_factory(const BenchSpec& spec) {
    const std::string& s = spec.gateway_spec;
    if (s.rfind("script:", 0) == 0) {
        std::filesystem::path root = s.substr(7);
        if (root.empty() || !std::filesystem::exists(root)) {
            throw ConfigError("script gateway path '" + root.string() + "' does not exist");
        }
        const bool is_dir = std::filesystem::is_directory(root);
        return [root, is_dir](const Question& q) -> std::unique_ptr<ChatClient> {
            std::filesystem::path file =
                is_dir ? root / (sanitize_filename(q.id) + ".json") : root;
            return std::make_unique<ScriptedChatClient>(
                ScriptedChatClient::from_file(file.string()));
        };
    }

    if (!spec.allow_network) {
        throw ConfigError("a live gateway URL needs --allow-network (or use script:<path>)");
    }
    GatewayConfig cfg;
    cfg.base_url = s;
    cfg.model = spec.model;
    cfg.api_key_env = spec.api_key_env;
    if (spec.open_model_params) {
        cfg.params = ModelParams::open_model_defaults();
    }
    auto shared = std::make_shared<HttpChatClient>(cfg);
    return [shared](const Question&) -> std::unique_ptr<ChatClient> {
        return std::make_unique<SharedClient>(shared);
    };
}

PromptBundle make_prompt_bundle(const BenchSpec& spec) {
    std::string instructions;
    if (!spec.instructions_path.empty()) {
        instructions = load_text_file(spec.instructions_path);
    }
    std::vector<Exemplar> exemplars;
    if (!spec.exemplars_dir.empty()) {
        exemplars = load_exemplars(spec.exemplars_dir);
    }
    std::size_t shots = std::min(spec.shots, exemplars.size());
    if (spec.shots > exemplars.size() && !spec.exemplars_dir.empty()) {
        throw ConfigError("requested " + std::to_string(spec.shots) + "-shot prompt but only " +
                          std::to_string(exemplars.size()) + " exemplars found under '" +
                          spec.exemplars_dir + "'");
    }
    return build_system_prompt(instructions, exemplars, shots, spec.dialect);
}

std::vector<Transcript> run_benchmark(const std::vector<Question>& questions,
                                      const GatewayFactory& gateways, Backend& backend,
                                      const PromptBundle& prompts, const RunConfig& cfg,
                                      std::size_t concurrency) {
    std::vector<Transcript> transcripts(questions.size());
    if (questions.empty()) return transcripts;

    concurrency = std::max<std::size_t>(1, std::min(concurrency, questions.size()));
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= questions.size()) return;
            const Question& q = questions[i];
            try {
                auto gateway = gateways(q);
                transcripts[i] = run_question(q, *gateway, backend, prompts, cfg);
            } catch (const std::exception& e) {
                // Gateway construction failed; the benchmark keeps going.
                Transcript t;
                t.question_id = q.id;
                t.outcome = Outcome::RunError;
                t.error = e.what();
                transcripts[i] = std::move(t);
            }
        }
    };

    if (concurrency == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(concurrency);
        for (std::size_t i = 0; i < concurrency; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return transcripts;
}

void write_run_outputs(const std::filesystem::path& out_dir,
                       const std::vector<Transcript>& transcripts, const EvalReport& report) {
    std::filesystem::create_directories(out_dir / "transcripts");
    for (const auto& transcript : transcripts) {
        write_transcript(transcript,
                         out_dir / "transcripts" / (sanitize_filename(transcript.question_id) + ".json"));
    }

    {
        std::ofstream out(out_dir / "report.json", std::ios::binary);
        out << report_to_json(report).dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "report.csv", std::ios::binary);
        out << report_to_csv(report);
    }
    {
        // Timestamps live here so report bytes stay reproducible.
        std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        nlohmann::json meta{{"finished_at", stamp}, {"questions", transcripts.size()}};
        std::ofstream out(out_dir / "run_meta.json", std::ios::binary);
        out << meta.dump(2) << '\n';
    }
}

}  // namespace kgnav
