// kgnav: run KGQA benchmarks, ask single questions, and validate fixtures.

#include "kgnav/bench_runner.hpp"
#include "kgnav/sparql_backend.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace kgnav;

void add_common_options(CLI::App* cmd, BenchSpec& spec, std::string& dialect_name) {
    cmd->add_option("--backend", spec.backend_spec,
                    "Backend: local:<triples.tsv>[,<labels.tsv>] or sparql:<url>")
        ->required();
    cmd->add_option("--dialect", dialect_name, "Schema dialect: freebase or wikidata")
        ->check(CLI::IsMember({"freebase", "wikidata"}));
    cmd->add_option("--gateway", spec.gateway_spec,
                    "Model gateway: script:<file-or-dir> or a chat-completions base URL")
        ->required();
    cmd->add_option("--instructions", spec.instructions_path,
                    "Tool-instruction text file embedded at the top of the system prompt");
    cmd->add_option("--exemplars", spec.exemplars_dir, "Directory of exemplar .txt files");
    cmd->add_option("--shots", spec.shots, "Number of exemplars to embed (default 0)");
    cmd->add_option("--k", spec.search.high_degree_threshold,
                    "High-degree threshold: more rows than this switch to unique properties");
    cmd->add_option("--p", spec.search.max_rows, "Maximum rows (and properties) per result");
    cmd->add_option("--max-turns", spec.max_turns, "Assistant-turn budget per question");
    cmd->add_option("--model", spec.model, "Model name for live gateways");
    cmd->add_option("--api-key-env", spec.api_key_env,
                    "Environment variable holding the gateway API key");
    cmd->add_flag("--open-model-params", spec.open_model_params,
                  "Send the documented open-model sampling defaults");
    cmd->add_flag("--allow-network", spec.allow_network,
                  "Permit live sparql:/URL gateways and endpoints");
}

RunConfig run_config_from(const BenchSpec& spec) {
    RunConfig cfg;
    cfg.max_turns = spec.max_turns;
    cfg.search = spec.search;
    cfg.dialect = spec.dialect;
    return cfg;
}

int cmd_run(BenchSpec spec) {
    validate_spec(spec);
    auto questions = load_dataset(spec.dataset_path);
    if (questions.empty()) {
        throw ConfigError("dataset '" + spec.dataset_path + "' holds no questions");
    }
    for (const auto& q : questions) {
        if (q.gold_answers.empty()) {
            throw ConfigError("question '" + q.id + "' has no gold answers; scored runs need them");
        }
    }

    auto prompts = make_prompt_bundle(spec);
    auto gateways = make_gateway_factory(spec);
    std::unique_ptr<Store> store;
    auto backend = make_backend(spec, store);

    auto transcripts = run_benchmark(questions, gateways, *backend, prompts,
                                     run_config_from(spec), spec.concurrency);
    auto report = summarize(transcripts, questions);
    write_run_outputs(spec.out_dir, transcripts, report);

    int hits = 0;
    for (const auto& row : report.per_question) {
        hits += row.hit;
        std::cout << row.question_id << ": " << (row.hit ? "hit" : "miss") << " ("
                  << to_string(row.outcome) << ", " << row.counters.turns << " turns)\n";
    }
    std::cout << "questions: " << report.per_question.size() << "\n"
              << "Hits@1: " << report.hits_at_1 << " (" << hits << "/"
              << report.per_question.size() << ")\n"
              << "avg turns: " << report.avg_turns << ", avg tool calls: " << report.avg_tool_calls
              << "\nreport: " << (std::filesystem::path(spec.out_dir) / "report.json").string()
              << "\n";
    return 0;
}

void print_transcript(const Transcript& transcript) {
    for (const auto& message : transcript.messages) {
        std::cout << "--- " << to_string(message.role) << " ---\n";
        if (message.content) std::cout << *message.content << "\n";
        for (const auto& call : message.tool_calls) {
            std::cout << "[tool call " << call.id << "] " << call.name << " " << call.arguments
                      << "\n";
        }
    }
    std::cout << "--- outcome: " << to_string(transcript.outcome);
    if (transcript.error) std::cout << " (" << *transcript.error << ")";
    std::cout << " ---\n";
    if (!transcript.path.empty()) {
        std::cout << "path:";
        for (const auto& hop : transcript.path) {
            std::cout << " (" << hop.entity_id << ", " << hop.property_id << ", "
                      << (hop.value_label ? *hop.value_label : hop.value_id) << ")";
        }
        std::cout << "\n";
    }
    std::cout << "final answers:";
    for (const auto& answer : transcript.final_answers) std::cout << " {" << answer << "}";
    std::cout << "\n";
}

int cmd_ask(BenchSpec spec, const std::string& question_text,
            const std::vector<std::string>& topic_args) {
    spec.dataset_path.clear();
    validate_spec(spec);
    Question question;
    question.id = "adhoc";
    question.text = question_text;
    for (const auto& arg : topic_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size()) {
            throw ConfigError("topic '" + arg + "' must look like 'Label=entity.id'");
        }
        question.topic_entities.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
    }
    if (question.topic_entities.empty()) {
        throw ConfigError("at least one --topic Label=id is required");
    }
    for (const auto& [label, id] : question.topic_entities) {
        parse_entity_ref(id, spec.dialect);  // fail fast on bad gold annotations
    }

    auto prompts = make_prompt_bundle(spec);
    auto gateways = make_gateway_factory(spec);
    std::unique_ptr<Store> store;
    auto backend = make_backend(spec, store);

    auto gateway = gateways(question);
    Transcript transcript =
        run_question(question, *gateway, *backend, prompts, run_config_from(spec));
    print_transcript(transcript);
    return transcript.outcome == Outcome::RunError ? 1 : 0;
}

int cmd_validate(const std::string& triples_path, const std::string& labels_path,
                 const std::string& dataset_path, const std::string& dialect_name) {
    auto dialect = dialect_from_string(dialect_name);
    if (!dialect) throw ConfigError("unknown dialect '" + dialect_name + "'");

    if (!triples_path.empty()) {
        std::optional<std::string> labels;
        if (!labels_path.empty()) labels = labels_path;
        Store store = Store::load_files(triples_path, labels);
        std::cout << "triples: " << store.triple_count() << "\n";
    }
    if (!dataset_path.empty()) {
        auto questions = load_dataset(dataset_path);
        for (const auto& q : questions) {
            for (const auto& [label, id] : q.topic_entities) {
                parse_entity_ref(id, *dialect);
            }
        }
        std::cout << "questions: " << questions.size() << "\n";
    }
    std::cout << "ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative knowledge-graph navigation agent runtime"};
    app.require_subcommand(1);

    BenchSpec spec;
    std::string dialect_name = "freebase";

    auto* run = app.add_subcommand("run", "Run a benchmark dataset and write reports");
    run->add_option("--dataset", spec.dataset_path, "JSON-lines question file")->required();
    add_common_options(run, spec, dialect_name);
    run->add_option("--concurrency", spec.concurrency, "Parallel question workers (default 1)");
    run->add_option("--out", spec.out_dir, "Output directory")->required();

    std::string question_text;
    std::vector<std::string> topic_args;
    auto* ask = app.add_subcommand("ask", "Run a single question and print the transcript");
    ask->add_option("--question", question_text, "Question text")->required();
    ask->add_option("--topic", topic_args, "Topic entity as Label=id (repeatable)")->required();
    add_common_options(ask, spec, dialect_name);

    std::string v_triples, v_labels, v_dataset;
    std::string v_dialect = "freebase";
    auto* validate = app.add_subcommand("validate", "Check fixture and dataset files");
    validate->add_option("--triples", v_triples, "Triples TSV to load");
    validate->add_option("--labels", v_labels, "Labels TSV to load with the triples");
    validate->add_option("--dataset", v_dataset, "JSON-lines question file to check");
    validate->add_option("--dialect", v_dialect, "Dialect for id validation")
        ->check(CLI::IsMember({"freebase", "wikidata"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (auto d = kgnav::dialect_from_string(dialect_name)) spec.dialect = *d;
        if (run->parsed()) return cmd_run(std::move(spec));
        if (ask->parsed()) return cmd_ask(std::move(spec), question_text, topic_args);
        if (validate->parsed()) return cmd_validate(v_triples, v_labels, v_dataset, v_dialect);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
