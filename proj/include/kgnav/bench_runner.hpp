#pragma once
// Benchmark orchestration behind the CLI: dataset parsing, backend/gateway
// construction from spec strings, the bounded worker pool, and report files.

#include "kgnav/agent_loop.hpp"
#include "kgnav/eval_harness.hpp"

#include <filesystem>
#include <functional>
#include <memory>

namespace kgnav {

class ConfigError final : public Error {
public:
    using Error::Error;
};

// Operator-facing run description.
//   backend_spec: "local:<triples.tsv>,<labels.tsv>" (labels optional) or
//                 "sparql:<url>"
//   gateway_spec: "script:<file-or-dir>" or a chat-completions base URL
struct BenchSpec {
    std::string dataset_path;
    std::string backend_spec;
    SchemaDialect dialect = SchemaDialect::Freebase;
    std::string gateway_spec;
    std::string instructions_path;
    std::string exemplars_dir;  // empty => 0-shot regardless of `shots`
    std::size_t shots = 0;
    SearchConfig search;
    std::size_t max_turns = 16;
    std::size_t concurrency = 1;
    std::string out_dir;
    bool allow_network = false;
    std::string model;        // live gateways only
    std::string api_key_env = "KGNAV_API_KEY";
    bool open_model_params = false;  // send the documented open-model sampling defaults
};

// Rejects out-of-range thresholds and turn budgets before anything runs.
void validate_spec(const BenchSpec& spec);

// Dataset wire format: JSON lines, one object per question:
//   {"id": ..., "question": ..., "topic_entities": {label: id, ...},
//    "answers": [...]}
// Topic-entity order is preserved. Lines starting with `#` are skipped.
std::vector<Question> load_dataset(const std::filesystem::path& path);

// Produces one ChatClient per question. Scripted gateways open
// <dir>/<question-id>.json (or replay a single file for every question);
// live gateways share one HTTP client.
using GatewayFactory = std::function<std::unique_ptr<ChatClient>(const Question&)>;

GatewayFactory make_gateway_factory(const BenchSpec& spec);
std::unique_ptr<Backend> make_backend(const BenchSpec& spec, std::unique_ptr<Store>& store_out);
PromptBundle make_prompt_bundle(const BenchSpec& spec);

// Runs every question under a pool of `concurrency` workers. Transcript order
// matches dataset order regardless of completion order.
std::vector<Transcript> run_benchmark(const std::vector<Question>& questions,
                                      const GatewayFactory& gateways, Backend& backend,
                                      const PromptBundle& prompts, const RunConfig& cfg,
                                      std::size_t concurrency);

// Writes transcripts/<question-id>.json, report.json, report.csv, and
// run_meta.json (the only file carrying timestamps) under out_dir.
void write_run_outputs(const std::filesystem::path& out_dir,
                       const std::vector<Transcript>& transcripts, const EvalReport& report);

}  // namespace kgnav
