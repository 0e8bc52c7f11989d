#pragma once

// Experiment harness: run configuration, the generate->parse->persist
// pipeline with resumable run directories, metric evaluation over a run,
// report rendering (table/CSV/JSON), and dangling-citation validation.
//
// Run layout: runs/<config-hash>/<event-slug>/{prompts.jsonl, raw.txt,
// article.json, retrieved.json} plus manifest.json and report.json at the
// run root, so every reported number has a full audit trail.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wikigen/article.hpp"
#include "wikigen/clients.hpp"
#include "wikigen/corpus.hpp"
#include "wikigen/error.hpp"
#include "wikigen/generation.hpp"
#include "wikigen/metrics_citation.hpp"
#include "wikigen/metrics_judge.hpp"
#include "wikigen/metrics_ngram.hpp"
#include "wikigen/mock_clients.hpp"
#include "wikigen/retrieval.hpp"

namespace wikigen {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class DocSourceFilter { Human, Search, Mixed };

inline std::string to_string(DocSourceFilter filter) {
    switch (filter) {
        case DocSourceFilter::Human: return "human";
        case DocSourceFilter::Search: return "search";
        case DocSourceFilter::Mixed: return "mixed";
    }
    return "mixed";
}

inline DocSourceFilter parse_doc_source_filter(const std::string& name) {
    if (name == "human") return DocSourceFilter::Human;
    if (name == "search") return DocSourceFilter::Search;
    if (name == "mixed") return DocSourceFilter::Mixed;
    throw ParseError("unknown doc_source '" + name + "' (expected human|search|mixed)");
}

struct RunConfig {
    std::string dataset;
    Method method = Method::RR;
    std::string model_id = "mock-model";
    std::string judge_model_id = "mock-judge";
    Strategy retriever = Strategy::Bm25;
    int top_l = 5;  // 0 disables retrieval (ablation)
    long max_input_tokens = 2048;
    DocSourceFilter doc_source = DocSourceFilter::Mixed;
    uint64_t seed = 0;
    std::string chat_url;
    std::string chat_key;
    std::string nli_url;
    std::string embed_url;
    std::string embed_model = "embed-base";
    std::string search_url;
    std::string search_key;
    std::string cache_dir = "cache";
    bool use_mocks = false;
    int event_parallelism = 1;
    int max_concurrency = 4;
    double tokens_per_word = 4.0 / 3.0;
    double nli_threshold = 0.5;
    int max_output_tokens = 2048;
    std::string reference_scope = "full";  // full | summary
    bool ib_llm_question_generation = false;

    void validate() const {
        if (dataset.empty()) throw ValidationError("config: dataset path is required");
        if (top_l < 0) throw ValidationError("config: top_l must be >= 0");
        if (max_input_tokens < 1) throw ValidationError("config: max_input_tokens must be >= 1");
        if (event_parallelism < 1)
            throw ValidationError("config: event_parallelism must be >= 1");
        if (reference_scope != "full" && reference_scope != "summary")
            throw ValidationError("config: reference_scope must be full|summary");
    }
};

inline ojson config_to_json(const RunConfig& config) {
    ojson j;
    j["dataset"] = config.dataset;
    j["method"] = to_string(config.method);
    j["model_id"] = config.model_id;
    j["judge_model_id"] = config.judge_model_id;
    j["retriever"] = to_string(config.retriever);
    j["top_l"] = config.top_l;
    j["max_input_tokens"] = config.max_input_tokens;
    j["doc_source"] = to_string(config.doc_source);
    j["seed"] = config.seed;
    j["chat_url"] = config.chat_url;
    j["nli_url"] = config.nli_url;
    j["embed_url"] = config.embed_url;
    j["embed_model"] = config.embed_model;
    j["search_url"] = config.search_url;
    // API keys are represented, never persisted.
    j["chat_key_set"] = !config.chat_key.empty();
    j["search_key_set"] = !config.search_key.empty();
    j["cache_dir"] = config.cache_dir;
    j["use_mocks"] = config.use_mocks;
    j["event_parallelism"] = config.event_parallelism;
    j["max_concurrency"] = config.max_concurrency;
    j["tokens_per_word"] = config.tokens_per_word;
    j["nli_threshold"] = config.nli_threshold;
    j["max_output_tokens"] = config.max_output_tokens;
    j["reference_scope"] = config.reference_scope;
    j["ib_llm_question_generation"] = config.ib_llm_question_generation;
    return j;
}

inline RunConfig config_from_json(const json& j) {
    RunConfig config;
    config.dataset = j.value("dataset", config.dataset);
    config.method = parse_method(j.value("method", to_string(config.method)));
    config.model_id = j.value("model_id", config.model_id);
    config.judge_model_id = j.value("judge_model_id", config.judge_model_id);
    config.retriever = parse_strategy(j.value("retriever", to_string(config.retriever)));
    config.top_l = j.value("top_l", config.top_l);
    config.max_input_tokens = j.value("max_input_tokens", config.max_input_tokens);
    config.doc_source =
        parse_doc_source_filter(j.value("doc_source", to_string(config.doc_source)));
    config.seed = j.value("seed", config.seed);
    config.chat_url = j.value("chat_url", config.chat_url);
    config.nli_url = j.value("nli_url", config.nli_url);
    config.embed_url = j.value("embed_url", config.embed_url);
    config.embed_model = j.value("embed_model", config.embed_model);
    config.search_url = j.value("search_url", config.search_url);
    config.cache_dir = j.value("cache_dir", config.cache_dir);
    config.use_mocks = j.value("use_mocks", config.use_mocks);
    config.event_parallelism = j.value("event_parallelism", config.event_parallelism);
    config.max_concurrency = j.value("max_concurrency", config.max_concurrency);
    config.tokens_per_word = j.value("tokens_per_word", config.tokens_per_word);
    config.nli_threshold = j.value("nli_threshold", config.nli_threshold);
    config.max_output_tokens = j.value("max_output_tokens", config.max_output_tokens);
    config.reference_scope = j.value("reference_scope", config.reference_scope);
    config.ib_llm_question_generation =
        j.value("ib_llm_question_generation", config.ib_llm_question_generation);
    return config;
}

/// Applies one `key=value` setting; shared by the config file parser and
/// CLI overrides.
inline void apply_config_kv(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "dataset") config.dataset = value;
    else if (key == "method") config.method = parse_method(value);
    else if (key == "model_id") config.model_id = value;
    else if (key == "judge_model_id") config.judge_model_id = value;
    else if (key == "retriever") config.retriever = parse_strategy(value);
    else if (key == "top_l") config.top_l = std::stoi(value);
    else if (key == "max_input_tokens") config.max_input_tokens = std::stol(value);
    else if (key == "doc_source") config.doc_source = parse_doc_source_filter(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "chat_url") config.chat_url = value;
    else if (key == "chat_key") config.chat_key = value;
    else if (key == "nli_url") config.nli_url = value;
    else if (key == "embed_url") config.embed_url = value;
    else if (key == "embed_model") config.embed_model = value;
    else if (key == "search_url") config.search_url = value;
    else if (key == "search_key") config.search_key = value;
    else if (key == "cache_dir") config.cache_dir = value;
    else if (key == "use_mocks") config.use_mocks = (value == "true" || value == "1");
    else if (key == "event_parallelism") config.event_parallelism = std::stoi(value);
    else if (key == "max_concurrency") config.max_concurrency = std::stoi(value);
    else if (key == "tokens_per_word") config.tokens_per_word = std::stod(value);
    else if (key == "nli_threshold") config.nli_threshold = std::stod(value);
    else if (key == "max_output_tokens") config.max_output_tokens = std::stoi(value);
    else if (key == "reference_scope") config.reference_scope = value;
    else if (key == "ib_llm_question_generation")
        config.ib_llm_question_generation = (value == "true" || value == "1");
    else
        throw ParseError("unknown config key '" + key + "'");
}

/// key=value config file; '#' starts a comment.
inline RunConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError(path.string() + " line " + std::to_string(line_no) +
                             ": expected key=value");
        try {
            apply_config_kv(config, trim(trimmed.substr(0, eq)), trim(trimmed.substr(eq + 1)));
        } catch (const Error& e) {
            throw ParseError(path.string() + " line " + std::to_string(line_no) + ": " +
                             e.what());
        }
    }
    return config;
}

/// Env vars fill endpoint fields that are still empty.
inline void apply_env_endpoints(RunConfig& config) {
    if (config.chat_url.empty()) config.chat_url = env_or(kEnvChatUrl);
    if (config.chat_key.empty()) config.chat_key = env_or(kEnvChatKey);
    if (config.nli_url.empty()) config.nli_url = env_or(kEnvNliUrl);
    if (config.embed_url.empty()) config.embed_url = env_or(kEnvEmbedUrl);
    if (config.search_url.empty()) config.search_url = env_or(kEnvSearchUrl);
    if (config.search_key.empty()) config.search_key = env_or(kEnvSearchKey);
}

/// Experiment identity. The cache location is infrastructure, not part of
/// the experiment, so runs pointed at different caches share a run dir.
inline std::string config_hash(const RunConfig& config) {
    ojson j = config_to_json(config);
    j.erase("cache_dir");
    return content_hash(j.dump()).substr(0, 16);
}

// ---------------------------------------------------------------------------
// Clients
// ---------------------------------------------------------------------------

/// Owns the endpoint clients for one run: mocks or HTTP per the config,
/// each behind the shared persistent cache. Mock pointers stay visible so
/// tests can count underlying calls.
struct ClientSet {
    std::unique_ptr<ResponseCache> cache;
    std::unique_ptr<ChatClient> chat_base;
    std::unique_ptr<EmbeddingClient> embed_base;
    std::unique_ptr<NliClient> nli_base;
    std::unique_ptr<ChatClient> chat;
    std::unique_ptr<EmbeddingClient> embed;
    std::unique_ptr<NliClient> nli;
    MockChatClient* mock_chat = nullptr;
    MockEmbeddingClient* mock_embed = nullptr;
    MockNliClient* mock_nli = nullptr;

    int endpoint_calls() const {
        int calls = 0;
        if (mock_chat) calls += mock_chat->calls();
        if (mock_embed) calls += mock_embed->calls();
        if (mock_nli) calls += mock_nli->calls();
        return calls;
    }
};

inline ClientSet make_clients(const RunConfig& config) {
    ClientSet clients;
    clients.cache = std::make_unique<ResponseCache>(config.cache_dir);
    if (config.use_mocks) {
        auto chat = std::make_unique<MockChatClient>();
        auto embed = std::make_unique<MockEmbeddingClient>();
        auto nli = std::make_unique<MockNliClient>();
        clients.mock_chat = chat.get();
        clients.mock_embed = embed.get();
        clients.mock_nli = nli.get();
        clients.chat_base = std::move(chat);
        clients.embed_base = std::move(embed);
        clients.nli_base = std::move(nli);
    } else {
        auto limit = std::make_shared<ConcurrencyLimit>(config.max_concurrency);
        auto endpoint = [&](const std::string& url, const std::string& key) {
            HttpEndpoint e;
            e.url = url;
            e.api_key = key;
            e.limit = limit;
            return e;
        };
        if (config.chat_url.empty())
            throw ValidationError("no chat endpoint configured (set chat_url, " +
                                  std::string(kEnvChatUrl) + ", or use_mocks)");
        clients.chat_base =
            std::make_unique<HttpChatClient>(endpoint(config.chat_url, config.chat_key));
        if (!config.embed_url.empty())
            clients.embed_base =
                std::make_unique<HttpEmbeddingClient>(endpoint(config.embed_url, ""));
        if (!config.nli_url.empty())
            clients.nli_base = std::make_unique<HttpNliClient>(endpoint(config.nli_url, ""));
    }
    clients.chat = std::make_unique<CachingChatClient>(*clients.chat_base, *clients.cache);
    if (clients.embed_base)
        clients.embed =
            std::make_unique<CachingEmbeddingClient>(*clients.embed_base, *clients.cache);
    if (clients.nli_base)
        clients.nli = std::make_unique<CachingNliClient>(*clients.nli_base, *clients.cache);
    return clients;
}

// ---------------------------------------------------------------------------
// Run persistence
// ---------------------------------------------------------------------------

namespace detail {

inline void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline ojson retrieved_set_to_json(const RetrievedSet& set,
                                   const std::vector<std::string>& offered) {
    ojson j;
    j["query"] = set.query.text;
    j["strategy"] = to_string(set.strategy);
    j["requested_l"] = set.requested_l;
    j["short_of_l"] = set.short_of_l;
    ojson items = ojson::array();
    for (const auto& item : set.items) {
        ojson entry;
        entry["chunk_id"] = item.chunk.chunk_id;
        entry["doc_id"] = item.chunk.doc_id;
        entry["chunk_index"] = item.chunk.chunk_index;
        entry["score"] = item.score;
        entry["text"] = item.chunk.text();
        items.push_back(std::move(entry));
    }
    j["items"] = std::move(items);
    j["offered_docs"] = offered;
    return j;
}

}  // namespace detail

inline void save_run_event(const fs::path& event_dir, const GenerationRun& run,
                           const Article& article) {
    fs::create_directories(event_dir);
    {
        std::ofstream out(event_dir / "prompts.jsonl", std::ios::binary);
        for (const auto& stage : run.stages) {
            ojson record;
            record["stage"] = stage.stage;
            record["prompt"] = stage.prompt;
            record["output"] = stage.output;
            out << record.dump() << "\n";
        }
    }
    detail::write_file(event_dir / "raw.txt", run.final_text);
    detail::write_file(event_dir / "article.json", article_to_json(article).dump(2) + "\n");

    ojson retrieved;
    retrieved["event"] = run.event;
    retrieved["method"] = to_string(run.method);
    retrieved["model_id"] = run.model_id;
    retrieved["strategy"] = to_string(run.strategy);
    retrieved["top_l"] = run.top_l;
    retrieved["failed"] = run.failed;
    retrieved["failure"] = run.failure;
    ojson stages = ojson::array();
    if (run.article_retrieved) {
        ojson stage = detail::retrieved_set_to_json(*run.article_retrieved,
                                                    run.article_offered_docs);
        stage["stage"] = "article";
        stages.push_back(std::move(stage));
    }
    if (run.outline_retrieved) {
        ojson stage = detail::retrieved_set_to_json(*run.outline_retrieved,
                                                    run.outline_offered_docs);
        stage["stage"] = "outline";
        stages.push_back(std::move(stage));
    }
    for (const auto& section : run.sections) {
        ojson stage = detail::retrieved_set_to_json(section.retrieved, section.offered_docs);
        stage["stage"] = "section";
        stage["title"] = section.title;
        stage["section_failed"] = section.failed;
        stage["section_error"] = section.error;
        stages.push_back(std::move(stage));
    }
    retrieved["stages"] = std::move(stages);
    retrieved["outline_titles"] = run.outline_titles;
    retrieved["outline_warnings"] = run.outline_warnings;
    detail::write_file(event_dir / "retrieved.json", retrieved.dump(2) + "\n");
}

struct LoadedEvent {
    GenerationRun run;
    Article article;
};

inline LoadedEvent load_run_event(const fs::path& event_dir) {
    LoadedEvent loaded;
    {
        std::ifstream in(event_dir / "article.json");
        if (!in) throw ParseError("missing article.json in " + event_dir.string());
        json j;
        in >> j;
        loaded.article = article_from_json(j);
    }
    {
        std::ifstream in(event_dir / "raw.txt", std::ios::binary);
        std::ostringstream raw;
        raw << in.rdbuf();
        loaded.run.final_text = raw.str();
    }
    std::ifstream in(event_dir / "retrieved.json");
    if (!in) throw ParseError("missing retrieved.json in " + event_dir.string());
    json j;
    in >> j;
    loaded.run.event = j.value("event", "");
    loaded.run.method = parse_method(j.value("method", "rr"));
    loaded.run.model_id = j.value("model_id", "");
    loaded.run.strategy = parse_strategy(j.value("strategy", "bm25"));
    loaded.run.top_l = j.value("top_l", 0);
    loaded.run.failed = j.value("failed", false);
    loaded.run.failure = j.value("failure", "");
    if (j.contains("outline_titles"))
        loaded.run.outline_titles = j["outline_titles"].get<std::vector<std::string>>();
    if (j.contains("outline_warnings"))
        loaded.run.outline_warnings = j["outline_warnings"].get<std::vector<std::string>>();
    for (const auto& stage : j.value("stages", json::array())) {
        std::string kind = stage.value("stage", "");
        std::vector<std::string> offered =
            stage.value("offered_docs", std::vector<std::string>{});
        if (kind == "article") {
            loaded.run.article_retrieved = RetrievedSet{};
            loaded.run.article_offered_docs = std::move(offered);
        } else if (kind == "outline") {
            loaded.run.outline_retrieved = RetrievedSet{};
            loaded.run.outline_offered_docs = std::move(offered);
        } else if (kind == "section") {
            SectionRun section;
            section.title = stage.value("title", "");
            section.offered_docs = std::move(offered);
            section.failed = stage.value("section_failed", false);
            section.error = stage.value("section_error", "");
            loaded.run.sections.push_back(std::move(section));
        }
    }
    return loaded;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct EventStatus {
    std::string event;
    std::string dir;
    std::string status;  // ok | failed
    std::string error;
};

struct PipelineResult {
    fs::path run_dir;
    std::string hash;
    std::vector<EventStatus> events;
    int completed = 0;
    int failed = 0;
    int skipped = 0;  // already present from a previous run
};

inline std::vector<RelatedDocument> filter_docs(const std::vector<RelatedDocument>& docs,
                                                DocSourceFilter filter) {
    if (filter == DocSourceFilter::Mixed) return docs;
    std::vector<RelatedDocument> out;
    for (const auto& doc : docs) {
        if ((filter == DocSourceFilter::Human && doc.source == DocSource::Human) ||
            (filter == DocSourceFilter::Search && doc.source == DocSource::Search))
            out.push_back(doc);
    }
    return out;
}

inline std::vector<std::string> config_warnings(const RunConfig& config) {
    std::vector<std::string> warnings;
    if (config.model_id == config.judge_model_id)
        warnings.push_back(
            "judge model equals generator model; judge scores may carry "
            "self-enhancement bias");
    return warnings;
}

/// Generate -> parse -> persist for every event; resumable (events with an
/// existing article.json are skipped). Per-event failures are recorded and
/// the run continues.
inline PipelineResult run_pipeline(const RunConfig& config, ClientSet& clients,
                                   const fs::path& runs_root) {
    config.validate();
    auto entries = load_dataset(config.dataset);

    PipelineResult result;
    result.hash = config_hash(config);
    result.run_dir = runs_root / result.hash;
    fs::create_directories(result.run_dir);
    result.events.resize(entries.size());

    // Event directory names; a slug collision gets an index suffix.
    std::vector<std::string> event_dirs(entries.size());
    {
        std::set<std::string> taken;
        for (size_t i = 0; i < entries.size(); ++i) {
            std::string name = slug(entries[i].event);
            if (!taken.insert(name).second) {
                name += "-" + std::to_string(i);
                taken.insert(name);
            }
            event_dirs[i] = std::move(name);
        }
    }

    GenerationParams params;
    params.model_id = config.model_id;
    params.budget.max_input_tokens = config.max_input_tokens;
    params.budget.tokens_per_word = config.tokens_per_word;
    params.max_output_tokens = config.max_output_tokens;

    EmbedFn embed_fn;
    if (clients.embed) {
        EmbeddingClient* embedder = clients.embed.get();
        std::string model = config.embed_model;
        embed_fn = [embedder, model](const std::vector<std::string>& texts) {
            return embedder->embed(model, texts);
        };
    }

    std::atomic<size_t> next{0};
    std::atomic<int> completed{0}, failed{0}, skipped{0};

    auto process_event = [&](size_t index) {
        const auto& entry = entries[index];
        EventStatus status;
        status.event = entry.event;
        status.dir = event_dirs[index];
        fs::path event_dir = result.run_dir / status.dir;
        // Complete means generated without a recorded error; failed events
        // (including partial RPRR output) are retried.
        if (fs::exists(event_dir / "article.json") && !fs::exists(event_dir / "error.txt")) {
            status.status = "ok";
            skipped.fetch_add(1);
            completed.fetch_add(1);
            result.events[index] = status;
            return;
        }
        std::error_code stale;
        fs::remove(event_dir / "error.txt", stale);
        try {
            DatasetEntry filtered = entry;
            filtered.related_docs = filter_docs(entry.related_docs, config.doc_source);
            if (config.top_l > 0 && config.retriever != Strategy::Golden &&
                filtered.related_docs.empty())
                throw ValidationError("no related documents after doc_source filter");

            RetrieveOptions options;
            options.top_l = config.top_l;
            options.seed = config.seed;
            options.embed = embed_fn;
            auto context = RetrievalContext::for_entry(filtered, config.retriever, options);
            auto run = generate(config.method, filtered, context, *clients.chat, params);
            auto article = parse_article(run.final_text, entry.event);
            save_run_event(event_dir, run, article);
            if (run.failed) {
                status.status = "failed";
                status.error = run.failure;
                detail::write_file(event_dir / "error.txt", run.failure + "\n");
                failed.fetch_add(1);
            } else {
                status.status = "ok";
                completed.fetch_add(1);
            }
        } catch (const std::exception& e) {
            status.status = "failed";
            status.error = e.what();
            fs::create_directories(event_dir);
            detail::write_file(event_dir / "error.txt", std::string(e.what()) + "\n");
            failed.fetch_add(1);
        }
        result.events[index] = status;
    };

    int workers = std::min<int>(config.event_parallelism, static_cast<int>(entries.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < entries.size(); ++i) process_event(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    size_t index = next.fetch_add(1);
                    if (index >= entries.size()) return;
                    process_event(index);
                }
            });
        }
        for (auto& thread : pool) thread.join();
    }

    result.completed = completed.load();
    result.failed = failed.load();
    result.skipped = skipped.load();

    ojson manifest;
    manifest["config"] = config_to_json(config);
    manifest["config_hash"] = result.hash;
    manifest["warnings"] = config_warnings(config);
    ojson events = ojson::array();
    for (const auto& status : result.events) {
        ojson e;
        e["event"] = status.event;
        e["dir"] = status.dir;
        e["status"] = status.status;
        e["error"] = status.error;
        events.push_back(std::move(e));
    }
    manifest["events"] = std::move(events);
    detail::write_file(result.run_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

// ---------------------------------------------------------------------------
// Metric report
// ---------------------------------------------------------------------------

struct MetricRow {
    std::string event;
    bool failed = false;
    std::string note;
    std::optional<double> fluent, b1, b4, meteor, rouge_l, ib, info, focus, outline;
    std::optional<double> cit_rate, cit_recall, cit_prec;
    std::optional<double> length;
};

struct MetricReport {
    std::string config_hash;
    std::vector<MetricRow> rows;
    MetricRow aggregate;  // unweighted mean over non-failed rows
    std::vector<std::string> metadata;
};

namespace detail {

struct ColumnSpec {
    const char* header;
    std::optional<double> MetricRow::* field;
};

inline const std::vector<ColumnSpec>& metric_columns() {
    static const std::vector<ColumnSpec> columns = {
        {"Fluent", &MetricRow::fluent},     {"B-1", &MetricRow::b1},
        {"B-4", &MetricRow::b4},            {"MET", &MetricRow::meteor},
        {"R-L", &MetricRow::rouge_l},       {"IB", &MetricRow::ib},
        {"Info", &MetricRow::info},         {"Focus", &MetricRow::focus},
        {"Outline", &MetricRow::outline},   {"Cit.Rate", &MetricRow::cit_rate},
        {"Cit.Rec", &MetricRow::cit_recall}, {"Cit.Prec", &MetricRow::cit_prec},
        {"Length", &MetricRow::length}};
    return columns;
}

inline std::string format_cell(const std::optional<double>& value) {
    if (!value) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", *value);
    return buffer;
}

inline const char* csv_field_name(const char* header) {
    // CSV uses the report field names rather than the table abbreviations.
    static const std::map<std::string, const char*> names = {
        {"Fluent", "fluent"},     {"B-1", "b1"},
        {"B-4", "b4"},            {"MET", "meteor"},
        {"R-L", "rouge_l"},       {"IB", "ib_score"},
        {"Info", "info"},         {"Focus", "focus"},
        {"Outline", "outline"},   {"Cit.Rate", "cit_rate"},
        {"Cit.Rec", "cit_recall"}, {"Cit.Prec", "cit_prec"},
        {"Length", "length"}};
    return names.at(header);
}

}  // namespace detail

inline MetricRow aggregate_rows(const std::vector<MetricRow>& rows) {
    MetricRow mean;
    mean.event = "mean";
    for (const auto& column : detail::metric_columns()) {
        double sum = 0.0;
        int count = 0;
        for (const auto& row : rows) {
            if (row.failed) continue;
            const auto& value = row.*(column.field);
            if (value) {
                sum += *value;
                ++count;
            }
        }
        if (count > 0) mean.*(column.field) = sum / count;
    }
    return mean;
}

struct EvaluateFlags {
    bool skip_judge = false;
    bool skip_nli = false;
};

inline std::string reference_text(const DatasetEntry& entry, const std::string& scope) {
    if (scope == "summary") return entry.wikipage.summary;
    return entry.wikipage.full_text();
}

/// Computes every metric family over a finished run directory. Judge and
/// NLI metrics are skippable; rows for events with missing artifacts are
/// marked failed. The report lands in report.json next to the manifest.
inline MetricReport evaluate_run(const fs::path& run_dir, const RunConfig& config,
                                 ClientSet& clients, const EvaluateFlags& flags = {}) {
    std::ifstream manifest_in(run_dir / "manifest.json");
    if (!manifest_in) throw ParseError("missing manifest.json in " + run_dir.string());
    json manifest;
    manifest_in >> manifest;

    auto entries = load_dataset(config.dataset);
    std::map<std::string, const DatasetEntry*> by_event;
    for (const auto& entry : entries) by_event[entry.event] = &entry;

    MetricReport report;
    report.config_hash = manifest.value("config_hash", "");
    report.metadata.push_back(FaithfulnessReport::kPrecisionRule);
    report.metadata.push_back(config.ib_llm_question_generation
                                  ? "ib-questions: llm-generated"
                                  : "ib-questions: deterministic-template");
    for (const auto& warning : config_warnings(config)) report.metadata.push_back(warning);

    JudgeOptions judge_options;
    judge_options.model_id = config.judge_model_id;
    IbOptions ib_options;
    ib_options.qa.model_id = config.model_id;
    ib_options.judge.model_id = config.judge_model_id;
    ib_options.use_llm_question_generation = config.ib_llm_question_generation;

    if (!manifest.contains("events") || manifest["events"].empty())
        throw ParseError("run directory has no events: " + run_dir.string());

    for (const auto& event_entry : manifest["events"]) {
        MetricRow row;
        row.event = event_entry.value("event", "");
        fs::path event_dir = run_dir / event_entry.value("dir", "");
        if (event_entry.value("status", "") != "ok" ||
            !fs::exists(event_dir / "article.json")) {
            row.failed = true;
            row.note = event_entry.value("error", "missing article");
            report.rows.push_back(std::move(row));
            continue;
        }
        auto it = by_event.find(row.event);
        if (it == by_event.end()) {
            row.failed = true;
            row.note = "event not present in dataset";
            report.rows.push_back(std::move(row));
            continue;
        }
        const DatasetEntry& entry = *it->second;

        try {
            auto loaded = load_run_event(event_dir);
            const Article& article = loaded.article;
            row.length = static_cast<double>(article.total_words);

            auto candidate_tokens = normalize_tokens(article.plain_text());
            auto ref_tokens =
                normalize_tokens(reference_text(entry, config.reference_scope));
            row.b1 = bleu_n(candidate_tokens, ref_tokens, 1).value;
            row.b4 = bleu_n(candidate_tokens, ref_tokens, 4).value;
            row.meteor = meteor(candidate_tokens, ref_tokens).value;
            row.rouge_l = rouge_l(candidate_tokens, ref_tokens).value;

            if (!flags.skip_nli) {
                if (!clients.nli)
                    throw ValidationError("NLI metrics need an NLI endpoint or --skip-nli");
                EntailmentJudge nli_judge(*clients.nli, config.nli_threshold);
                auto faithfulness = evaluate_faithfulness(article, loaded.run, nli_judge);
                row.cit_rate = faithfulness.citation_rate;
                row.cit_recall = faithfulness.citation_recall;
                row.cit_prec = faithfulness.citation_precision;
            }

            if (!flags.skip_judge) {
                auto [fluent, info] = fluent_and_info_score(loaded.run.final_text, row.event,
                                                            *clients.chat, judge_options);
                row.fluent = fluent.value;
                row.info = info.value;
                if (!article.sections.empty()) {
                    row.focus = focus_score(article, *clients.chat, judge_options)
                                    .article_score.value;
                    std::vector<std::string> titles;
                    for (const auto& section : article.sections)
                        titles.push_back(section.title);
                    row.outline =
                        outline_score(row.event, titles, *clients.chat, judge_options).value;
                }
                auto ib = ib_score(entry.wikipage.infobox, article.plain_text(), row.event,
                                   *clients.chat, *clients.chat, ib_options);
                row.ib = ib.score;
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.note = e.what();
        }
        report.rows.push_back(std::move(row));
    }

    report.aggregate = aggregate_rows(report.rows);

    detail::write_file(run_dir / "report.json", [&] {
        ojson j;
        j["config_hash"] = report.config_hash;
        j["metadata"] = report.metadata;
        auto row_json = [](const MetricRow& row) {
            ojson r;
            r["event"] = row.event;
            if (row.failed) {
                r["failed"] = true;
                r["note"] = row.note;
            }
            for (const auto& column : detail::metric_columns()) {
                const auto& value = row.*(column.field);
                if (value) r[detail::csv_field_name(column.header)] = *value;
            }
            return r;
        };
        ojson rows = ojson::array();
        for (const auto& row : report.rows) rows.push_back(row_json(row));
        j["rows"] = std::move(rows);
        j["aggregate"] = row_json(report.aggregate);
        return j.dump(2) + "\n";
    }());
    return report;
}

inline MetricReport report_from_json(const json& j) {
    MetricReport report;
    report.config_hash = j.value("config_hash", "");
    if (j.contains("metadata"))
        report.metadata = j["metadata"].get<std::vector<std::string>>();
    auto parse_row = [](const json& r) {
        MetricRow row;
        row.event = r.value("event", "");
        row.failed = r.value("failed", false);
        row.note = r.value("note", "");
        for (const auto& column : detail::metric_columns()) {
            const char* name = detail::csv_field_name(column.header);
            if (r.contains(name)) row.*(column.field) = r[name].get<double>();
        }
        return row;
    };
    for (const auto& r : j.value("rows", json::array())) report.rows.push_back(parse_row(r));
    if (j.contains("aggregate")) report.aggregate = parse_row(j["aggregate"]);
    return report;
}

inline MetricReport load_report(const fs::path& run_dir) {
    std::ifstream in(run_dir / "report.json");
    if (!in)
        throw ParseError("missing report.json in " + run_dir.string() +
                         " (run `evaluate` first)");
    json j;
    in >> j;
    return report_from_json(j);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

enum class ReportFormat { Table, Csv, Json };

inline ReportFormat parse_report_format(const std::string& name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw ParseError("unknown report format '" + name + "' (expected table|csv|json)");
}

inline std::string render_report(const MetricReport& report, ReportFormat format) {
    // Columns with no value anywhere (e.g. judge metrics under --skip-judge)
    // are dropped.
    std::vector<detail::ColumnSpec> active;
    for (const auto& column : detail::metric_columns()) {
        bool any = (report.aggregate.*(column.field)).has_value();
        for (const auto& row : report.rows) any = any || (row.*(column.field)).has_value();
        if (any) active.push_back(column);
    }

    if (format == ReportFormat::Json) {
        ojson j;
        j["config_hash"] = report.config_hash;
        j["metadata"] = report.metadata;
        auto row_json = [&](const MetricRow& row) {
            ojson r;
            r["event"] = row.event;
            if (row.failed) {
                r["failed"] = true;
                r["note"] = row.note;
            }
            for (const auto& column : active) {
                const auto& value = row.*(column.field);
                if (value) r[detail::csv_field_name(column.header)] = *value;
            }
            return r;
        };
        ojson rows = ojson::array();
        for (const auto& row : report.rows) rows.push_back(row_json(row));
        j["rows"] = std::move(rows);
        j["aggregate"] = row_json(report.aggregate);
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::Csv) {
        std::string out = "event";
        for (const auto& column : active)
            out += std::string(",") + detail::csv_field_name(column.header);
        out += "\n";
        auto emit = [&](const MetricRow& row) {
            std::string line = "\"" + row.event + "\"";
            for (const auto& column : active) {
                const auto& value = row.*(column.field);
                line += ",";
                if (value) line += detail::format_cell(value);
            }
            out += line + "\n";
        };
        for (const auto& row : report.rows) emit(row);
        emit(report.aggregate);
        return out;
    }

    // Aligned table.
    std::string preamble;
    if (!report.config_hash.empty()) preamble = "config " + report.config_hash + "\n";
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header = {"event"};
    for (const auto& column : active) header.push_back(column.header);
    grid.push_back(header);
    auto emit = [&](const MetricRow& row) {
        std::vector<std::string> cells = {row.event + (row.failed ? " [failed]" : "")};
        for (const auto& column : active) cells.push_back(detail::format_cell(row.*(column.field)));
        grid.push_back(std::move(cells));
    };
    for (const auto& row : report.rows) emit(row);
    emit(report.aggregate);

    std::vector<size_t> widths(header.size(), 0);
    for (const auto& row : grid)
        for (size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    std::string out = preamble;
    for (size_t r = 0; r < grid.size(); ++r) {
        std::string line;
        for (size_t c = 0; c < grid[r].size(); ++c) {
            std::string cell = grid[r][c];
            if (c == 0) {
                cell.resize(widths[c], ' ');
                line += cell;
            } else {
                line += "  ";
                line.insert(line.end(), widths[c] - cell.size(), ' ');
                line += cell;
            }
        }
        out += line + "\n";
        if (r == 0) {
            size_t total = 0;
            for (size_t c = 0; c < widths.size(); ++c) total += widths[c] + (c ? 2 : 0);
            out += std::string(total, '-') + "\n";
        }
        if (r + 2 == grid.size()) {
            size_t total = 0;
            for (size_t c = 0; c < widths.size(); ++c) total += widths[c] + (c ? 2 : 0);
            out += std::string(total, '-') + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Citation validation
// ---------------------------------------------------------------------------

struct DanglingCitation {
    std::string event;
    std::string section;
    size_t sentence_index = 0;
    int citation = 0;
    int offered = 0;
};

/// Lists every sentence whose citation index exceeds the number of
/// documents offered to its section's prompt.
inline std::vector<DanglingCitation> validate_citations(const fs::path& run_dir) {
    std::ifstream manifest_in(run_dir / "manifest.json");
    if (!manifest_in) throw ParseError("missing manifest.json in " + run_dir.string());
    json manifest;
    manifest_in >> manifest;

    std::vector<DanglingCitation> findings;
    for (const auto& event_entry : manifest.value("events", json::array())) {
        fs::path event_dir = run_dir / event_entry.value("dir", "");
        if (!fs::exists(event_dir / "article.json")) continue;
        auto loaded = load_run_event(event_dir);
        for (size_t s = 0; s < loaded.article.sections.size(); ++s) {
            const auto& section = loaded.article.sections[s];
            const auto* offered = offered_docs_for_section(loaded.run, s, section.title);
            int count = offered ? static_cast<int>(offered->size()) : 0;
            for (size_t i = 0; i < section.sentences.size(); ++i) {
                for (int k : section.sentences[i].citations) {
                    if (k < 1 || k > count) {
                        DanglingCitation finding;
                        finding.event = loaded.run.event;
                        finding.section = section.title;
                        finding.sentence_index = i;
                        finding.citation = k;
                        finding.offered = count;
                        findings.push_back(std::move(finding));
                    }
                }
            }
        }
    }
    return findings;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRun {
    std::string label;
    MetricReport report;
};

/// One comparison table over the sweep: rows are swept values, columns the
/// aggregate metrics.
inline std::string render_sweep(const std::string& swept_key,
                                const std::vector<SweepRun>& runs) {
    MetricReport combined;
    for (const auto& run : runs) {
        MetricRow row = run.report.aggregate;
        row.event = run.label;
        combined.rows.push_back(std::move(row));
    }
    combined.aggregate = aggregate_rows(combined.rows);
    combined.aggregate.event = "mean";
    std::string out = "sweep over " + swept_key + "\n";
    out += render_report(combined, ReportFormat::Table);
    return out;
}

}  // namespace wikigen
