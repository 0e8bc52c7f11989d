// wikigen command line: dataset construction, generation runs, metric
// evaluation, report rendering, sweeps, citation validation, and cache
// maintenance.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wikigen/dataset_builder.hpp"
#include "wikigen/harness.hpp"

namespace {

using namespace wikigen;

struct ConfigCli {
    std::string config_file;
    std::vector<std::string> overrides;  // key=value pairs, applied last
    std::string dataset;
    std::string method;
    std::string retriever;
    std::string model_id;
    std::string judge_model_id;
    std::string doc_source;
    std::string cache_dir;
    int top_l = -1;
    long max_input_tokens = -1;
    long long seed = -1;
    int event_parallelism = -1;
    bool use_mocks = false;
};

void add_config_options(CLI::App* cmd, ConfigCli& cli, bool single_value_selectors = true) {
    cmd->add_option("--config", cli.config_file, "key=value config file");
    cmd->add_option("--dataset", cli.dataset, "dataset directory");
    cmd->add_option("--method", cli.method, "generation method: rr|rprr");
    if (single_value_selectors) {
        cmd->add_option("--retriever", cli.retriever,
                        "retrieval strategy: random|tfidf|bm25|dense|golden");
        cmd->add_option("--top-l", cli.top_l,
                        "retrieved chunks per query (0 disables retrieval)");
    }
    cmd->add_option("--model", cli.model_id, "generator model id");
    cmd->add_option("--judge-model", cli.judge_model_id, "judge model id");
    cmd->add_option("--max-input-tokens", cli.max_input_tokens,
                    "prompt budget in estimated tokens");
    cmd->add_option("--doc-source", cli.doc_source, "document source filter: human|search|mixed");
    cmd->add_option("--seed", cli.seed, "seed for random retrieval");
    cmd->add_option("--cache-dir", cli.cache_dir, "response cache directory");
    cmd->add_option("--event-parallelism", cli.event_parallelism,
                    "events processed concurrently");
    cmd->add_flag("--mock", cli.use_mocks, "use deterministic mock endpoints");
    cmd->add_option("--set", cli.overrides, "extra key=value config override")
        ->take_all();
}

RunConfig resolve_config(const ConfigCli& cli) {
    RunConfig config;
    if (!cli.config_file.empty()) config = load_config_file(cli.config_file);
    apply_env_endpoints(config);
    if (!cli.dataset.empty()) config.dataset = cli.dataset;
    if (!cli.method.empty()) config.method = parse_method(cli.method);
    if (!cli.retriever.empty()) config.retriever = parse_strategy(cli.retriever);
    if (!cli.model_id.empty()) config.model_id = cli.model_id;
    if (!cli.judge_model_id.empty()) config.judge_model_id = cli.judge_model_id;
    if (!cli.doc_source.empty()) config.doc_source = parse_doc_source_filter(cli.doc_source);
    if (!cli.cache_dir.empty()) config.cache_dir = cli.cache_dir;
    if (cli.top_l >= 0) config.top_l = cli.top_l;
    if (cli.max_input_tokens >= 0) config.max_input_tokens = cli.max_input_tokens;
    if (cli.seed >= 0) config.seed = static_cast<uint64_t>(cli.seed);
    if (cli.event_parallelism >= 1) config.event_parallelism = cli.event_parallelism;
    if (cli.use_mocks) config.use_mocks = true;
    for (const auto& pair : cli.overrides) {
        auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw ParseError("--set expects key=value, got '" + pair + "'");
        apply_config_kv(config, trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
    }
    return config;
}

int print_pipeline_result(const PipelineResult& result) {
    for (const auto& status : result.events) {
        std::cout << (status.status == "ok" ? "  ok     " : "  FAILED ") << status.event;
        if (!status.error.empty()) std::cout << "  (" << status.error << ")";
        std::cout << "\n";
    }
    std::cout << "run " << result.hash << ": " << result.completed << " ok, " << result.failed
              << " failed";
    if (result.skipped > 0) std::cout << ", " << result.skipped << " resumed";
    std::cout << "\nrun dir: " << result.run_dir.string() << "\n";
    return result.failed > 0 ? 1 : 0;
}

RunConfig config_from_run_dir(const fs::path& run_dir) {
    std::ifstream in(run_dir / "manifest.json");
    if (!in) throw ParseError("missing manifest.json in " + run_dir.string());
    json manifest;
    in >> manifest;
    if (!manifest.contains("config"))
        throw ParseError("manifest in " + run_dir.string() + " has no config");
    return config_from_json(manifest["config"]);
}

std::vector<std::string> split_csv_list(const std::string& csv) {
    std::vector<std::string> values;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            if (!trim(current).empty()) values.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!trim(current).empty()) values.push_back(trim(current));
    return values;
}

int run_build_dataset(const std::string& titles_file, const std::string& out_dir,
                      const std::string& cutoff, const std::string& allowlist_file,
                      const std::string& wiki_url, const std::string& cache_dir,
                      int min_extract_words, int max_search_results) {
    std::ifstream titles_in(titles_file);
    if (!titles_in) throw ParseError("cannot open titles file " + titles_file);
    std::vector<std::string> titles;
    std::string line;
    while (std::getline(titles_in, line)) {
        auto title = trim(line);
        if (!title.empty() && title[0] != '#') titles.push_back(title);
    }

    BuilderConfig builder_config;
    builder_config.cutoff_date = cutoff;
    builder_config.min_extract_words = min_extract_words;
    builder_config.max_search_results = max_search_results;
    if (!allowlist_file.empty()) {
        std::ifstream allow_in(allowlist_file);
        if (!allow_in) throw ParseError("cannot open allowlist file " + allowlist_file);
        std::set<std::string> allow;
        while (std::getline(allow_in, line)) {
            auto title = trim(line);
            if (!title.empty()) allow.insert(title);
        }
        builder_config.allowlist = std::move(allow);
    }

    std::string resolved_wiki = wiki_url;
    std::string search_url = env_or(kEnvSearchUrl);
    if (resolved_wiki.empty())
        throw ValidationError("build-dataset needs --wiki-url");
    if (search_url.empty())
        throw ValidationError(std::string("build-dataset needs ") + kEnvSearchUrl);

    HttpEndpoint wiki_endpoint;
    wiki_endpoint.url = resolved_wiki;
    HttpWikiClient wiki(wiki_endpoint);
    HttpEndpoint search_endpoint;
    search_endpoint.url = search_url;
    search_endpoint.api_key = env_or(kEnvSearchKey);
    HttpSearchClient search(search_endpoint);
    HttpUrlFetcher raw_fetcher;
    ResponseCache cache(cache_dir);
    CachingUrlFetcher fetcher(raw_fetcher, cache);

    int accepted = 0, rejected = 0;
    std::vector<DatasetEntry> entries;
    for (const auto& title : titles) {
        fs::path entry_dir = fs::path(out_dir) / slug(title);
        if (fs::exists(entry_dir / "wikipage.json")) {
            std::cout << "  skip   " << title << " (already built)\n";
            entries.push_back(load_entry(entry_dir));
            ++accepted;
            continue;
        }
        auto outcome = build_entry(title, wiki, search, fetcher, builder_config);
        if (outcome.accepted) {
            save_entry(entry_dir, *outcome.entry);
            std::cout << "  ok     " << title << " (" << outcome.entry->related_docs.size()
                      << " docs, crawl rate " << outcome.crawl_success_rate << ")"
                      << (outcome.search_empty ? " [no search results]" : "") << "\n";
            entries.push_back(*outcome.entry);
            ++accepted;
        } else {
            std::cout << "  reject " << title << " (" << outcome.rejection_reason << ")\n";
            ++rejected;
        }
    }
    std::cout << "accepted " << accepted << ", rejected " << rejected << "\n";
    if (!entries.empty()) {
        auto stats = dataset_stats(entries);
        std::cout << "dataset statistics: events " << stats.events << ", related docs "
                  << stats.related_docs << ", words " << stats.total_words
                  << ", avg sections " << stats.avg_sections << ", avg page words "
                  << stats.avg_page_words << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"retrieval-augmented generation and evaluation of citation-bearing "
                 "wiki-style articles"};
    app.require_subcommand(1);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "run the generation pipeline");
    ConfigCli generate_cli;
    std::string runs_dir = "runs";
    add_config_options(generate_cmd, generate_cli);
    generate_cmd->add_option("--runs-dir", runs_dir, "root directory for run outputs");

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "compute metrics over a finished run");
    std::string eval_run_dir;
    bool skip_judge = false, skip_nli = false;
    std::vector<std::string> eval_overrides;
    evaluate_cmd->add_option("--run", eval_run_dir, "run directory")->required();
    evaluate_cmd->add_flag("--skip-judge", skip_judge, "skip judge-model metrics");
    evaluate_cmd->add_flag("--skip-nli", skip_nli, "skip NLI citation metrics");
    evaluate_cmd->add_option("--set", eval_overrides, "key=value config override")->take_all();

    // report
    auto* report_cmd = app.add_subcommand("report", "render a run's report");
    std::string report_run_dir, report_format = "table", report_out;
    report_cmd->add_option("--run", report_run_dir, "run directory")->required();
    report_cmd->add_option("--format", report_format, "table|csv|json");
    report_cmd->add_option("--out", report_out, "write to file instead of stdout");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a config sweep and compare aggregates");
    ConfigCli sweep_cli;
    std::string sweep_runs_dir = "runs";
    std::string sweep_top_l, sweep_retriever;
    bool sweep_skip_judge = false, sweep_skip_nli = false;
    add_config_options(sweep_cmd, sweep_cli, /*single_value_selectors=*/false);
    sweep_cmd->add_option("--runs-dir", sweep_runs_dir, "root directory for run outputs");
    sweep_cmd->add_option("--top-l", sweep_top_l,
                          "comma list of retrieved-document counts, e.g. 0,5,10,15,20");
    sweep_cmd->add_option("--retriever", sweep_retriever,
                          "comma list of strategies, e.g. random,tfidf,bm25,dense,golden");
    sweep_cmd->add_flag("--skip-judge", sweep_skip_judge, "skip judge-model metrics");
    sweep_cmd->add_flag("--skip-nli", sweep_skip_nli, "skip NLI citation metrics");

    // validate-citations
    auto* validate_cmd =
        app.add_subcommand("validate-citations", "list citations pointing past offered documents");
    std::string validate_run_dir;
    validate_cmd->add_option("--run", validate_run_dir, "run directory")->required();

    // build-dataset
    auto* build_cmd = app.add_subcommand("build-dataset", "construct benchmark entries");
    std::string titles_file, out_dir, cutoff, allowlist_file, wiki_url;
    std::string build_cache_dir = "cache";
    int min_extract_words = 50, max_search_results = 10;
    build_cmd->add_option("--titles", titles_file, "file with one candidate title per line")
        ->required();
    build_cmd->add_option("--out", out_dir, "output dataset directory")->required();
    build_cmd->add_option("--cutoff", cutoff, "creation-date cutoff (yyyy-mm-dd)");
    build_cmd->add_option("--allowlist", allowlist_file, "event-type allowlist of titles");
    build_cmd->add_option("--wiki-url", wiki_url, "wiki API endpoint");
    build_cmd->add_option("--cache-dir", build_cache_dir, "crawl cache directory");
    build_cmd->add_option("--min-extract-words", min_extract_words,
                          "words required for a crawl to count");
    build_cmd->add_option("--max-search-results", max_search_results,
                          "search results fetched per title");

    // cache gc
    auto* cache_cmd = app.add_subcommand("cache", "response cache maintenance");
    auto* gc_cmd = cache_cmd->add_subcommand("gc", "compact the cache log");
    std::string gc_cache_dir = "cache";
    long long gc_max_bytes = -1;
    gc_cmd->add_option("--cache-dir", gc_cache_dir, "cache directory");
    gc_cmd->add_option("--max-bytes", gc_max_bytes, "evict oldest entries beyond this size");
    cache_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate_cmd->parsed()) {
            auto config = resolve_config(generate_cli);
            for (const auto& warning : config_warnings(config))
                std::cerr << "warning: " << warning << "\n";
            auto clients = make_clients(config);
            auto result = run_pipeline(config, clients, runs_dir);
            return print_pipeline_result(result);
        }
        if (evaluate_cmd->parsed()) {
            auto config = config_from_run_dir(eval_run_dir);
            for (const auto& pair : eval_overrides) {
                auto eq = pair.find('=');
                if (eq == std::string::npos)
                    throw ParseError("--set expects key=value, got '" + pair + "'");
                apply_config_kv(config, trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
            }
            auto clients = make_clients(config);
            EvaluateFlags flags;
            flags.skip_judge = skip_judge;
            flags.skip_nli = skip_nli;
            auto report = evaluate_run(eval_run_dir, config, clients, flags);
            std::cout << render_report(report, ReportFormat::Table);
            std::cout << "report written to " << (fs::path(eval_run_dir) / "report.json").string()
                      << "\n";
            int failed = 0;
            for (const auto& row : report.rows) failed += row.failed ? 1 : 0;
            return failed > 0 ? 1 : 0;
        }
        if (report_cmd->parsed()) {
            auto report = load_report(report_run_dir);
            auto rendered = render_report(report, parse_report_format(report_format));
            if (report_out.empty()) {
                std::cout << rendered;
            } else {
                std::ofstream out(report_out, std::ios::binary);
                out << rendered;
            }
            return 0;
        }
        if (sweep_cmd->parsed()) {
            if (sweep_top_l.empty() == sweep_retriever.empty())
                throw ParseError("sweep needs exactly one of --top-l / --retriever");
            auto base = resolve_config(sweep_cli);
            EvaluateFlags flags;
            flags.skip_judge = sweep_skip_judge;
            flags.skip_nli = sweep_skip_nli;
            std::vector<SweepRun> runs;
            std::string swept_key = sweep_top_l.empty() ? "retriever" : "top_l";
            int failures = 0;
            for (const auto& value :
                 split_csv_list(sweep_top_l.empty() ? sweep_retriever : sweep_top_l)) {
                auto config = base;
                apply_config_kv(config, swept_key, value);
                auto clients = make_clients(config);
                auto result = run_pipeline(config, clients, sweep_runs_dir);
                failures += result.failed;
                SweepRun run;
                run.label = swept_key + "=" + value;
                run.report = evaluate_run(result.run_dir, config, clients, flags);
                std::cout << "completed " << run.label << " -> " << result.run_dir.string()
                          << "\n";
                runs.push_back(std::move(run));
            }
            std::cout << render_sweep(swept_key, runs);
            return failures > 0 ? 1 : 0;
        }
        if (validate_cmd->parsed()) {
            auto findings = validate_citations(validate_run_dir);
            for (const auto& finding : findings) {
                std::cout << finding.event << " / " << finding.section << " / sentence "
                          << finding.sentence_index << ": citation [" << finding.citation
                          << "] exceeds " << finding.offered << " offered documents\n";
            }
            if (findings.empty()) {
                std::cout << "no dangling citations\n";
                return 0;
            }
            std::cout << findings.size() << " dangling citations\n";
            return 1;
        }
        if (build_cmd->parsed()) {
            return run_build_dataset(titles_file, out_dir, cutoff, allowlist_file, wiki_url,
                                     build_cache_dir, min_extract_words, max_search_results);
        }
        if (cache_cmd->parsed() && gc_cmd->parsed()) {
            ResponseCache cache(gc_cache_dir);
            auto stats = cache.gc(gc_max_bytes >= 0
                                      ? std::optional<uintmax_t>(
                                            static_cast<uintmax_t>(gc_max_bytes))
                                      : std::nullopt);
            std::cout << "entries: " << stats.entries_before << " -> " << stats.entries_after
                      << "\nbytes:   " << stats.bytes_before << " -> " << stats.bytes_after
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
