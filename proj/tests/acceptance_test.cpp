// Acceptance suite: one test per acceptance criterion, each printing a
// single [ACCEPTANCE] pass/fail line. Criteria pin their tolerances and
// thresholds in code; run this binary directly for the summary lines, or
// through ctest where every criterion is its own test case.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ngram_fixtures.hpp"
#include "retrieval_oracle.hpp"
#include "wikigen/dataset_builder.hpp"
#include "wikigen/harness.hpp"
#include "wikigen/metrics_citation.hpp"
#include "wikigen/metrics_judge.hpp"
#include "wikigen/metrics_ngram.hpp"

namespace wikigen {
namespace {

class Criterion {
public:
    Criterion(int number, std::string name) : number_(number), name_(std::move(name)) {}
    ~Criterion() {
        const char* outcome = "PASS";
        if (::testing::Test::HasFatalFailure() || ::testing::Test::HasNonfatalFailure())
            outcome = "FAIL";
        else if (::testing::Test::IsSkipped())
            outcome = "SKIP";
        std::printf("[ACCEPTANCE] C%d %s: %s\n", number_, name_.c_str(), outcome);
        std::fflush(stdout);
    }

private:
    int number_;
    std::string name_;
};

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("wikigen_accept_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string words(const std::string& stem, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += stem + std::to_string(i);
    }
    return out;
}

DatasetEntry fixture_entry(const std::string& event, int doc_count = 3) {
    DatasetEntry entry;
    entry.event = event;
    entry.wikipage.id = slug(event);
    entry.wikipage.keyword = event;
    entry.wikipage.url = "https://wiki/" + slug(event);
    entry.wikipage.summary = "The " + event + " took place and drew wide coverage.";
    entry.wikipage.sections = {{"Background", "Planning for " + event + " began early."},
                               {"Outcome", "The " + event + " ended as reported."}};
    entry.wikipage.infobox = {{"Sport", "football"}, {"Duration", "April to July"}};
    for (int i = 1; i <= doc_count; ++i) {
        RelatedDocument doc;
        doc.doc_id = i;
        doc.title = "Report " + std::to_string(i);
        doc.url = "http://news/" + slug(event) + "/" + std::to_string(i);
        doc.content = event + " report number " + std::to_string(i) + " " + words("body", 40);
        doc.source = (i % 2 == 1) ? DocSource::Human : DocSource::Search;
        entry.related_docs.push_back(std::move(doc));
    }
    return entry;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& item : fs::recursive_directory_iterator(root)) {
        if (!item.is_regular_file()) continue;
        std::ifstream in(item.path(), std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        files[fs::relative(item.path(), root).string()] = content.str();
    }
    return files;
}

// ---------------------------------------------------------------------------
// C1: BM25 and TF-IDF top-5 match an exhaustive brute-force scorer on >= 5
// corpora of 10-200 chunks, including tie-break order; scores within 1e-9;
// runtime < 5 s.
// ---------------------------------------------------------------------------
TEST(Acceptance, C1_RetrievalOracleEquivalence) {
    Criterion criterion(1, "retrieval oracle equivalence");
    auto start = std::chrono::steady_clock::now();

    const int sizes[] = {10, 40, 80, 120, 160, 200};
    const char* queries[] = {"tok1 tok2 tok3", "tok0", "tok7 tok7 tok9",
                             "tok4 missingterm", "tok2 tok5 tok8", "tok3 tok6"};
    int corpus_seed = 100;
    for (size_t c = 0; c < 6; ++c) {
        std::mt19937 rng(corpus_seed + static_cast<int>(c));
        auto chunks = testing::oracle_random_corpus(rng, sizes[c]);
        auto index = InvertedIndex::build(chunks);
        auto query = RetrievalQuery::from_text(queries[c]);
        RetrieveOptions options;
        options.top_l = 5;

        std::vector<double> bm25_scores, tfidf_scores;
        for (size_t i = 0; i < chunks.size(); ++i) {
            bm25_scores.push_back(testing::oracle_bm25(chunks, query.tokens, i));
            tfidf_scores.push_back(testing::oracle_tfidf(chunks, query.tokens, i));
        }

        auto bm25_result = retrieve(Strategy::Bm25, query, chunks, &index, options);
        auto bm25_expected = testing::oracle_top_l(chunks, bm25_scores, 5);
        ASSERT_EQ(bm25_result.items.size(), bm25_expected.size()) << "corpus " << c;
        for (size_t i = 0; i < bm25_expected.size(); ++i) {
            EXPECT_EQ(bm25_result.items[i].chunk.chunk_id, bm25_expected[i])
                << "corpus " << c << " rank " << i;
            EXPECT_NEAR(bm25_result.items[i].score,
                        bm25_scores[static_cast<size_t>(bm25_result.items[i].chunk.chunk_id)],
                        1e-9);
        }

        auto tfidf_result = retrieve(Strategy::TfIdf, query, chunks, &index, options);
        auto tfidf_expected = testing::oracle_top_l(chunks, tfidf_scores, 5);
        ASSERT_EQ(tfidf_result.items.size(), tfidf_expected.size()) << "corpus " << c;
        for (size_t i = 0; i < tfidf_expected.size(); ++i) {
            EXPECT_EQ(tfidf_result.items[i].chunk.chunk_id, tfidf_expected[i])
                << "corpus " << c << " rank " << i;
            EXPECT_NEAR(tfidf_result.items[i].score,
                        tfidf_scores[static_cast<size_t>(tfidf_result.items[i].chunk.chunk_id)],
                        1e-9);
        }
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    EXPECT_LT(elapsed, 5000) << "retrieval oracle comparison took " << elapsed << " ms";
}

// ---------------------------------------------------------------------------
// C2: 100 randomized documents (0-5000 words): every chunk <= 256 words,
// all non-final chunks exactly 256, lossless reconstruction.
// ---------------------------------------------------------------------------
TEST(Acceptance, C2_ChunkingExactness) {
    Criterion criterion(2, "chunking exactness");
    std::mt19937 rng(321);
    std::uniform_int_distribution<int> length(0, 5000);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        RelatedDocument doc;
        doc.doc_id = trial + 1;
        doc.content = words("w", length(rng));
        auto chunks = chunk_document(doc);
        std::vector<std::string> rebuilt;
        for (size_t i = 0; i < chunks.size(); ++i) {
            if (chunks[i].word_count > 256) ++violations;
            if (i + 1 < chunks.size() && chunks[i].word_count != 256) ++violations;
            if (chunks[i].word_count != static_cast<int>(chunks[i].words.size())) ++violations;
            rebuilt.insert(rebuilt.end(), chunks[i].words.begin(), chunks[i].words.end());
        }
        if (rebuilt != split_words(doc.content)) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

// ---------------------------------------------------------------------------
// C3: BLEU-1/4, ROUGE-L, METEOR agree with independently computed fixture
// values within 1e-6; identity pairs score 100 (METEOR: its closed form).
// ---------------------------------------------------------------------------
TEST(Acceptance, C3_NgramMetricOracle) {
    Criterion criterion(3, "n-gram metric oracle");
    static_assert(std::size(testing::kNgramFixtures) >= 10);
    for (const auto& fixture : testing::kNgramFixtures) {
        auto cand = split_words(fixture.cand);
        auto ref = split_words(fixture.ref);
        EXPECT_NEAR(bleu_n(cand, ref, 1).value, fixture.b1, 1e-6) << fixture.name;
        EXPECT_NEAR(bleu_n(cand, ref, 4).value, fixture.b4, 1e-6) << fixture.name;
        EXPECT_NEAR(rouge_l(cand, ref).value, fixture.rouge_l, 1e-6) << fixture.name;
        EXPECT_NEAR(meteor(cand, ref).value, fixture.meteor, 1e-6) << fixture.name;
    }
    auto identity = split_words("eight clubs played ten games each across four host stadiums");
    EXPECT_DOUBLE_EQ(bleu_n(identity, identity, 1).value, 100.0);
    EXPECT_DOUBLE_EQ(bleu_n(identity, identity, 4).value, 100.0);
    EXPECT_DOUBLE_EQ(rouge_l(identity, identity).value, 100.0);
    double m = static_cast<double>(identity.size());
    EXPECT_NEAR(meteor(identity, identity).value, 100.0 * (1.0 - 0.5 / (m * m * m)), 1e-9);
}

// ---------------------------------------------------------------------------
// C4: citation-metric analytic fixtures hold exactly, and a strictly more
// permissive NLI never lowers any faithfulness metric (100 random trials).
// ---------------------------------------------------------------------------
TEST(Acceptance, C4_CitationMetrics) {
    Criterion criterion(4, "citation metrics");

    auto sentence = [](const std::string& text, std::vector<int> citations) {
        Sentence s;
        s.text = text;
        s.citations = std::move(citations);
        s.word_count = word_count(text);
        return s;
    };
    auto article_of = [](std::vector<Sentence> sentences) {
        Article article;
        article.keyword = "kw";
        Section section;
        section.title = "Body";
        section.sentences = std::move(sentences);
        for (const auto& s : section.sentences) article.total_words += s.word_count;
        article.sections.push_back(std::move(section));
        return article;
    };
    auto rr_run = [](std::vector<std::string> docs) {
        GenerationRun run;
        run.method = Method::RR;
        run.article_offered_docs = std::move(docs);
        return run;
    };

    // Two 10-word sentences with recalls [1,0] -> Citation Rate 50.00.
    {
        std::string ten = "one two three four five six seven eight nine ten";
        auto article = article_of({sentence(ten, {1}), sentence(ten, {2})});
        auto run = rr_run({"good doc", "bad doc"});
        MockNliClient nli([](const std::string& premise, const std::string&) {
            return premise == "good doc" ? 1.0 : 0.0;
        });
        EntailmentJudge judge(nli);
        auto report = evaluate_faithfulness(article, run, judge);
        EXPECT_DOUBLE_EQ(report.citation_rate, 50.0);
    }

    // Three citations with one supported -> precision 33.33.
    {
        auto article = article_of({sentence("A claim.", {1, 2, 3})});
        auto run = rr_run({"d1", "d2", "d3"});
        MockNliClient nli([](const std::string& premise, const std::string&) {
            return premise == "d2" ? 1.0 : 0.0;
        });
        EntailmentJudge judge(nli);
        auto report = evaluate_faithfulness(article, run, judge);
        ASSERT_TRUE(report.citation_precision.has_value());
        EXPECT_NEAR(*report.citation_precision, 100.0 / 3.0, 1e-9);
        char rendered[16];
        std::snprintf(rendered, sizeof(rendered), "%.2f", *report.citation_precision);
        EXPECT_STREQ(rendered, "33.33");
    }

    // Saturation -> 100/100/100.
    {
        auto article =
            article_of({sentence("First claim.", {1}), sentence("Second claim.", {1, 2})});
        auto run = rr_run({"d1", "d2"});
        MockNliClient nli([](const std::string&, const std::string&) { return 1.0; });
        EntailmentJudge judge(nli);
        auto report = evaluate_faithfulness(article, run, judge);
        EXPECT_DOUBLE_EQ(report.citation_rate, 100.0);
        EXPECT_DOUBLE_EQ(report.citation_recall, 100.0);
        EXPECT_DOUBLE_EQ(*report.citation_precision, 100.0);
    }

    // Monotonicity across 100 random verdict-flip trials.
    std::mt19937 rng(55);
    std::uniform_int_distribution<int> coin(0, 1), n_citations(0, 3), doc_pick(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Sentence> sentences;
        for (int s = 0; s < 6; ++s) {
            std::set<int> cites;
            int n = n_citations(rng);
            for (int c = 0; c < n; ++c) cites.insert(doc_pick(rng));
            sentences.push_back(sentence("Sentence " + std::to_string(s) + " body words.",
                                         std::vector<int>(cites.begin(), cites.end())));
        }
        auto article = article_of(sentences);
        auto run = rr_run({"d1", "d2", "d3", "d4"});

        std::map<std::pair<std::string, std::string>, bool> verdicts, permissive;
        for (int d = 1; d <= 4; ++d) {
            for (const auto& s : sentences) {
                bool v = coin(rng) == 1;
                auto key = std::make_pair("d" + std::to_string(d), s.text);
                verdicts[key] = v;
                permissive[key] = v || coin(rng) == 1;
            }
        }
        MockNliClient base_nli([&](const std::string& p, const std::string& h) {
            return verdicts[{p, h}] ? 1.0 : 0.0;
        });
        MockNliClient perm_nli([&](const std::string& p, const std::string& h) {
            return permissive[{p, h}] ? 1.0 : 0.0;
        });
        EntailmentJudge base_judge(base_nli), perm_judge(perm_nli);
        auto base = evaluate_faithfulness(article, run, base_judge);
        auto perm = evaluate_faithfulness(article, run, perm_judge);
        EXPECT_GE(perm.citation_recall, base.citation_recall) << "trial " << trial;
        EXPECT_GE(perm.citation_rate, base.citation_rate) << "trial " << trial;
        if (base.citation_precision.has_value()) {
            ASSERT_TRUE(perm.citation_precision.has_value());
            EXPECT_GE(*perm.citation_precision, *base.citation_precision) << "trial " << trial;
        }
    }
}

// ---------------------------------------------------------------------------
// C5: RPRR structural contract on 20 fixtures: section headers equal
// outline titles, every prompt within the 2048-token estimate cap,
// citations resolve per section, and injected out-of-range indices are all
// flagged by validate-citations.
// ---------------------------------------------------------------------------
TEST(Acceptance, C5_RprrStructuralContract) {
    Criterion criterion(5, "RPRR structural contract");

    const char* title_pool[] = {"Introduction", "Background", "Teams",   "Venue",
                                "Schedule",     "Results",    "Reaction", "Aftermath"};
    for (int fixture = 0; fixture < 20; ++fixture) {
        int title_count = 1 + (fixture % 6);
        std::string outline;
        for (int t = 0; t < title_count; ++t)
            outline += std::to_string(t + 1) + ". " + title_pool[(fixture + t) % 8] + "\n";

        auto entry = fixture_entry("Event " + std::to_string(fixture), 4);
        RetrieveOptions options;
        options.top_l = 3;
        auto context = RetrievalContext::for_entry(entry, Strategy::Bm25, options);
        MockChatClient chat;
        chat.add_rule("write an outline", outline);

        GenerationParams params;
        params.model_id = "mock-model";
        params.budget.max_input_tokens = 2048;
        auto run = generate_rprr(entry, context, chat, params);
        ASSERT_FALSE(run.failed) << run.failure;

        auto article = parse_article(run.final_text, entry.event);
        EXPECT_EQ(article.sections.size(), run.outline_titles.size()) << "fixture " << fixture;

        for (const auto& stage : run.stages)
            EXPECT_LE(params.budget.estimate(stage.prompt), 2048)
                << "fixture " << fixture << " stage " << stage.stage;

        for (size_t s = 0; s < article.sections.size(); ++s) {
            const auto* offered =
                offered_docs_for_section(run, s, article.sections[s].title);
            ASSERT_NE(offered, nullptr);
            EXPECT_EQ(offered, &run.sections[s].offered_docs)
                << "section " << s << " must resolve against its own documents";
            for (const auto& sent : article.sections[s].sentences)
                for (int k : sent.citations) {
                    EXPECT_GE(k, 1);
                    EXPECT_LE(k, static_cast<int>(offered->size()))
                        << "fixture " << fixture << " section " << s;
                }
        }
    }

    // Injected out-of-range citations are all flagged.
    TempDir dir;
    fs::path dataset = dir.path() / "dataset";
    save_entry(dataset / "event-x", fixture_entry("Event X", 3));
    RunConfig config;
    config.dataset = dataset.string();
    config.cache_dir = (dir.path() / "cache").string();
    config.use_mocks = true;
    config.method = Method::RPRR;
    config.top_l = 3;
    auto clients = make_clients(config);
    clients.mock_chat->add_rule("write an outline", "1. Alpha\n2. Beta");
    clients.mock_chat->add_rule("and a section \"Alpha\"", "Claim one.[9] Claim two.[1]");
    clients.mock_chat->add_rule("and a section \"Beta\"", "Claim three.[7][8]");
    auto result = run_pipeline(config, clients, dir.path() / "runs");
    auto findings = validate_citations(result.run_dir);
    ASSERT_EQ(findings.size(), 3u);  // [9], [7], [8]
    std::multiset<int> flagged;
    for (const auto& finding : findings) flagged.insert(finding.citation);
    EXPECT_EQ(flagged, (std::multiset<int>{7, 8, 9}));
}

// ---------------------------------------------------------------------------
// C6: IB Score: scripted equivalence pattern [1,1,1,0,0] over a 5-entry
// infobox yields exactly 60.0; invariant under 20 order shuffles.
// ---------------------------------------------------------------------------
TEST(Acceptance, C6_IbScore) {
    Criterion criterion(6, "IB score");
    std::vector<InfoboxEntry> infobox = {{"k1", "v1"}, {"k2", "v2"}, {"k3", "v3"},
                                         {"k4", "v4"}, {"k5", "v5"}};
    MockChatClient qa;
    qa.add_rule("answer the question only according", "some answer");
    MockChatClient judge;
    judge.add_rule("What is the k1 of", "1");
    judge.add_rule("What is the k2 of", "1");
    judge.add_rule("What is the k3 of", "1");
    judge.add_rule("What is the k4 of", "0");
    judge.add_rule("What is the k5 of", "0");
    IbOptions options;
    options.qa.model_id = "mock-qa";
    options.judge.model_id = "mock-judge";

    auto baseline = ib_score(infobox, "article text", "Event", qa, judge, options);
    ASSERT_TRUE(baseline.score.has_value());
    EXPECT_DOUBLE_EQ(*baseline.score, 60.0);

    std::mt19937 rng(99);
    for (int shuffle = 0; shuffle < 20; ++shuffle) {
        auto permuted = infobox;
        std::shuffle(permuted.begin(), permuted.end(), rng);
        auto report = ib_score(permuted, "article text", "Event", qa, judge, options);
        EXPECT_DOUBLE_EQ(*report.score, 60.0) << "shuffle " << shuffle;
    }
}

// ---------------------------------------------------------------------------
// C7: two full end-to-end runs over a 3-event fixture dataset with mocks
// and a fixed seed produce byte-identical run directories and reports; the
// second run serves everything from the warm cache with zero endpoint
// calls. Runtime < 60 s.
// ---------------------------------------------------------------------------
TEST(Acceptance, C7_EndToEndDeterminism) {
    Criterion criterion(7, "end-to-end determinism");
    auto start = std::chrono::steady_clock::now();

    TempDir dir;
    fs::path dataset = dir.path() / "dataset";
    save_entry(dataset / "event-alpha", fixture_entry("Event Alpha"));
    save_entry(dataset / "event-bravo", fixture_entry("Event Bravo"));
    save_entry(dataset / "event-charlie", fixture_entry("Event Charlie"));

    RunConfig config;
    config.dataset = dataset.string();
    config.cache_dir = (dir.path() / "cache").string();
    config.use_mocks = true;
    config.method = Method::RPRR;
    config.retriever = Strategy::Bm25;
    config.top_l = 3;
    config.seed = 7;

    auto clients_a = make_clients(config);
    auto result_a = run_pipeline(config, clients_a, dir.path() / "runs_a");
    EXPECT_EQ(result_a.failed, 0);
    evaluate_run(result_a.run_dir, config, clients_a);
    EXPECT_GT(clients_a.endpoint_calls(), 0);

    auto clients_b = make_clients(config);
    auto result_b = run_pipeline(config, clients_b, dir.path() / "runs_b");
    EXPECT_EQ(result_b.failed, 0);
    evaluate_run(result_b.run_dir, config, clients_b);
    EXPECT_EQ(clients_b.endpoint_calls(), 0) << "warm cache must serve every request";

    EXPECT_EQ(read_tree(result_a.run_dir), read_tree(result_b.run_dir));

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    EXPECT_LT(elapsed, 60000) << "end-to-end determinism check took " << elapsed << " ms";
}

// ---------------------------------------------------------------------------
// C8: dataset filter boundary matrix (999/1000/3000/3001 words,
// 9/10/100/101 links, rate 0.40 vs 0.41, creation flag) decided exactly.
// ---------------------------------------------------------------------------
TEST(Acceptance, C8_DatasetFilterBoundaries) {
    Criterion criterion(8, "dataset filter boundaries");
    const int word_cases[] = {999, 1000, 3000, 3001};
    const int link_cases[] = {9, 10, 100, 101};
    const double rate_cases[] = {0.40, 0.41};
    const bool created_cases[] = {false, true};
    for (int words_in_page : word_cases) {
        for (int links : link_cases) {
            for (double rate : rate_cases) {
                for (bool created : created_cases) {
                    bool expected = words_in_page >= 1000 && words_in_page <= 3000 &&
                                    links >= 10 && links <= 100 && rate > 0.40 && created;
                    auto verdict = validate_entry(words_in_page, links, rate, created);
                    EXPECT_EQ(verdict.accepted, expected)
                        << words_in_page << " words, " << links << " links, rate " << rate
                        << ", created " << created;
                    EXPECT_EQ(verdict.reason.empty(), expected);
                }
            }
        }
    }
    // Spot checks for the stated boundary examples.
    EXPECT_EQ(validate_entry(999, 12, 0.5, true).reason, "word-count");
    EXPECT_EQ(validate_entry(1500, 12, 0.40, true).reason, "crawl-rate");
    EXPECT_TRUE(validate_entry(1639, 12, 0.5, true).accepted);
}

// ---------------------------------------------------------------------------
// C9: optional live smoke test (requires configured endpoints): on 3
// events, log IB score with retrieval off vs on. Logged, never asserted.
// ---------------------------------------------------------------------------
TEST(Acceptance, C9_LiveSmokeRetrievalLift) {
    Criterion criterion(9, "live smoke (optional)");
    if (env_or(kEnvChatUrl).empty()) {
        std::printf("[ACCEPTANCE] C9 note: %s not set; live smoke skipped\n", kEnvChatUrl);
        GTEST_SKIP() << "live endpoints not configured";
    }

    TempDir dir;
    fs::path dataset = dir.path() / "dataset";
    save_entry(dataset / "event-alpha", fixture_entry("Event Alpha"));
    save_entry(dataset / "event-bravo", fixture_entry("Event Bravo"));
    save_entry(dataset / "event-charlie", fixture_entry("Event Charlie"));

    RunConfig base;
    base.dataset = dataset.string();
    base.cache_dir = (dir.path() / "cache").string();
    apply_env_endpoints(base);
    base.method = Method::RR;
    base.retriever = Strategy::Bm25;

    EvaluateFlags flags;
    flags.skip_nli = base.nli_url.empty();

    auto run_with_top_l = [&](int top_l) -> std::optional<double> {
        auto config = base;
        config.top_l = top_l;
        auto clients = make_clients(config);
        auto result = run_pipeline(config, clients, dir.path() / "runs");
        if (result.failed > 0) return std::nullopt;
        auto report = evaluate_run(result.run_dir, config, clients, flags);
        return report.aggregate.ib;
    };

    auto without_retrieval = run_with_top_l(0);
    auto with_retrieval = run_with_top_l(5);
    std::printf("[ACCEPTANCE] C9 IB score without retrieval: %s\n",
                without_retrieval ? std::to_string(*without_retrieval).c_str() : "n/a");
    std::printf("[ACCEPTANCE] C9 IB score with retrieval:    %s\n",
                with_retrieval ? std::to_string(*with_retrieval).c_str() : "n/a");
    if (without_retrieval && with_retrieval) {
        std::printf("[ACCEPTANCE] C9 retrieval lift: %+.2f (directional, not asserted)\n",
                    *with_retrieval - *without_retrieval);
    }
}

}  // namespace
}  // namespace wikigen
