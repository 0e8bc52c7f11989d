#include "wikigen/dataset_builder.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "wikigen/mock_clients.hpp"

namespace wikigen {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("wikigen_builder_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string body_words(int n) {
    std::string out = "<html><body><p>";
    for (int i = 0; i < n; ++i) out += "word" + std::to_string(i) + " ";
    out += "</p></body></html>";
    return out;
}

/// A page whose full text lands inside the 1000-3000 word window, with
/// `links` reference URLs of which `crawlable` resolve to real text.
void script_candidate(MockWikiClient& wiki, MockUrlFetcher& fetcher, const std::string& title,
                      int links, int crawlable, const std::string& created = "2023-12-01") {
    WikiFetchResult fixture;
    fixture.page.id = slug(title);
    fixture.page.keyword = title;
    fixture.page.url = "https://wiki/" + slug(title);
    std::string section_text;
    for (int i = 0; i < 1200; ++i) section_text += "w" + std::to_string(i) + " ";
    fixture.page.summary = "Summary of " + title + ".";
    fixture.page.sections = {{"Overview", section_text}};
    fixture.page.infobox = {{"Type", "event"}};
    for (int i = 0; i < links; ++i) {
        std::string url = "http://ref/" + slug(title) + "/" + std::to_string(i);
        fixture.reference_urls.push_back(url);
        if (i < crawlable) fetcher.script_ok(url, body_words(120));
        // others stay unscripted -> 404
    }
    fixture.created_date = created;
    wiki.script(title, fixture);
}

BuilderConfig cutoff_config() {
    BuilderConfig config;
    config.cutoff_date = "2023-11-01";
    return config;
}

TEST(StripHtml, TagsEntitiesAndScripts) {
    std::string html =
        "<html><head><style>body{color:red}</style>"
        "<script>var x = 1;</script></head>"
        "<body><h1>Big   Title</h1><p>One &amp; two &lt;three&gt;.</p></body></html>";
    EXPECT_EQ(strip_html(html), "Big Title One & two <three>.");
}

TEST(BuildEntry, AcceptsCandidateWithHalfCrawlRate) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Big Event", 12, 6);
    search.script("Big Event", {{"News story", "http://news/1", "snippet"}});
    fetcher.script_ok("http://news/1", body_words(200));

    auto outcome = build_entry("Big Event", wiki, search, fetcher, cutoff_config());
    ASSERT_TRUE(outcome.accepted) << outcome.rejection_reason;
    EXPECT_EQ(outcome.links, 12);
    EXPECT_EQ(outcome.crawled_ok, 6);
    EXPECT_DOUBLE_EQ(outcome.crawl_success_rate, 0.5);
    ASSERT_TRUE(outcome.entry.has_value());
    EXPECT_EQ(outcome.entry->related_docs.size(), 7u);  // 6 human + 1 search

    int human = 0, searchn = 0;
    for (const auto& doc : outcome.entry->related_docs)
        (doc.source == DocSource::Human ? human : searchn) += 1;
    EXPECT_EQ(human, 6);
    EXPECT_EQ(searchn, 1);
}

TEST(BuildEntry, TooFewLinksRejected) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Small Event", 5, 5);
    auto outcome = build_entry("Small Event", wiki, search, fetcher, cutoff_config());
    EXPECT_FALSE(outcome.accepted);
    EXPECT_EQ(outcome.rejection_reason, "link-count");
    // No crawling happens for a pre-rejected page.
    EXPECT_EQ(fetcher.calls(), 0);
}

TEST(BuildEntry, LowCrawlRateRejected) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Dead Links Event", 10, 4);  // rate 0.4, not above
    auto outcome = build_entry("Dead Links Event", wiki, search, fetcher, cutoff_config());
    EXPECT_FALSE(outcome.accepted);
    EXPECT_EQ(outcome.rejection_reason, "crawl-rate");
}

TEST(BuildEntry, CreatedBeforeCutoffRejected) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Old Event", 12, 8, "2021-05-01");
    auto outcome = build_entry("Old Event", wiki, search, fetcher, cutoff_config());
    EXPECT_FALSE(outcome.accepted);
    EXPECT_EQ(outcome.rejection_reason, "creation-date");
}

TEST(BuildEntry, ShortExtractsDoNotCountAsCrawlable) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Thin Event", 10, 0);
    // All links resolve but carry trivial text.
    for (int i = 0; i < 10; ++i)
        fetcher.script_ok("http://ref/thin-event/" + std::to_string(i), body_words(10));
    auto outcome = build_entry("Thin Event", wiki, search, fetcher, cutoff_config());
    EXPECT_FALSE(outcome.accepted);
    EXPECT_EQ(outcome.rejection_reason, "crawl-rate");
    EXPECT_EQ(outcome.crawled_ok, 0);
}

TEST(BuildEntry, EmptySearchFlaggedHumanOnly) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Quiet Event", 12, 8);
    auto outcome = build_entry("Quiet Event", wiki, search, fetcher, cutoff_config());
    ASSERT_TRUE(outcome.accepted);
    EXPECT_TRUE(outcome.search_empty);
    for (const auto& doc : outcome.entry->related_docs)
        EXPECT_EQ(doc.source, DocSource::Human);
}

TEST(BuildEntry, MissingPageRejectedWithReason) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    auto outcome = build_entry("Ghost Event", wiki, search, fetcher, cutoff_config());
    EXPECT_FALSE(outcome.accepted);
    EXPECT_NE(outcome.rejection_reason.find("page-fetch-failed"), std::string::npos);
}

TEST(BuildEntry, AllowlistFilters) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Listed Event", 12, 8);
    auto config = cutoff_config();
    config.allowlist = std::set<std::string>{"Listed Event"};
    EXPECT_TRUE(build_entry("Listed Event", wiki, search, fetcher, config).accepted);
    auto rejected = build_entry("Unlisted Event", wiki, search, fetcher, config);
    EXPECT_FALSE(rejected.accepted);
    EXPECT_EQ(rejected.rejection_reason, "not-in-allowlist");
}

TEST(BuildEntry, ProducedEntryRoundTripsThroughCorpusIo) {
    TempDir dir;
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Round Trip Event", 12, 7);
    search.script("Round Trip Event", {{"Story", "http://news/a", "s"}});
    fetcher.script_ok("http://news/a", body_words(90));
    auto outcome = build_entry("Round Trip Event", wiki, search, fetcher, cutoff_config());
    ASSERT_TRUE(outcome.accepted);

    save_entry(dir.path() / "e1", *outcome.entry);
    auto loaded = load_dataset(dir.path());
    ASSERT_EQ(loaded.size(), 1u);
    EXPECT_EQ(loaded[0], *outcome.entry);
}

TEST(BuildEntry, CachedFetcherNeverRefetches) {
    TempDir dir;
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Cached Event", 12, 12);
    ResponseCache cache(dir.path() / "cache");
    CachingUrlFetcher cached(fetcher, cache);

    auto first = build_entry("Cached Event", wiki, search, cached, cutoff_config());
    int calls_after_first = fetcher.calls();
    auto second = build_entry("Cached Event", wiki, search, cached, cutoff_config());
    EXPECT_EQ(fetcher.calls(), calls_after_first);
    ASSERT_TRUE(first.accepted);
    ASSERT_TRUE(second.accepted);
    EXPECT_EQ(*first.entry, *second.entry);
}

TEST(BuildEntry, SourceTagsPartitionDocs) {
    MockWikiClient wiki;
    MockSearchClient search;
    MockUrlFetcher fetcher;
    script_candidate(wiki, fetcher, "Tagged Event", 12, 8);
    search.script("Tagged Event", {{"S1", "http://s/1", ""}, {"S2", "http://s/2", ""}});
    fetcher.script_ok("http://s/1", body_words(100));
    fetcher.script_ok("http://s/2", body_words(100));
    auto outcome = build_entry("Tagged Event", wiki, search, fetcher, cutoff_config());
    ASSERT_TRUE(outcome.accepted);
    std::set<int> ids;
    for (const auto& doc : outcome.entry->related_docs) {
        EXPECT_TRUE(ids.insert(doc.doc_id).second);  // ids unique
        EXPECT_TRUE(doc.source == DocSource::Human || doc.source == DocSource::Search);
    }
}

}  // namespace
}  // namespace wikigen
