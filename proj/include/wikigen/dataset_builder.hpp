#pragma once

// Benchmark entry construction: fetch a candidate page, apply the
// word-count/link/crawl-rate/creation-date filters, crawl the page's
// reference links (human-sourced documents), and gather search-engine
// documents for the same title.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wikigen/clients.hpp"
#include "wikigen/corpus.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

/// Tag-stripping HTML-to-text with basic entity decoding; script/style
/// bodies are dropped and whitespace collapsed. Extraction quality is a
/// non-goal; the step is pluggable via BuilderConfig.
inline std::string strip_html(const std::string& html) {
    std::string text;
    text.reserve(html.size());
    size_t i = 0;
    auto matches_ci = [&](size_t pos, std::string_view needle) {
        if (pos + needle.size() > html.size()) return false;
        for (size_t k = 0; k < needle.size(); ++k)
            if (to_lower(html[pos + k]) != needle[k]) return false;
        return true;
    };
    while (i < html.size()) {
        if (html[i] == '<') {
            if (matches_ci(i, "<script")) {
                while (i < html.size() && !matches_ci(i, "</script")) ++i;
            } else if (matches_ci(i, "<style")) {
                while (i < html.size() && !matches_ci(i, "</style")) ++i;
            }
            while (i < html.size() && html[i] != '>') ++i;
            if (i < html.size()) ++i;
            text.push_back(' ');
            continue;
        }
        if (html[i] == '&') {
            static const std::pair<std::string_view, char> kEntities[] = {
                {"&amp;", '&'}, {"&lt;", '<'},   {"&gt;", '>'},
                {"&quot;", '"'}, {"&#39;", '\''}, {"&apos;", '\''}};
            bool matched = false;
            for (const auto& [entity, replacement] : kEntities) {
                if (matches_ci(i, entity)) {
                    text.push_back(replacement);
                    i += entity.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (matches_ci(i, "&nbsp;")) {
                text.push_back(' ');
                i += 6;
                continue;
            }
        }
        text.push_back(html[i]);
        ++i;
    }
    // Collapse whitespace.
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (is_space(c)) {
            pending_space = true;
        } else {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

struct BuilderConfig {
    std::string cutoff_date;      // ISO yyyy-mm-dd; pages created after it pass
    int min_extract_words = 50;   // "crawlable" = HTTP 200 with this much text
    int max_search_results = 10;
    std::optional<std::set<std::string>> allowlist;  // event-type title allowlist
    std::function<std::string(const std::string&)> html_to_text = strip_html;
};

struct BuildOutcome {
    bool accepted = false;
    std::string rejection_reason;
    std::optional<DatasetEntry> entry;
    int page_words = 0;
    int links = 0;
    int crawled_ok = 0;
    double crawl_success_rate = 0.0;
    bool created_after_cutoff = false;
    bool search_empty = false;  // flagged: entry built from human docs only
};

/// Builds one benchmark entry. Per-link fetch failures are tolerated and
/// count against the crawl success rate; a page fetch failure rejects the
/// title outright.
inline BuildOutcome build_entry(const std::string& title, WikiClient& wiki, SearchClient& search,
                                UrlFetcher& fetcher, const BuilderConfig& config) {
    BuildOutcome outcome;
    if (config.allowlist && !config.allowlist->count(title)) {
        outcome.rejection_reason = "not-in-allowlist";
        return outcome;
    }

    WikiFetchResult fetched;
    try {
        fetched = fetch_wikipage(wiki, title);
    } catch (const Error& e) {
        outcome.rejection_reason = std::string("page-fetch-failed: ") + e.what();
        return outcome;
    }

    outcome.page_words = word_count(fetched.page.full_text());
    outcome.links = static_cast<int>(fetched.reference_urls.size());
    outcome.created_after_cutoff =
        config.cutoff_date.empty() ||
        (!fetched.created_date.empty() && fetched.created_date > config.cutoff_date);

    // Word-count and link-count rules are decidable before any crawling.
    auto pre = validate_entry(outcome.page_words, outcome.links, 1.0, true);
    if (!pre.accepted) {
        outcome.rejection_reason = pre.reason;
        return outcome;
    }

    auto extract = [&](const std::string& url) -> std::optional<std::string> {
        FetchResult result = fetcher.get(url);
        if (result.status != 200) return std::nullopt;
        std::string text = config.html_to_text(result.body);
        if (word_count(text) < config.min_extract_words) return std::nullopt;
        return text;
    };

    std::vector<std::pair<std::string, std::string>> human_docs;  // url -> text
    for (const auto& url : fetched.reference_urls) {
        if (auto text = extract(url)) human_docs.emplace_back(url, std::move(*text));
    }
    outcome.crawled_ok = static_cast<int>(human_docs.size());
    outcome.crawl_success_rate =
        outcome.links > 0
            ? static_cast<double>(outcome.crawled_ok) / static_cast<double>(outcome.links)
            : 0.0;

    auto verdict = validate_entry(outcome.page_words, outcome.links, outcome.crawl_success_rate,
                                  outcome.created_after_cutoff);
    if (!verdict.accepted) {
        outcome.rejection_reason = verdict.reason;
        return outcome;
    }

    DatasetEntry entry;
    entry.wikipage = fetched.page;
    entry.event = entry.wikipage.keyword;
    int next_id = 1;
    for (auto& [url, text] : human_docs) {
        RelatedDocument doc;
        doc.doc_id = next_id++;
        doc.title = url;
        doc.url = url;
        doc.content = std::move(text);
        doc.source = DocSource::Human;
        entry.related_docs.push_back(std::move(doc));
    }

    auto results = search_web(search, title, config.max_search_results);
    outcome.search_empty = results.empty();
    for (const auto& result : results) {
        if (auto text = extract(result.url)) {
            RelatedDocument doc;
            doc.doc_id = next_id++;
            doc.title = result.title.empty() ? result.url : result.title;
            doc.url = result.url;
            doc.content = std::move(*text);
            doc.source = DocSource::Search;
            entry.related_docs.push_back(std::move(doc));
        }
    }

    validate_entry_record(entry, "built entry '" + title + "'");
    outcome.entry = std::move(entry);
    outcome.accepted = true;
    return outcome;
}

}  // namespace wikigen
