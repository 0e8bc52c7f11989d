#pragma once

// Deterministic mock endpoints. Every client is a pure function of
// (request, scripted state) so full pipeline runs are reproducible offline;
// call counters let tests assert that a warm cache makes zero calls.

#include <atomic>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "wikigen/clients.hpp"
#include "wikigen/prompts.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

namespace detail {

/// Extracts the text following `label` up to the next known label or end.
inline std::string extract_labeled(const std::string& prompt, std::string_view label) {
    auto pos = prompt.rfind(label);
    if (pos == std::string::npos) return "";
    pos += label.size();
    static const std::vector<std::string_view> kLabels = {
        prompt_labels::kKeyword,  prompt_labels::kText,    prompt_labels::kOutlines,
        prompt_labels::kSubtitle, prompt_labels::kContent, prompt_labels::kQuestion,
        prompt_labels::kPassage,  prompt_labels::kGolden,  prompt_labels::kCandidate};
    size_t end = prompt.size();
    for (auto other : kLabels) {
        auto next = prompt.find(other, pos);
        if (next != std::string::npos && next < end) end = next;
    }
    return trim(prompt.substr(pos, end - pos));
}

inline std::string extract_quoted_after(const std::string& prompt, std::string_view marker) {
    auto pos = prompt.find(marker);
    if (pos == std::string::npos) return "";
    auto open = prompt.find('"', pos + marker.size());
    if (open == std::string::npos) return "";
    auto close = prompt.find('"', open + 1);
    if (close == std::string::npos) return "";
    return prompt.substr(open + 1, close - open - 1);
}

/// Number of "Document k:" lines offered in a prompt.
inline int count_offered_docs(const std::string& prompt) {
    int count = 0;
    size_t pos = 0;
    while ((pos = prompt.find("Document ", pos)) != std::string::npos) {
        bool line_start = pos == 0 || prompt[pos - 1] == '\n';
        size_t digits = pos + 9;
        size_t end = digits;
        while (end < prompt.size() && std::isdigit(static_cast<unsigned char>(prompt[end]))) ++end;
        if (line_start && end > digits && end < prompt.size() && prompt[end] == ':') ++count;
        pos += 9;
    }
    return count;
}

inline std::string normalized_join(const std::string& text) {
    std::string out;
    for (const auto& token : normalize_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

inline bool contains_normalized(const std::string& haystack, const std::string& needle) {
    std::string h = " " + normalized_join(haystack) + " ";
    std::string n = " " + normalized_join(needle) + " ";
    if (trim(n).empty()) return false;
    return h.find(n) != std::string::npos;
}

}  // namespace detail

/// Scripted chat endpoint. Explicit (substring pattern -> reply) rules win;
/// otherwise a deterministic default reply is derived from the prompt kind
/// (outline, section, article, or one of the evaluation prompts). An
/// optional context cap makes oversized prompts fail like a provider would.
class MockChatClient : public ChatClient {
public:
    void add_rule(std::string pattern, std::string reply) {
        rules_.push_back({std::move(pattern), std::move(reply)});
    }

    void set_context_cap(long max_tokens) { max_context_tokens_ = max_tokens; }

    int calls() const { return calls_.load(); }

    std::string complete(const ChatRequest& request) override {
        request.validate();
        calls_.fetch_add(1);
        if (max_context_tokens_ && token_estimate_text(request.prompt) > *max_context_tokens_)
            throw EndpointError("mock provider: prompt of ~" +
                                std::to_string(token_estimate_text(request.prompt)) +
                                " tokens exceeds the " + std::to_string(*max_context_tokens_) +
                                "-token context window");
        for (const auto& rule : rules_) {
            if (request.prompt.find(rule.pattern) != std::string::npos) return rule.reply;
        }
        return default_reply(request.prompt);
    }

private:
    struct Rule {
        std::string pattern;
        std::string reply;
    };

    static std::string default_reply(const std::string& prompt) {
        // Evaluation prompts.
        if (prompt.find("Only give three scores in this form") != std::string::npos)
            return "Fluency:4,Informativeness:3 Faithfulness:2";
        if (prompt.find("sufficiently elaborates on the subtitle") != std::string::npos)
            return "3";
        if (prompt.find("evaluate the quality of the outlines") != std::string::npos) return "4";
        if (prompt.find("answer the question only according to the information") !=
            std::string::npos) {
            std::string passage = detail::extract_labeled(prompt, prompt_labels::kPassage);
            return passage.empty() ? "no information" : passage;
        }
        if (prompt.find("candidate answer has the same meaning") != std::string::npos) {
            std::string golden = detail::extract_labeled(prompt, prompt_labels::kGolden);
            std::string candidate = detail::extract_labeled(prompt, prompt_labels::kCandidate);
            return detail::contains_normalized(candidate, golden) ? "1" : "0";
        }

        // Generation prompts.
        std::string keyword = detail::extract_quoted_after(prompt, "I have a topic ");
        int docs = detail::count_offered_docs(prompt);
        auto cite = [&](int k) {
            return (k >= 1 && docs >= k) ? "[" + std::to_string(k) + "]" : std::string();
        };
        if (prompt.find("write an outline for a Wikipedia article") != std::string::npos)
            return "1. Introduction\n2. Background\n3. Aftermath";
        if (prompt.find("and a section ") != std::string::npos) {
            std::string section = detail::extract_quoted_after(prompt, "and a section ");
            return "The " + section + " of " + keyword + " drew wide attention." + cite(1) +
                   " Reports confirmed further details afterwards." + cite(std::min(docs, 2));
        }
        std::string article = "==Introduction==\n" + keyword +
                              " was an event covered by the available reports." + cite(1) +
                              "\n==Details==\nCoverage described the schedule and the venue." +
                              cite(std::min(docs, 2)) + " Follow-up reports appeared later." +
                              cite(1);
        return article;
    }

    std::vector<Rule> rules_;
    std::optional<long> max_context_tokens_;
    std::atomic<int> calls_{0};
};

/// Containment-rule NLI by default (fraction of hypothesis tokens present
/// in the premise); a scripted scoring function overrides it.
class MockNliClient : public NliClient {
public:
    using ScoreFn = std::function<double(const std::string&, const std::string&)>;

    MockNliClient() = default;
    explicit MockNliClient(ScoreFn fn) : fn_(std::move(fn)) {}

    void set_score_fn(ScoreFn fn) { fn_ = std::move(fn); }

    int calls() const { return calls_.load(); }

    double score(const std::string& premise, const std::string& hypothesis) override {
        calls_.fetch_add(1);
        if (fn_) return fn_(premise, hypothesis);
        auto hyp_tokens = normalize_tokens(hypothesis);
        if (hyp_tokens.empty()) return 0.0;
        std::unordered_set<std::string> premise_tokens;
        for (auto& token : normalize_tokens(premise)) premise_tokens.insert(std::move(token));
        std::unordered_set<std::string> distinct(hyp_tokens.begin(), hyp_tokens.end());
        int hits = 0;
        for (const auto& token : distinct)
            if (premise_tokens.count(token)) ++hits;
        return static_cast<double>(hits) / static_cast<double>(distinct.size());
    }

private:
    ScoreFn fn_;
    std::atomic<int> calls_{0};
};

/// Deterministic pseudo-embeddings derived from the text hash.
class MockEmbeddingClient : public EmbeddingClient {
public:
    explicit MockEmbeddingClient(int dimensions = 8) : dimensions_(dimensions) {}

    int calls() const { return calls_.load(); }

    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts) override {
        calls_.fetch_add(1);
        std::vector<std::vector<double>> out;
        out.reserve(texts.size());
        for (const auto& text : texts) {
            std::vector<double> vec(static_cast<size_t>(dimensions_));
            uint64_t h = fnv1a64(model + "\x1f" + text);
            for (int d = 0; d < dimensions_; ++d) {
                h = splitmix_step(h);
                vec[static_cast<size_t>(d)] = static_cast<double>(h >> 11) * 0x1.0p-53;
            }
            out.push_back(std::move(vec));
        }
        return out;
    }

private:
    static uint64_t splitmix_step(uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    int dimensions_;
    std::atomic<int> calls_{0};
};

class MockSearchClient : public SearchClient {
public:
    void script(const std::string& query, std::vector<SearchResult> results) {
        scripted_[query] = std::move(results);
    }

    int calls() const { return calls_.load(); }

    std::vector<SearchResult> search(const std::string& query, int /*max_results*/) override {
        calls_.fetch_add(1);
        auto it = scripted_.find(query);
        if (it == scripted_.end()) return {};
        return it->second;
    }

private:
    std::map<std::string, std::vector<SearchResult>> scripted_;
    std::atomic<int> calls_{0};
};

class MockWikiClient : public WikiClient {
public:
    void script(const std::string& title, WikiFetchResult result) {
        scripted_[title] = std::move(result);
    }

    int calls() const { return calls_.load(); }

    WikiFetchResult fetch(const std::string& title) override {
        calls_.fetch_add(1);
        auto it = scripted_.find(title);
        if (it == scripted_.end()) throw NotFoundError("no wiki page titled '" + title + "'");
        return it->second;
    }

private:
    std::map<std::string, WikiFetchResult> scripted_;
    std::atomic<int> calls_{0};
};

class MockUrlFetcher : public UrlFetcher {
public:
    void script(const std::string& url, FetchResult result) { scripted_[url] = std::move(result); }

    void script_ok(const std::string& url, const std::string& body) {
        scripted_[url] = {200, body};
    }

    int calls() const { return calls_.load(); }

    FetchResult get(const std::string& url) override {
        calls_.fetch_add(1);
        auto it = scripted_.find(url);
        if (it == scripted_.end()) return {404, ""};
        return it->second;
    }

private:
    std::map<std::string, FetchResult> scripted_;
    std::atomic<int> calls_{0};
};

}  // namespace wikigen
