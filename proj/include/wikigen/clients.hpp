#pragma once

// Endpoint abstractions for chat generation, embeddings, NLI entailment,
// web search, wiki fetch, and raw URL fetch. Every remote capability sits
// behind a small interface with an HTTP implementation here and a
// deterministic mock in mock_clients.hpp, plus a persistent response cache
// so warm reruns make zero network calls.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "wikigen/corpus.hpp"
#include "wikigen/error.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

// ---------------------------------------------------------------------------
// Request/verdict types
// ---------------------------------------------------------------------------

struct ChatRequest {
    std::string model_id;
    std::string prompt;
    int max_output_tokens = 1024;
    double temperature = 0.0;
    std::vector<std::string> stop;

    void validate() const {
        if (prompt.empty()) throw ValidationError("chat request prompt must be non-empty");
        if (temperature < 0.0) throw ValidationError("chat temperature must be >= 0");
    }
};

struct EntailmentVerdict {
    std::string premise_id;
    bool supported = false;
    std::optional<double> raw_score;  // in [0,1] when the endpoint scores
};

struct SearchResult {
    std::string title;
    std::string url;
    std::string snippet;

    bool operator==(const SearchResult&) const = default;
};

/// Everything a wiki endpoint knows about one page: the structured page,
/// its reference-section links, and the creation date (ISO yyyy-mm-dd).
struct WikiFetchResult {
    WikiPage page;
    std::vector<std::string> reference_urls;
    std::string created_date;
};

struct FetchResult {
    int status = 0;  // 0 = transport failure
    std::string body;
};

// ---------------------------------------------------------------------------
// Interfaces
// ---------------------------------------------------------------------------

class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
};

class EmbeddingClient {
public:
    virtual ~EmbeddingClient() = default;
    virtual std::vector<std::vector<double>> embed(const std::string& model,
                                                   const std::vector<std::string>& texts) = 0;
};

/// Scores whether `premise` entails `hypothesis`, in [0,1].
class NliClient {
public:
    virtual ~NliClient() = default;
    virtual double score(const std::string& premise, const std::string& hypothesis) = 0;
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::vector<SearchResult> search(const std::string& query, int max_results) = 0;
};

class WikiClient {
public:
    virtual ~WikiClient() = default;
    virtual WikiFetchResult fetch(const std::string& title) = 0;
};

class UrlFetcher {
public:
    virtual ~UrlFetcher() = default;
    virtual FetchResult get(const std::string& url) = 0;
};

/// Thresholded entailment on top of an NLI scorer. Both texts must be
/// non-empty; endpoint failures propagate rather than defaulting to
/// "unsupported".
class EntailmentJudge {
public:
    explicit EntailmentJudge(NliClient& client, double threshold = 0.5)
        : client_(client), threshold_(threshold) {}

    EntailmentVerdict judge(const std::string& premise, const std::string& hypothesis,
                            std::string premise_id = "") const {
        if (premise.empty()) throw ValidationError("entailment premise must be non-empty");
        if (hypothesis.empty()) throw ValidationError("entailment hypothesis must be non-empty");
        EntailmentVerdict verdict;
        verdict.premise_id = std::move(premise_id);
        double score = client_.score(premise, hypothesis);
        verdict.raw_score = score;
        verdict.supported = score >= threshold_;
        return verdict;
    }

    double threshold() const { return threshold_; }

private:
    NliClient& client_;
    double threshold_;
};

/// Provider-order preserving web search with a hard result cap.
inline std::vector<SearchResult> search_web(SearchClient& client, const std::string& query,
                                            int max_results = 10) {
    auto results = client.search(query, max_results);
    if (static_cast<int>(results.size()) > max_results)
        results.resize(static_cast<size_t>(max_results));
    return results;
}

inline WikiFetchResult fetch_wikipage(WikiClient& client, const std::string& title) {
    if (title.empty()) throw ValidationError("wiki page title must be non-empty");
    return client.fetch(title);
}

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

struct CacheKey {
    std::string kind;      // endpoint kind: chat | embed | nli | fetch
    std::string model_id;  // empty where not applicable
    std::string request_hash;

    std::string str() const { return kind + ":" + model_id + ":" + request_hash; }
};

/// Canonically serialized request -> key. nlohmann::json dumps object keys
/// sorted, so equal requests map to equal keys.
inline CacheKey make_cache_key(const std::string& kind, const std::string& model_id,
                               const json& request) {
    CacheKey key;
    key.kind = kind;
    key.model_id = model_id;
    key.request_hash = content_hash(kind + "\x1f" + model_id + "\x1f" + request.dump());
    return key;
}

/// Append-only key/value store persisted as one JSONL file. Safe for
/// concurrent use within a process; across processes the discipline is
/// single writer.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        load();
    }

    std::optional<std::string> get(const CacheKey& key) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key.str());
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void put(const CacheKey& key, const std::string& value) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto [it, inserted] = entries_.emplace(key.str(), value);
        if (!inserted) return;  // content-addressed; first write wins
        order_.push_back(key.str());
        std::ofstream out(log_path(), std::ios::app);
        json record;
        record["k"] = key.str();
        record["v"] = value;
        out << record.dump() << "\n";
    }

    size_t size() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.size();
    }

    struct GcStats {
        size_t entries_before = 0;
        size_t entries_after = 0;
        uintmax_t bytes_before = 0;
        uintmax_t bytes_after = 0;
    };

    /// Compacts the log (drops duplicate appends); with `max_bytes` set,
    /// evicts oldest entries until the rewritten log fits.
    GcStats gc(std::optional<uintmax_t> max_bytes = std::nullopt) {
        std::lock_guard<std::mutex> lock(mutex_);
        GcStats stats;
        stats.entries_before = entries_.size();
        std::error_code ec;
        stats.bytes_before = std::filesystem::file_size(log_path(), ec);
        if (ec) stats.bytes_before = 0;

        std::vector<std::string> lines;
        uintmax_t total = 0;
        std::vector<std::pair<std::string, uintmax_t>> sized;  // key -> line size
        for (const auto& key : order_) {
            json record;
            record["k"] = key;
            record["v"] = entries_[key];
            std::string line = record.dump() + "\n";
            sized.emplace_back(key, static_cast<uintmax_t>(line.size()));
            total += line.size();
            lines.push_back(std::move(line));
        }
        size_t drop = 0;
        if (max_bytes) {
            while (drop < lines.size() && total > *max_bytes) {
                total -= sized[drop].second;
                ++drop;
            }
        }
        auto tmp = log_path();
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            for (size_t i = drop; i < lines.size(); ++i) out << lines[i];
        }
        std::filesystem::rename(tmp, log_path());
        for (size_t i = 0; i < drop; ++i) entries_.erase(sized[i].first);
        order_.erase(order_.begin(), order_.begin() + static_cast<long>(drop));

        stats.entries_after = entries_.size();
        stats.bytes_after = std::filesystem::file_size(log_path(), ec);
        if (ec) stats.bytes_after = 0;
        return stats;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path log_path() const { return dir_ / "cache.jsonl"; }

    void load() {
        std::ifstream in(log_path());
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            json record = json::parse(line, nullptr, false);
            if (record.is_discarded() || !record.contains("k") || !record.contains("v"))
                continue;  // tolerate a torn final append
            std::string key = record["k"].get<std::string>();
            if (entries_.emplace(key, record["v"].get<std::string>()).second)
                order_.push_back(key);
        }
    }

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> entries_;
    std::vector<std::string> order_;  // append order, for eviction
};

// ---------------------------------------------------------------------------
// HTTP plumbing
// ---------------------------------------------------------------------------

/// Bounds in-flight endpoint requests (config `max_concurrency`).
class ConcurrencyLimit {
public:
    explicit ConcurrencyLimit(int limit) : limit_(limit < 1 ? 1 : limit) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < limit_; });
        ++in_flight_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int limit_;
    int in_flight_ = 0;
};

class ConcurrencyGuard {
public:
    explicit ConcurrencyGuard(ConcurrencyLimit* limit) : limit_(limit) {
        if (limit_) limit_->acquire();
    }
    ~ConcurrencyGuard() {
        if (limit_) limit_->release();
    }
    ConcurrencyGuard(const ConcurrencyGuard&) = delete;
    ConcurrencyGuard& operator=(const ConcurrencyGuard&) = delete;

private:
    ConcurrencyLimit* limit_;
};

struct HttpEndpoint {
    std::string url;      // full URL including path
    std::string api_key;  // sent as a bearer token when non-empty
    int max_attempts = 3;
    int backoff_ms = 1000;  // doubles per retry
    int timeout_s = 120;
    std::shared_ptr<ConcurrencyLimit> limit;
};

namespace detail {

struct SplitUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

inline SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("endpoint URL missing scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

inline bool retryable_status(int status) {
    return status == 429 || status == 408 || status >= 500;
}

}  // namespace detail

/// POSTs a JSON body with retries (exponential backoff on transport
/// failures and 429/5xx) and parses the JSON reply. Errors carry the
/// endpoint URL and the provider message.
inline json http_post_json(const HttpEndpoint& endpoint, const json& body) {
    auto [base, path] = detail::split_url(endpoint.url);
    std::string last_error;
    for (int attempt = 1; attempt <= endpoint.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = endpoint.backoff_ms * (1 << (attempt - 2));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        ConcurrencyGuard guard(endpoint.limit.get());
        httplib::Client client(base);
        client.set_connection_timeout(endpoint.timeout_s, 0);
        client.set_read_timeout(endpoint.timeout_s, 0);
        httplib::Headers headers;
        if (!endpoint.api_key.empty())
            headers.emplace("Authorization", "Bearer " + endpoint.api_key);
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status >= 200 && res->status < 300) {
            json parsed = json::parse(res->body, nullptr, false);
            if (parsed.is_discarded())
                throw EndpointError(endpoint.url + ": response is not valid JSON");
            return parsed;
        }
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        if (!detail::retryable_status(res->status))
            throw EndpointError(endpoint.url + ": " + last_error);
    }
    throw EndpointError(endpoint.url + ": giving up after " +
                        std::to_string(endpoint.max_attempts) + " attempts; last error: " +
                        last_error);
}

inline json http_get_json(const HttpEndpoint& endpoint, const std::string& path_and_query) {
    auto [base, path] = detail::split_url(endpoint.url);
    (void)path;
    std::string last_error;
    for (int attempt = 1; attempt <= endpoint.max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = endpoint.backoff_ms * (1 << (attempt - 2));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        ConcurrencyGuard guard(endpoint.limit.get());
        httplib::Client client(base);
        client.set_connection_timeout(endpoint.timeout_s, 0);
        client.set_read_timeout(endpoint.timeout_s, 0);
        httplib::Headers headers;
        if (!endpoint.api_key.empty())
            headers.emplace("Authorization", "Bearer " + endpoint.api_key);
        auto res = client.Get(path_and_query, headers);
        if (!res) {
            last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status == 404) throw NotFoundError(endpoint.url + path_and_query + ": not found");
        if (res->status >= 200 && res->status < 300) {
            json parsed = json::parse(res->body, nullptr, false);
            if (parsed.is_discarded())
                throw EndpointError(endpoint.url + ": response is not valid JSON");
            return parsed;
        }
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
        if (!detail::retryable_status(res->status))
            throw EndpointError(endpoint.url + ": " + last_error);
    }
    throw EndpointError(endpoint.url + ": giving up after " +
                        std::to_string(endpoint.max_attempts) + " attempts; last error: " +
                        last_error);
}

// ---------------------------------------------------------------------------
// HTTP client implementations
// ---------------------------------------------------------------------------

/// OpenAI-compatible chat completions: POST {model, messages, temperature,
/// max_tokens} and read the first choice's message content.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::string complete(const ChatRequest& request) override {
        request.validate();
        json body;
        body["model"] = request.model_id;
        body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
        body["temperature"] = request.temperature;
        body["max_tokens"] = request.max_output_tokens;
        if (!request.stop.empty()) body["stop"] = request.stop;
        json reply = http_post_json(endpoint_, body);
        try {
            std::string content =
                reply.at("choices").at(0).at("message").at("content").get<std::string>();
            if (content.empty())
                throw EndpointError(endpoint_.url + ": empty completion");
            return content;
        } catch (const json::exception& e) {
            throw EndpointError(endpoint_.url + ": malformed chat response: " + e.what());
        }
    }

private:
    HttpEndpoint endpoint_;
};

/// POST {"model", "input": [texts]} -> {"data":[{"embedding":[...]}...]}.
class HttpEmbeddingClient : public EmbeddingClient {
public:
    explicit HttpEmbeddingClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts) override {
        if (texts.empty()) return {};
        json body;
        body["model"] = model;
        body["input"] = texts;
        json reply = http_post_json(endpoint_, body);
        std::vector<std::vector<double>> embeddings;
        try {
            for (const auto& item : reply.at("data"))
                embeddings.push_back(item.at("embedding").get<std::vector<double>>());
        } catch (const json::exception& e) {
            throw EndpointError(endpoint_.url + ": malformed embedding response: " + e.what());
        }
        if (embeddings.size() != texts.size())
            throw EndpointError(endpoint_.url + ": expected " + std::to_string(texts.size()) +
                                " embeddings, got " + std::to_string(embeddings.size()));
        return embeddings;
    }

private:
    HttpEndpoint endpoint_;
};

/// POST {"premise", "hypothesis"} -> {"score": float in [0,1]}.
class HttpNliClient : public NliClient {
public:
    explicit HttpNliClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    double score(const std::string& premise, const std::string& hypothesis) override {
        json body;
        body["premise"] = premise;
        body["hypothesis"] = hypothesis;
        json reply = http_post_json(endpoint_, body);
        if (!reply.contains("score") || !reply["score"].is_number())
            throw EndpointError(endpoint_.url + ": NLI response missing numeric 'score'");
        return reply["score"].get<double>();
    }

private:
    HttpEndpoint endpoint_;
};

/// POST {"query", "max_results"} -> {"results":[{title,url,snippet}...]}.
class HttpSearchClient : public SearchClient {
public:
    explicit HttpSearchClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::vector<SearchResult> search(const std::string& query, int max_results) override {
        json body;
        body["query"] = query;
        body["max_results"] = max_results;
        json reply = http_post_json(endpoint_, body);
        std::vector<SearchResult> results;
        if (reply.contains("results")) {
            for (const auto& item : reply["results"]) {
                SearchResult result;
                result.title = item.value("title", "");
                result.url = item.value("url", "");
                result.snippet = item.value("snippet", "");
                results.push_back(std::move(result));
            }
        }
        return results;
    }

private:
    HttpEndpoint endpoint_;
};

/// Generic wiki API client: GET {url}?title=... returning the corpus page
/// schema plus "reference_urls" and "created".
class HttpWikiClient : public WikiClient {
public:
    explicit HttpWikiClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    WikiFetchResult fetch(const std::string& title) override {
        auto [base, path] = detail::split_url(endpoint_.url);
        (void)base;
        std::string query = path + "?title=" + httplib::detail::encode_query_param(title);
        json reply = http_get_json(endpoint_, query);
        WikiFetchResult result;
        result.page = page_from_json(reply, endpoint_.url + " page for '" + title + "'");
        if (reply.contains("reference_urls"))
            result.reference_urls = reply["reference_urls"].get<std::vector<std::string>>();
        result.created_date = reply.value("created", "");
        return result;
    }

private:
    HttpEndpoint endpoint_;
};

class HttpUrlFetcher : public UrlFetcher {
public:
    explicit HttpUrlFetcher(int timeout_s = 30, std::shared_ptr<ConcurrencyLimit> limit = nullptr)
        : timeout_s_(timeout_s), limit_(std::move(limit)) {}

    FetchResult get(const std::string& url) override {
        try {
            auto [base, path] = detail::split_url(url);
            ConcurrencyGuard guard(limit_.get());
            httplib::Client client(base);
            client.set_connection_timeout(timeout_s_, 0);
            client.set_read_timeout(timeout_s_, 0);
            client.set_follow_location(true);
            auto res = client.Get(path);
            if (!res) return {0, ""};
            return {res->status, res->body};
        } catch (const Error&) {
            return {0, ""};
        }
    }

private:
    int timeout_s_;
    std::shared_ptr<ConcurrencyLimit> limit_;
};

// ---------------------------------------------------------------------------
// Caching wrappers
// ---------------------------------------------------------------------------

class CachingChatClient : public ChatClient {
public:
    CachingChatClient(ChatClient& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

    std::string complete(const ChatRequest& request) override {
        json payload;
        payload["prompt"] = request.prompt;
        payload["max_tokens"] = request.max_output_tokens;
        payload["temperature"] = request.temperature;
        payload["stop"] = request.stop;
        auto key = make_cache_key("chat", request.model_id, payload);
        if (auto hit = cache_.get(key)) return *hit;
        std::string reply = inner_.complete(request);
        cache_.put(key, reply);
        return reply;
    }

private:
    ChatClient& inner_;
    ResponseCache& cache_;
};

/// Embeddings are cached per (model, text) hash; one batched call covers
/// the misses.
class CachingEmbeddingClient : public EmbeddingClient {
public:
    CachingEmbeddingClient(EmbeddingClient& inner, ResponseCache& cache)
        : inner_(inner), cache_(cache) {}

    std::vector<std::vector<double>> embed(const std::string& model,
                                           const std::vector<std::string>& texts) override {
        std::vector<std::vector<double>> out(texts.size());
        std::vector<size_t> misses;
        for (size_t i = 0; i < texts.size(); ++i) {
            auto key = make_cache_key("embed", model, json(texts[i]));
            if (auto hit = cache_.get(key)) {
                out[i] = json::parse(*hit).get<std::vector<double>>();
            } else {
                misses.push_back(i);
            }
        }
        if (!misses.empty()) {
            std::vector<std::string> miss_texts;
            miss_texts.reserve(misses.size());
            for (size_t i : misses) miss_texts.push_back(texts[i]);
            auto fresh = inner_.embed(model, miss_texts);
            for (size_t m = 0; m < misses.size(); ++m) {
                out[misses[m]] = fresh[m];
                cache_.put(make_cache_key("embed", model, json(texts[misses[m]])),
                           json(fresh[m]).dump());
            }
        }
        return out;
    }

private:
    EmbeddingClient& inner_;
    ResponseCache& cache_;
};

class CachingNliClient : public NliClient {
public:
    CachingNliClient(NliClient& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

    double score(const std::string& premise, const std::string& hypothesis) override {
        json payload;
        payload["premise"] = premise;
        payload["hypothesis"] = hypothesis;
        auto key = make_cache_key("nli", "", payload);
        if (auto hit = cache_.get(key)) return std::stod(*hit);
        double score = inner_.score(premise, hypothesis);
        char buffer[40];
        std::snprintf(buffer, sizeof(buffer), "%.17g", score);
        cache_.put(key, buffer);
        return score;
    }

private:
    NliClient& inner_;
    ResponseCache& cache_;
};

/// Crawl cache: a URL fetched once is never fetched again.
class CachingUrlFetcher : public UrlFetcher {
public:
    CachingUrlFetcher(UrlFetcher& inner, ResponseCache& cache) : inner_(inner), cache_(cache) {}

    FetchResult get(const std::string& url) override {
        auto key = make_cache_key("fetch", "", json(url));
        if (auto hit = cache_.get(key)) {
            json record = json::parse(*hit);
            return {record.value("status", 0), record.value("body", "")};
        }
        FetchResult result = inner_.get(url);
        json record;
        record["status"] = result.status;
        record["body"] = result.body;
        cache_.put(key, record.dump());
        return result;
    }

private:
    UrlFetcher& inner_;
    ResponseCache& cache_;
};

// ---------------------------------------------------------------------------
// Environment wiring
// ---------------------------------------------------------------------------

inline std::string env_or(const char* name, const std::string& fallback = "") {
    const char* value = std::getenv(name);
    return value ? std::string(value) : fallback;
}

/// Env var names for endpoint configuration.
constexpr const char* kEnvChatUrl = "WIKIGEN_CHAT_URL";
constexpr const char* kEnvChatKey = "WIKIGEN_CHAT_KEY";
constexpr const char* kEnvNliUrl = "WIKIGEN_NLI_URL";
constexpr const char* kEnvEmbedUrl = "WIKIGEN_EMBED_URL";
constexpr const char* kEnvSearchUrl = "WIKIGEN_SEARCH_URL";
constexpr const char* kEnvSearchKey = "WIKIGEN_SEARCH_KEY";

}  // namespace wikigen
