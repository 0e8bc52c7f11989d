#pragma once

// Chunk retrieval: an inverted index with Okapi BM25 (k1=1.2, b=0.75) and
// cosine TF-IDF scoring, plus seeded-random and golden baselines and a
// dense path that delegates to an embedding callback. All strategies share
// one top-L pipeline with the deterministic tie-break
// (score desc, doc_id asc, chunk_index asc).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wikigen/corpus.hpp"
#include "wikigen/error.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

enum class Strategy { Random, TfIdf, Bm25, Dense, Golden };

inline std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::Random: return "random";
        case Strategy::TfIdf: return "tfidf";
        case Strategy::Bm25: return "bm25";
        case Strategy::Dense: return "dense";
        case Strategy::Golden: return "golden";
    }
    return "bm25";
}

inline Strategy parse_strategy(const std::string& name) {
    if (name == "random") return Strategy::Random;
    if (name == "tfidf") return Strategy::TfIdf;
    if (name == "bm25") return Strategy::Bm25;
    if (name == "dense") return Strategy::Dense;
    if (name == "golden") return Strategy::Golden;
    throw ParseError("unknown retrieval strategy '" + name +
                     "' (expected random|tfidf|bm25|dense|golden)");
}

struct RetrievalQuery {
    std::string text;
    std::vector<std::string> tokens;  // normalize_tokens(text)

    static RetrievalQuery from_text(std::string text) {
        RetrievalQuery query;
        query.tokens = normalize_tokens(text);
        query.text = std::move(text);
        return query;
    }

    bool operator==(const RetrievalQuery&) const = default;
};

struct Posting {
    long chunk_id = 0;
    int term_frequency = 0;
};

class InvertedIndex {
public:
    InvertedIndex() = default;

    /// Normalization: lowercase, split on non-alphanumeric, drop empties,
    /// no stemming. Stopwords (default none) are dropped before indexing.
    static InvertedIndex build(const std::vector<Chunk>& chunks,
                               const std::set<std::string>& stopwords = {}) {
        InvertedIndex index;
        long total_tokens = 0;
        for (const auto& chunk : chunks) {
            if (!index.lengths_.emplace(chunk.chunk_id, 0).second)
                throw ValidationError("duplicate chunk_id " + std::to_string(chunk.chunk_id));
            std::unordered_map<std::string, int> counts;
            int kept = 0;
            for (const auto& word : chunk.words) {
                for (auto& token : normalize_tokens(word)) {
                    if (stopwords.count(token)) continue;
                    ++counts[token];
                    ++kept;
                }
            }
            index.lengths_[chunk.chunk_id] = kept;
            total_tokens += kept;
            for (auto& [term, tf] : counts)
                index.postings_[term].push_back({chunk.chunk_id, tf});
        }
        for (auto& [term, postings] : index.postings_)
            std::sort(postings.begin(), postings.end(),
                      [](const Posting& a, const Posting& b) { return a.chunk_id < b.chunk_id; });
        index.chunk_count_ = static_cast<long>(chunks.size());
        index.avg_length_ = index.chunk_count_ > 0
                                ? static_cast<double>(total_tokens) /
                                      static_cast<double>(index.chunk_count_)
                                : 0.0;
        return index;
    }

    long chunk_count() const { return chunk_count_; }
    double avg_token_length() const { return avg_length_; }

    bool has_chunk(long chunk_id) const { return lengths_.count(chunk_id) > 0; }

    int token_length(long chunk_id) const {
        auto it = lengths_.find(chunk_id);
        if (it == lengths_.end())
            throw Error("unknown chunk_id " + std::to_string(chunk_id));
        return it->second;
    }

    long df(const std::string& term) const {
        auto it = postings_.find(term);
        return it == postings_.end() ? 0 : static_cast<long>(it->second.size());
    }

    int tf(const std::string& term, long chunk_id) const {
        auto it = postings_.find(term);
        if (it == postings_.end()) return 0;
        const auto& postings = it->second;
        auto pos = std::lower_bound(postings.begin(), postings.end(), chunk_id,
                                    [](const Posting& p, long id) { return p.chunk_id < id; });
        if (pos == postings.end() || pos->chunk_id != chunk_id) return 0;
        return pos->term_frequency;
    }

    /// Terms of one chunk with their frequencies, in lexicographic order.
    std::vector<std::pair<std::string, int>> chunk_terms(long chunk_id) const {
        std::vector<std::pair<std::string, int>> terms;
        for (const auto& [term, postings] : postings_) {
            auto pos = std::lower_bound(postings.begin(), postings.end(), chunk_id,
                                        [](const Posting& p, long id) { return p.chunk_id < id; });
            if (pos != postings.end() && pos->chunk_id == chunk_id)
                terms.emplace_back(term, pos->term_frequency);
        }
        std::sort(terms.begin(), terms.end());
        return terms;
    }

private:
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<long, int> lengths_;
    long chunk_count_ = 0;
    double avg_length_ = 0.0;
};

constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;

/// Okapi BM25 with the +1-smoothed idf ln(1 + (N-df+0.5)/(df+0.5)).
/// Query tokens are summed in order; terms absent from the corpus
/// contribute zero.
inline double score_bm25(const InvertedIndex& index, const RetrievalQuery& query, long chunk_id) {
    if (!index.has_chunk(chunk_id))
        throw Error("score_bm25: unknown chunk_id " + std::to_string(chunk_id));
    double score = 0.0;
    double n = static_cast<double>(index.chunk_count());
    double len = static_cast<double>(index.token_length(chunk_id));
    double avg = index.avg_token_length();
    for (const auto& term : query.tokens) {
        long df = index.df(term);
        if (df == 0) continue;
        int tf = index.tf(term, chunk_id);
        if (tf == 0) continue;
        double idf = std::log(1.0 + (n - static_cast<double>(df) + 0.5) /
                                        (static_cast<double>(df) + 0.5));
        double tfd = static_cast<double>(tf);
        score += idf * (tfd * (kBm25K1 + 1.0)) /
                 (tfd + kBm25K1 * (1.0 - kBm25B + kBm25B * len / avg));
    }
    return score;
}

/// Cosine similarity between query and chunk tf*idf vectors with raw term
/// frequencies and idf = ln(N/df); df = 0 terms carry zero weight.
inline double score_tfidf(const InvertedIndex& index, const RetrievalQuery& query, long chunk_id) {
    if (!index.has_chunk(chunk_id))
        throw Error("score_tfidf: unknown chunk_id " + std::to_string(chunk_id));
    double n = static_cast<double>(index.chunk_count());

    // Distinct query terms in first-occurrence order keeps summation
    // deterministic.
    std::vector<std::pair<std::string, int>> query_terms;
    for (const auto& token : query.tokens) {
        bool found = false;
        for (auto& [term, count] : query_terms) {
            if (term == token) {
                ++count;
                found = true;
                break;
            }
        }
        if (!found) query_terms.emplace_back(token, 1);
    }

    auto idf = [&](const std::string& term) -> double {
        long df = index.df(term);
        if (df == 0) return 0.0;
        return std::log(n / static_cast<double>(df));
    };

    double dot = 0.0, query_norm2 = 0.0;
    for (const auto& [term, qtf] : query_terms) {
        double weight = static_cast<double>(qtf) * idf(term);
        if (weight == 0.0) continue;
        query_norm2 += weight * weight;
        int tf = index.tf(term, chunk_id);
        if (tf > 0) dot += weight * static_cast<double>(tf) * idf(term);
    }
    double chunk_norm2 = 0.0;
    for (const auto& [term, tf] : index.chunk_terms(chunk_id)) {
        double weight = static_cast<double>(tf) * idf(term);
        chunk_norm2 += weight * weight;
    }
    if (query_norm2 == 0.0 || chunk_norm2 == 0.0) return 0.0;
    return dot / (std::sqrt(query_norm2) * std::sqrt(chunk_norm2));
}

struct ScoredChunk {
    Chunk chunk;
    double score = 0.0;
};

struct RetrievedSet {
    RetrievalQuery query;
    Strategy strategy = Strategy::Bm25;
    std::vector<ScoredChunk> items;  // scores non-increasing, ties broken
    int requested_l = 0;
    bool short_of_l = false;  // fewer chunks than L were available
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Seed-reproducible uniform score in [0,1), a pure function of
/// (seed, doc_id, chunk_index) so random retrieval is insertion-order
/// invariant and bit-identical across runs.
inline double random_chunk_score(uint64_t seed, const Chunk& chunk) {
    uint64_t h = splitmix64(seed ^ splitmix64(static_cast<uint64_t>(chunk.doc_id)));
    h = splitmix64(h ^ static_cast<uint64_t>(static_cast<int64_t>(chunk.chunk_index)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

using EmbedFn =
    std::function<std::vector<std::vector<double>>(const std::vector<std::string>&)>;

struct RetrieveOptions {
    int top_l = 5;
    uint64_t seed = 0;    // Random strategy
    EmbedFn embed;        // Dense strategy: texts -> embeddings
};

inline bool retrieval_order_less(const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.chunk.doc_id != b.chunk.doc_id) return a.chunk.doc_id < b.chunk.doc_id;
    return a.chunk.chunk_index < b.chunk.chunk_index;
}

/// Scores every chunk with the chosen strategy, sorts with the shared
/// tie-break, and returns the top L. For Golden the caller supplies the
/// reference page's own chunk corpus (and an index over it); scoring then
/// follows the sparse BM25 path.
inline RetrievedSet retrieve(Strategy strategy, const RetrievalQuery& query,
                             const std::vector<Chunk>& chunks, const InvertedIndex* index,
                             const RetrieveOptions& options) {
    if (options.top_l < 1)
        throw Error("retrieve: top_l must be >= 1, got " + std::to_string(options.top_l));
    if ((strategy == Strategy::TfIdf || strategy == Strategy::Bm25 ||
         strategy == Strategy::Golden) &&
        index == nullptr)
        throw Error("retrieve: sparse strategies require an index");
    {
        std::unordered_set<long> ids;
        for (const auto& chunk : chunks)
            if (!ids.insert(chunk.chunk_id).second)
                throw ValidationError("retrieve: duplicate chunk_id " +
                                      std::to_string(chunk.chunk_id));
    }

    RetrievedSet result;
    result.query = query;
    result.strategy = strategy;
    result.requested_l = options.top_l;

    std::vector<ScoredChunk> scored;
    scored.reserve(chunks.size());
    switch (strategy) {
        case Strategy::Random:
            for (const auto& chunk : chunks)
                scored.push_back({chunk, random_chunk_score(options.seed, chunk)});
            break;
        case Strategy::TfIdf:
            for (const auto& chunk : chunks)
                scored.push_back({chunk, score_tfidf(*index, query, chunk.chunk_id)});
            break;
        case Strategy::Bm25:
        case Strategy::Golden:
            for (const auto& chunk : chunks)
                scored.push_back({chunk, score_bm25(*index, query, chunk.chunk_id)});
            break;
        case Strategy::Dense: {
            if (!options.embed) throw Error("retrieve: dense strategy requires an embedder");
            std::vector<std::string> texts;
            texts.reserve(chunks.size() + 1);
            texts.push_back(query.text);
            for (const auto& chunk : chunks) texts.push_back(chunk.text());
            auto embeddings = options.embed(texts);
            if (embeddings.size() != texts.size())
                throw EndpointError("embedding endpoint returned " +
                                    std::to_string(embeddings.size()) + " vectors for " +
                                    std::to_string(texts.size()) + " inputs");
            const auto& query_vec = embeddings[0];
            for (size_t i = 0; i < chunks.size(); ++i) {
                const auto& vec = embeddings[i + 1];
                if (vec.size() != query_vec.size())
                    throw EndpointError("embedding dimension mismatch from endpoint");
                double dot = 0.0;
                for (size_t d = 0; d < vec.size(); ++d) dot += query_vec[d] * vec[d];
                scored.push_back({chunks[i], dot});
            }
            break;
        }
    }

    std::stable_sort(scored.begin(), scored.end(), retrieval_order_less);
    size_t keep = std::min<size_t>(scored.size(), static_cast<size_t>(options.top_l));
    result.items.assign(scored.begin(), scored.begin() + static_cast<long>(keep));
    result.short_of_l = scored.size() < static_cast<size_t>(options.top_l);
    return result;
}

}  // namespace wikigen
