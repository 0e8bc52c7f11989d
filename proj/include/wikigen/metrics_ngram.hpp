#pragma once

// Overlap metrics between generated text and the reference page, reported
// on a 0-100 scale: document-level BLEU-n, ROUGE-L (beta = 1.2), and the
// stem-variant METEOR (alpha = 0.9, beta = 3, gamma = 0.5).

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wikigen/error.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

struct NgramScore {
    std::string metric;
    double value = 0.0;  // in [0, 100]
};

using TokenList = std::vector<std::string>;

namespace detail {

inline std::unordered_map<std::string, int> ngram_counts(const TokenList& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
        std::string key;
        for (int k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key += tokens[i + static_cast<size_t>(k)];
        }
        ++counts[key];
    }
    return counts;
}

inline long lcs_length(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<long> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j) {
            curr[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

}  // namespace detail

/// BLEU-n: geometric mean of modified n-gram precisions with the brevity
/// penalty exp(1 - r/c) for c < r. Orders >= 2 with zero matches get +1
/// smoothing on numerator and denominator; a zero unigram precision forces
/// a zero score.
inline NgramScore bleu_n(const TokenList& candidate, const TokenList& reference, int n) {
    if (n < 1 || n > 4) throw Error("bleu_n order must be in 1..4, got " + std::to_string(n));
    NgramScore score{"bleu-" + std::to_string(n), 0.0};
    if (candidate.empty()) return score;

    double log_sum = 0.0;
    for (int order = 1; order <= n; ++order) {
        auto cand_counts = detail::ngram_counts(candidate, order);
        auto ref_counts = detail::ngram_counts(reference, order);
        long match = 0;
        long total = std::max<long>(0, static_cast<long>(candidate.size()) - order + 1);
        for (const auto& [gram, count] : cand_counts) {
            auto it = ref_counts.find(gram);
            if (it != ref_counts.end()) match += std::min(count, it->second);
        }
        if (order >= 2 && match == 0) {
            ++match;
            ++total;
        }
        if (match == 0) return score;
        log_sum += std::log(static_cast<double>(match) / static_cast<double>(total));
    }
    double geometric_mean = std::exp(log_sum / n);
    double c = static_cast<double>(candidate.size());
    double r = static_cast<double>(reference.size());
    double brevity = (c < r) ? std::exp(1.0 - r / c) : 1.0;
    score.value = 100.0 * brevity * geometric_mean;
    return score;
}

/// ROUGE-L F-score over the token-level longest common subsequence.
inline NgramScore rouge_l(const TokenList& candidate, const TokenList& reference) {
    constexpr double kBeta = 1.2;
    NgramScore score{"rouge-l", 0.0};
    if (candidate.empty() || reference.empty()) return score;
    long lcs = detail::lcs_length(candidate, reference);
    if (lcs == 0) return score;
    double precision = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    double recall = static_cast<double>(lcs) / static_cast<double>(reference.size());
    double beta2 = kBeta * kBeta;
    score.value = 100.0 * (1.0 + beta2) * precision * recall / (recall + beta2 * precision);
    return score;
}

/// METEOR, stem variant. Alignment runs in two stages (exact, then Porter
/// stem equality) over still-unmatched tokens; within a stage candidate
/// tokens scan left to right and take the earliest unmatched reference
/// occurrence, which maximizes matches per stage and keeps same-token pairs
/// in order (fewest crossings, hence fewest chunks for that match set).
inline NgramScore meteor(const TokenList& candidate, const TokenList& reference) {
    constexpr double kAlpha = 0.9;
    constexpr double kBeta = 3.0;
    constexpr double kGamma = 0.5;
    NgramScore score{"meteor", 0.0};
    if (candidate.empty() || reference.empty()) return score;

    std::vector<int> cand_match(candidate.size(), -1);
    std::vector<bool> ref_used(reference.size(), false);

    auto run_stage = [&](bool use_stem) {
        std::vector<std::string> cand_keys(candidate.size()), ref_keys(reference.size());
        for (size_t i = 0; i < candidate.size(); ++i)
            cand_keys[i] = use_stem ? porter_stem(candidate[i]) : candidate[i];
        for (size_t j = 0; j < reference.size(); ++j)
            ref_keys[j] = use_stem ? porter_stem(reference[j]) : reference[j];
        for (size_t i = 0; i < candidate.size(); ++i) {
            if (cand_match[i] >= 0) continue;
            for (size_t j = 0; j < reference.size(); ++j) {
                if (ref_used[j] || cand_keys[i] != ref_keys[j]) continue;
                cand_match[i] = static_cast<int>(j);
                ref_used[j] = true;
                break;
            }
        }
    };
    run_stage(false);
    run_stage(true);

    long m = 0;
    long chunks = 0;
    int prev_i = -2, prev_j = -2;
    for (size_t i = 0; i < candidate.size(); ++i) {
        if (cand_match[i] < 0) continue;
        ++m;
        if (static_cast<int>(i) != prev_i + 1 || cand_match[i] != prev_j + 1) ++chunks;
        prev_i = static_cast<int>(i);
        prev_j = cand_match[i];
    }
    if (m == 0) return score;

    double precision = static_cast<double>(m) / static_cast<double>(candidate.size());
    double recall = static_cast<double>(m) / static_cast<double>(reference.size());
    double f_mean = precision * recall / (kAlpha * precision + (1.0 - kAlpha) * recall);
    double penalty =
        kGamma * std::pow(static_cast<double>(chunks) / static_cast<double>(m), kBeta);
    score.value = 100.0 * f_mean * (1.0 - penalty);
    return score;
}

}  // namespace wikigen
