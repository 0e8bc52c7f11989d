#pragma once

// Faithfulness metrics: per-citation NLI support checks, sentence-level
// Citation Recall/Precision, and word-level Citation Rate. Each citation is
// judged separately (premise = the cited chunk, hypothesis = the sentence);
// a sentence's recall is 1 as soon as one citation supports it.

#include <optional>
#include <string>
#include <vector>

#include "wikigen/article.hpp"
#include "wikigen/clients.hpp"
#include "wikigen/generation.hpp"

namespace wikigen {

struct CitationVerdict {
    int k = 0;
    bool supported = false;
    bool out_of_range = false;
    std::optional<double> raw_score;
};

struct SentenceSupport {
    size_t section_index = 0;
    size_t sentence_index = 0;
    int word_count = 0;
    std::vector<CitationVerdict> verdicts;
    int recall = 0;                    // 0 or 1
    std::optional<double> precision;   // absent when the sentence cites nothing
};

struct FaithfulnessReport {
    double citation_rate = 0.0;    // 0-100
    double citation_recall = 0.0;  // 0-100
    std::optional<double> citation_precision;  // 0-100; absent with no citations anywhere
    std::vector<SentenceSupport> sentences;
    bool empty_article = false;
    // Precision averages over cited sentences only; citation-free sentences
    // count recall 0. Out-of-range indices stay in the precision denominator.
    static constexpr const char* kPrecisionRule = "precision-excludes-citation-free-sentences";
};

/// Judges each of a sentence's citations against its section's offered
/// documents (`citation_map[k-1]` is Document k's text as offered in the
/// prompt). Out-of-range indices count as unsupported without an NLI call.
inline SentenceSupport sentence_support(const Sentence& sentence,
                                        const std::vector<std::string>& citation_map,
                                        const EntailmentJudge& nli) {
    SentenceSupport support;
    support.word_count = sentence.word_count;
    int supported_count = 0;
    for (int k : sentence.citations) {
        CitationVerdict verdict;
        verdict.k = k;
        if (k < 1 || static_cast<size_t>(k) > citation_map.size()) {
            verdict.out_of_range = true;
            verdict.supported = false;
        } else {
            auto judged = nli.judge(citation_map[static_cast<size_t>(k) - 1], sentence.text,
                                    std::to_string(k));
            verdict.supported = judged.supported;
            verdict.raw_score = judged.raw_score;
        }
        if (verdict.supported) ++supported_count;
        support.verdicts.push_back(verdict);
    }
    if (!sentence.citations.empty()) {
        support.recall = supported_count > 0 ? 1 : 0;
        support.precision = static_cast<double>(supported_count) /
                            static_cast<double>(sentence.citations.size());
    }
    return support;
}

/// Full-article faithfulness. Recall averages over every sentence
/// (citation-free sentences score 0); precision averages over sentences
/// with citations; the rate is the word share of recall-1 sentences.
inline FaithfulnessReport evaluate_faithfulness(const Article& article, const GenerationRun& run,
                                                const EntailmentJudge& nli) {
    FaithfulnessReport report;
    long total_words = 0, supported_words = 0;
    long sentence_count = 0;
    double recall_sum = 0.0, precision_sum = 0.0;
    long precision_count = 0;

    for (size_t s = 0; s < article.sections.size(); ++s) {
        const auto& section = article.sections[s];
        const std::vector<std::string>* citation_map =
            offered_docs_for_section(run, s, section.title);
        static const std::vector<std::string> kEmpty;
        const auto& map = citation_map ? *citation_map : kEmpty;
        for (size_t i = 0; i < section.sentences.size(); ++i) {
            auto support = sentence_support(section.sentences[i], map, nli);
            support.section_index = s;
            support.sentence_index = i;
            ++sentence_count;
            total_words += support.word_count;
            if (support.recall == 1) supported_words += support.word_count;
            recall_sum += support.recall;
            if (support.precision) {
                precision_sum += *support.precision;
                ++precision_count;
            }
            report.sentences.push_back(std::move(support));
        }
    }

    if (sentence_count == 0) {
        report.empty_article = true;
        return report;
    }
    report.citation_recall = 100.0 * recall_sum / static_cast<double>(sentence_count);
    if (precision_count > 0)
        report.citation_precision = 100.0 * precision_sum / static_cast<double>(precision_count);
    if (total_words > 0)
        report.citation_rate =
            100.0 * static_cast<double>(supported_words) / static_cast<double>(total_words);
    return report;
}

}  // namespace wikigen
