#pragma once

// Article generation: the single-pass retrieve-read method (RR) and the
// plan-then-per-section method (RPRR), with greedy prompt assembly under a
// token-estimate budget. Raw prompts and outputs are recorded verbatim on
// the run for audit and for citation resolution during evaluation.

#include <optional>
#include <string>
#include <vector>

#include "wikigen/article.hpp"
#include "wikigen/clients.hpp"
#include "wikigen/corpus.hpp"
#include "wikigen/error.hpp"
#include "wikigen/prompts.hpp"
#include "wikigen/retrieval.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

enum class Method { RR, RPRR };

inline std::string to_string(Method method) { return method == Method::RR ? "rr" : "rprr"; }

inline Method parse_method(const std::string& name) {
    if (name == "rr") return Method::RR;
    if (name == "rprr") return Method::RPRR;
    throw ParseError("unknown method '" + name + "' (expected rr|rprr)");
}

struct PromptBudget {
    long max_input_tokens = 2048;
    double tokens_per_word = 4.0 / 3.0;

    void validate() const {
        if (max_input_tokens < 1) throw ValidationError("max_input_tokens must be >= 1");
    }

    long estimate(const std::string& text) const {
        return token_estimate_text(text, tokens_per_word);
    }
};

struct BuiltPrompt {
    std::string text;
    std::vector<std::string> included_docs;  // texts exactly as offered
};

namespace detail {

inline std::string replace_all(std::string text, std::string_view needle,
                               std::string_view replacement) {
    size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), replacement);
        pos += replacement.size();
    }
    return text;
}

inline std::string assemble_with_docs(const std::string& base,
                                      const std::vector<std::string>& docs) {
    std::string block;
    for (size_t i = 0; i < docs.size(); ++i) {
        if (i) block.push_back('\n');
        block += "Document " + std::to_string(i + 1) + ": " + docs[i];
    }
    if (block.empty()) {
        // Drop the placeholder line entirely for the zero-document ablation.
        std::string out = replace_all(base, "{documents}\n", "");
        return replace_all(out, "{documents}", "");
    }
    return replace_all(base, "{documents}", block);
}

}  // namespace detail

/// Instantiates a prompt template and appends "Document k: ..." entries
/// greedily in retrieval order while the token estimate stays within
/// budget. Numbering is 1-based and contiguous. When documents are offered
/// but even the first does not fit, the first is truncated to the largest
/// word prefix that does (never below one word).
inline BuiltPrompt build_prompt(std::string_view prompt_template, const std::string& keyword,
                                const std::optional<std::string>& section,
                                const std::vector<std::string>& docs, const PromptBudget& budget) {
    budget.validate();
    std::string base = detail::replace_all(std::string(prompt_template), "{keyword}", keyword);
    if (section) base = detail::replace_all(base, "{section}", *section);
    if (base.find("{keyword}") != std::string::npos ||
        base.find("{section}") != std::string::npos)
        throw Error("prompt template placeholder left unresolved");

    BuiltPrompt built;
    std::vector<std::string> included;
    std::string assembled = detail::assemble_with_docs(base, included);
    if (budget.estimate(assembled) > budget.max_input_tokens)
        throw Error("prompt template alone exceeds the input budget of " +
                    std::to_string(budget.max_input_tokens) + " tokens");

    for (const auto& doc : docs) {
        included.push_back(doc);
        std::string candidate = detail::assemble_with_docs(base, included);
        if (budget.estimate(candidate) > budget.max_input_tokens) {
            included.pop_back();
            break;
        }
        assembled = std::move(candidate);
    }

    if (included.empty() && !docs.empty()) {
        // Truncate the first document to fit.
        auto words = split_words(docs[0]);
        size_t lo = 1, hi = words.size(), best = 0;
        while (lo <= hi) {
            size_t mid = lo + (hi - lo) / 2;
            std::string prefix;
            for (size_t i = 0; i < mid; ++i) {
                if (i) prefix.push_back(' ');
                prefix += words[i];
            }
            std::string candidate = detail::assemble_with_docs(base, {prefix});
            if (budget.estimate(candidate) <= budget.max_input_tokens) {
                best = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        size_t keep = std::max<size_t>(best, 1);
        std::string prefix;
        for (size_t i = 0; i < keep && i < words.size(); ++i) {
            if (i) prefix.push_back(' ');
            prefix += words[i];
        }
        included = {prefix};
        assembled = detail::assemble_with_docs(base, included);
        if (budget.estimate(assembled) > budget.max_input_tokens)
            throw Error("input budget too small to include any document content");
    }

    built.text = std::move(assembled);
    built.included_docs = std::move(included);
    return built;
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

struct StageRecord {
    std::string stage;
    std::string prompt;
    std::string output;
};

struct SectionRun {
    std::string title;
    RetrievedSet retrieved;
    std::vector<std::string> offered_docs;
    std::string prompt;
    std::string output;
    bool failed = false;
    std::string error;
};

struct GenerationRun {
    std::string event;
    Method method = Method::RR;
    std::string model_id;
    Strategy strategy = Strategy::Bm25;
    int top_l = 5;

    std::optional<RetrievedSet> article_retrieved;  // RR
    std::vector<std::string> article_offered_docs;

    std::optional<RetrievedSet> outline_retrieved;  // RPRR
    std::vector<std::string> outline_offered_docs;
    std::string outline_raw;
    std::vector<std::string> outline_titles;
    std::vector<std::string> outline_warnings;
    std::vector<SectionRun> sections;

    std::vector<StageRecord> stages;  // every prompt/output, in call order
    std::string final_text;
    bool failed = false;
    std::string failure;
};

/// One entry's retrieval setup: the chunk corpus (related documents, or the
/// reference page's own chunks for golden), its index, and the strategy
/// options. top_l == 0 means retrieval is disabled.
class RetrievalContext {
public:
    RetrievalContext(std::vector<Chunk> chunks, Strategy strategy, RetrieveOptions options)
        : chunks_(std::move(chunks)), strategy_(strategy), options_(options) {
        if (options_.top_l > 0 &&
            (strategy_ == Strategy::TfIdf || strategy_ == Strategy::Bm25 ||
             strategy_ == Strategy::Golden))
            index_ = InvertedIndex::build(chunks_);
    }

    static RetrievalContext for_entry(const DatasetEntry& entry, Strategy strategy,
                                      RetrieveOptions options, int chunk_words = kChunkWords) {
        std::vector<Chunk> chunks;
        if (strategy == Strategy::Golden) {
            chunks = chunk_documents(wikipage_documents(entry.wikipage), chunk_words);
        } else {
            chunks = chunk_documents(entry.related_docs, chunk_words);
        }
        return RetrievalContext(std::move(chunks), strategy, options);
    }

    RetrievedSet run_query(const RetrievalQuery& query) const {
        if (options_.top_l == 0) {
            RetrievedSet empty;
            empty.query = query;
            empty.strategy = strategy_;
            empty.requested_l = 0;
            return empty;
        }
        return retrieve(strategy_, query, chunks_, index_ ? &*index_ : nullptr, options_);
    }

    Strategy strategy() const { return strategy_; }
    int top_l() const { return options_.top_l; }
    const std::vector<Chunk>& chunks() const { return chunks_; }

private:
    std::vector<Chunk> chunks_;
    Strategy strategy_;
    RetrieveOptions options_;
    std::optional<InvertedIndex> index_;
};

struct GenerationParams {
    std::string model_id;
    PromptBudget budget;
    int max_output_tokens = 2048;
    double temperature = 0.0;
};

namespace detail {

inline std::vector<std::string> doc_texts(const RetrievedSet& retrieved) {
    std::vector<std::string> texts;
    texts.reserve(retrieved.items.size());
    for (const auto& item : retrieved.items) texts.push_back(item.chunk.text());
    return texts;
}

inline std::string chat_once(ChatClient& chat, const GenerationParams& params,
                             const std::string& prompt) {
    ChatRequest request;
    request.model_id = params.model_id;
    request.prompt = prompt;
    request.max_output_tokens = params.max_output_tokens;
    request.temperature = params.temperature;
    return chat.complete(request);
}

/// Same event anchor in every section query.
inline std::string section_query_text(const std::string& event, const std::string& title) {
    return event + " — " + title;
}

inline std::vector<std::string> dedupe_titles(const std::vector<std::string>& titles) {
    std::vector<std::string> out;
    for (const auto& title : titles) {
        std::string candidate = title;
        int suffix = 2;
        while (std::find(out.begin(), out.end(), candidate) != out.end())
            candidate = title + " (" + std::to_string(suffix++) + ")";
        out.push_back(candidate);
    }
    return out;
}

}  // namespace detail

/// Single retrieval pass (query = event name), one chat call with the
/// article prompt.
inline GenerationRun generate_rr(const DatasetEntry& entry, const RetrievalContext& retrieval,
                                 ChatClient& chat, const GenerationParams& params) {
    GenerationRun run;
    run.event = entry.event;
    run.method = Method::RR;
    run.model_id = params.model_id;
    run.strategy = retrieval.strategy();
    run.top_l = retrieval.top_l();

    auto query = RetrievalQuery::from_text(entry.event);
    run.article_retrieved = retrieval.run_query(query);
    auto built = build_prompt(prompts::kArticleGeneration, entry.event, std::nullopt,
                              detail::doc_texts(*run.article_retrieved), params.budget);
    run.article_offered_docs = built.included_docs;
    std::string output = detail::chat_once(chat, params, built.text);
    run.stages.push_back({"article", built.text, output});
    run.final_text = output;
    return run;
}

struct PlannedOutline {
    Outline outline;
    RetrievedSet retrieved;
    std::vector<std::string> offered_docs;
    std::string prompt;
    std::vector<std::string> warnings;  // e.g. titles equal to document names
};

/// Outline planning for RPRR. The reply must contain numbered lines;
/// duplicate titles get a numeric suffix so section keys stay unique.
/// Titles that exactly match an offered document's name are flagged.
inline PlannedOutline plan_outline(const DatasetEntry& entry, const RetrievalContext& retrieval,
                                   ChatClient& chat, const GenerationParams& params) {
    PlannedOutline planned;
    auto query = RetrievalQuery::from_text(entry.event);
    planned.retrieved = retrieval.run_query(query);
    auto built = build_prompt(prompts::kOutlineGeneration, entry.event, std::nullopt,
                              detail::doc_texts(planned.retrieved), params.budget);
    planned.offered_docs = built.included_docs;
    planned.prompt = built.text;
    std::string output = detail::chat_once(chat, params, built.text);
    planned.outline = parse_outline(output);
    planned.outline.titles = detail::dedupe_titles(planned.outline.titles);

    for (const auto& title : planned.outline.titles) {
        for (const auto& doc : entry.related_docs) {
            if (!doc.title.empty() && title == doc.title)
                planned.warnings.push_back("outline title equals document name: " + title);
        }
    }
    return planned;
}

/// Plan, then retrieve and write each section with the query
/// "<event> — <title>"; the final article is the outline-ordered
/// concatenation of "==title==" blocks. A section failure marks the run
/// failed at that section; earlier outputs are retained.
inline GenerationRun generate_rprr(const DatasetEntry& entry, const RetrievalContext& retrieval,
                                   ChatClient& chat, const GenerationParams& params) {
    GenerationRun run;
    run.event = entry.event;
    run.method = Method::RPRR;
    run.model_id = params.model_id;
    run.strategy = retrieval.strategy();
    run.top_l = retrieval.top_l();

    auto planned = plan_outline(entry, retrieval, chat, params);
    run.outline_retrieved = planned.retrieved;
    run.outline_offered_docs = planned.offered_docs;
    run.outline_raw = planned.outline.raw;
    run.outline_titles = planned.outline.titles;
    run.outline_warnings = planned.warnings;
    run.stages.push_back({"outline", planned.prompt, planned.outline.raw});

    std::string assembled;
    for (const auto& title : run.outline_titles) {
        SectionRun section;
        section.title = title;
        try {
            auto query =
                RetrievalQuery::from_text(detail::section_query_text(entry.event, title));
            section.retrieved = retrieval.run_query(query);
            auto built = build_prompt(prompts::kSectionGeneration, entry.event, title,
                                      detail::doc_texts(section.retrieved), params.budget);
            section.offered_docs = built.included_docs;
            section.prompt = built.text;
            section.output = detail::chat_once(chat, params, built.text);
            run.stages.push_back({"section:" + title, built.text, section.output});
        } catch (const Error& e) {
            section.failed = true;
            section.error = e.what();
            run.sections.push_back(std::move(section));
            run.failed = true;
            run.failure = "section '" + title + "': " + e.what();
            break;
        }
        assembled += "==" + title + "==\n" + trim(section.output) + "\n";
        run.sections.push_back(std::move(section));
    }
    run.final_text = assembled;
    return run;
}

inline GenerationRun generate(Method method, const DatasetEntry& entry,
                              const RetrievalContext& retrieval, ChatClient& chat,
                              const GenerationParams& params) {
    return method == Method::RR ? generate_rr(entry, retrieval, chat, params)
                                : generate_rprr(entry, retrieval, chat, params);
}

/// Citation scope: the documents offered in the prompt that produced a
/// given article section. RR sections all share the article-level list;
/// RPRR sections resolve against their own section's list (matched by
/// title, falling back to position).
inline const std::vector<std::string>* offered_docs_for_section(const GenerationRun& run,
                                                                size_t section_index,
                                                                const std::string& title) {
    if (run.method == Method::RR) return &run.article_offered_docs;
    for (const auto& section : run.sections)
        if (section.title == title) return &section.offered_docs;
    if (section_index < run.sections.size()) return &run.sections[section_index].offered_docs;
    return nullptr;
}

}  // namespace wikigen
