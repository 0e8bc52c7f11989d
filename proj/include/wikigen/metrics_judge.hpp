#pragma once

// Judge-model metrics: Fluent/Info/Focus/Outline scores on the 0-5 rubric
// prompts, and the infobox QG-QA pipeline (IB Score). Replies are parsed
// leniently (first numeral per labeled field, clamped into range with a
// warning flag) with one format-reminder re-ask before giving up.

#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wikigen/article.hpp"
#include "wikigen/clients.hpp"
#include "wikigen/corpus.hpp"
#include "wikigen/error.hpp"
#include "wikigen/prompts.hpp"

namespace wikigen {

struct JudgeScore {
    std::string metric;  // fluent | info | focus | outline
    double value = 0.0;  // in [0, 5]
    std::string raw_reply;
    bool clamped = false;
};

struct JudgeOptions {
    std::string model_id;
    int max_output_tokens = 128;
    double temperature = 0.0;
};

namespace detail {

inline std::optional<double> first_number_after(const std::string& text, size_t from) {
    for (size_t i = from; i < text.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(text[i]))) {
            size_t end = i;
            while (end < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.'))
                ++end;
            try {
                return std::stod(text.substr(i, end - i));
            } catch (const std::exception&) {
                return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

inline std::optional<double> number_for_label(const std::string& reply, const std::string& label) {
    std::string lowered = lowercase(reply);
    auto pos = lowered.find(lowercase(label));
    if (pos == std::string::npos) return std::nullopt;
    return first_number_after(reply, pos + label.size());
}

inline double clamp_score(double value, bool& clamped) {
    if (value < 0.0) {
        clamped = true;
        return 0.0;
    }
    if (value > 5.0) {
        clamped = true;
        return 5.0;
    }
    return value;
}

inline std::string ask_judge(ChatClient& judge, const JudgeOptions& options,
                             const std::string& prompt) {
    ChatRequest request;
    request.model_id = options.model_id;
    request.prompt = prompt;
    request.max_output_tokens = options.max_output_tokens;
    request.temperature = options.temperature;
    return judge.complete(request);
}

inline constexpr std::string_view kReaskSuffix =
    "\nYour previous reply did not match the required format. Reply with the score only.";

}  // namespace detail

/// One judge call scoring fluency and informativeness together (the reply's
/// faithfulness figure is parsed for validation but not reported).
inline std::pair<JudgeScore, JudgeScore> fluent_and_info_score(const std::string& article_text,
                                                               const std::string& keyword,
                                                               ChatClient& judge,
                                                               const JudgeOptions& options) {
    std::string prompt = std::string(prompts::kFluentInfoEvaluation) + "\n\n" +
                         std::string(prompt_labels::kKeyword) + " " + keyword + "\n" +
                         std::string(prompt_labels::kText) + "\n" + article_text;
    std::string reply;
    std::optional<double> fluency, info, faithfulness;
    for (int attempt = 0; attempt < 2; ++attempt) {
        reply = detail::ask_judge(judge, options,
                                  attempt == 0 ? prompt
                                               : prompt + std::string(detail::kReaskSuffix));
        fluency = detail::number_for_label(reply, "Fluency");
        info = detail::number_for_label(reply, "Informativeness");
        faithfulness = detail::number_for_label(reply, "Faithfulness");
        if (fluency && info && faithfulness) break;
    }
    if (!fluency || !info || !faithfulness)
        throw ParseError("judge reply did not match 'Fluency:a,Informativeness:b "
                         "Faithfulness:c'; raw reply: " +
                         reply);
    JudgeScore fluent_score{"fluent", 0.0, reply, false};
    fluent_score.value = detail::clamp_score(*fluency, fluent_score.clamped);
    JudgeScore info_score{"info", 0.0, reply, false};
    info_score.value = detail::clamp_score(*info, info_score.clamped);
    return {fluent_score, info_score};
}

/// Rubric score for one section's alignment with its subtitle.
inline JudgeScore focus_score_section(const std::string& keyword, const std::string& title,
                                      const std::string& content, ChatClient& judge,
                                      const JudgeOptions& options) {
    std::string prompt = std::string(prompts::kFocusEvaluation) + "\n\n" +
                         std::string(prompt_labels::kKeyword) + " " + keyword + "\n" +
                         std::string(prompt_labels::kSubtitle) + " " + title + "\n" +
                         std::string(prompt_labels::kContent) + "\n" + content;
    std::string reply;
    std::optional<double> value;
    for (int attempt = 0; attempt < 2; ++attempt) {
        reply = detail::ask_judge(judge, options,
                                  attempt == 0 ? prompt
                                               : prompt + std::string(detail::kReaskSuffix));
        value = detail::first_number_after(reply, 0);
        if (value) break;
    }
    if (!value) throw ParseError("focus judge reply has no score; raw reply: " + reply);
    JudgeScore score{"focus", 0.0, reply, false};
    score.value = detail::clamp_score(*value, score.clamped);
    return score;
}

struct FocusReport {
    JudgeScore article_score;            // the per-section mean
    std::vector<JudgeScore> per_section;
};

/// Per-section focus calls averaged into the article focus score.
inline FocusReport focus_score(const Article& article, ChatClient& judge,
                               const JudgeOptions& options) {
    if (article.sections.empty())
        throw ValidationError("focus score requires at least one section");
    FocusReport report;
    double sum = 0.0;
    for (const auto& section : article.sections) {
        std::string content;
        for (const auto& sentence : section.sentences) {
            if (!content.empty()) content.push_back(' ');
            content += sentence.text;
        }
        auto score = focus_score_section(article.keyword, section.title, content, judge, options);
        sum += score.value;
        report.per_section.push_back(std::move(score));
    }
    report.article_score.metric = "focus";
    report.article_score.value = sum / static_cast<double>(article.sections.size());
    return report;
}

inline JudgeScore outline_score(const std::string& keyword,
                                const std::vector<std::string>& titles, ChatClient& judge,
                                const JudgeOptions& options) {
    if (titles.empty()) throw ValidationError("outline score requires at least one title");
    std::string listing;
    for (size_t i = 0; i < titles.size(); ++i)
        listing += std::to_string(i + 1) + ". " + titles[i] + "\n";
    std::string prompt = std::string(prompts::kTitleEvaluation) + "\n\n" +
                         std::string(prompt_labels::kKeyword) + " " + keyword + "\n" +
                         std::string(prompt_labels::kOutlines) + "\n" + listing;
    std::string reply;
    std::optional<double> value;
    for (int attempt = 0; attempt < 2; ++attempt) {
        reply = detail::ask_judge(judge, options,
                                  attempt == 0 ? prompt
                                               : prompt + std::string(detail::kReaskSuffix));
        value = detail::first_number_after(reply, 0);
        if (value) break;
    }
    if (!value) throw ParseError("outline judge reply has no score; raw reply: " + reply);
    JudgeScore score{"outline", 0.0, reply, false};
    score.value = detail::clamp_score(*value, score.clamped);
    return score;
}

// ---------------------------------------------------------------------------
// IB Score (infobox QG-QA)
// ---------------------------------------------------------------------------

struct IbQuestion {
    std::string key;
    std::string gold_answer;
    std::string question;
    std::string model_answer;
    bool equivalent = false;
};

struct IbReport {
    std::optional<double> score;  // 0-100; absent for an empty infobox
    std::vector<IbQuestion> entries;
    bool llm_generated_questions = false;
};

struct IbOptions {
    JudgeOptions qa;     // answers questions over the generated article
    JudgeOptions judge;  // 0/1 equivalence decisions
    bool use_llm_question_generation = false;  // default: deterministic template
};

namespace detail {

inline std::optional<int> parse_binary_reply(const std::string& reply) {
    for (size_t i = 0; i < reply.size(); ++i) {
        if (reply[i] != '0' && reply[i] != '1') continue;
        bool prev_digit = i > 0 && std::isdigit(static_cast<unsigned char>(reply[i - 1]));
        bool next_digit =
            i + 1 < reply.size() && std::isdigit(static_cast<unsigned char>(reply[i + 1]));
        if (!prev_digit && !next_digit) return reply[i] - '0';
    }
    return std::nullopt;
}

}  // namespace detail

/// Per infobox entry: form a question, answer it from the generated
/// article alone, then judge answer/value equivalence with the 0/1 prompt.
/// Score = 100 * equivalent / entries.
inline IbReport ib_score(const std::vector<InfoboxEntry>& infobox, const std::string& article_text,
                         const std::string& keyword, ChatClient& qa_model, ChatClient& judge,
                         const IbOptions& options) {
    IbReport report;
    if (infobox.empty()) return report;  // score reported absent
    report.llm_generated_questions = options.use_llm_question_generation;

    int equivalent_count = 0;
    for (const auto& entry : infobox) {
        IbQuestion item;
        item.key = entry.key;
        item.gold_answer = entry.value;
        if (options.use_llm_question_generation) {
            std::string qg_prompt = "Write one question whose answer is the value of \"" +
                                    entry.key + "\" for \"" + keyword +
                                    "\". Only give the question.";
            item.question = trim(detail::ask_judge(qa_model, options.qa, qg_prompt));
        } else {
            item.question = "What is the " + entry.key + " of " + keyword + "?";
        }

        std::string answer_prompt = std::string(prompts::kIbAnswer) + "\n\n" +
                                    std::string(prompt_labels::kQuestion) + " " + item.question +
                                    "\n" + std::string(prompt_labels::kPassage) + "\n" +
                                    article_text;
        item.model_answer = trim(detail::ask_judge(qa_model, options.qa, answer_prompt));

        std::string judge_prompt = std::string(prompts::kIbEquivalence) + "\n\n" +
                                   std::string(prompt_labels::kQuestion) + " " + item.question +
                                   "\n" + std::string(prompt_labels::kGolden) + " " +
                                   entry.value + "\n" + std::string(prompt_labels::kCandidate) +
                                   " " + item.model_answer;
        std::optional<int> verdict;
        std::string reply;
        for (int attempt = 0; attempt < 2; ++attempt) {
            reply = detail::ask_judge(judge, options.judge,
                                      attempt == 0
                                          ? judge_prompt
                                          : judge_prompt + std::string(detail::kReaskSuffix));
            verdict = detail::parse_binary_reply(reply);
            if (verdict) break;
        }
        if (!verdict)
            throw ParseError("equivalence judge reply is not 0/1; raw reply: " + reply);
        item.equivalent = *verdict == 1;
        if (item.equivalent) ++equivalent_count;
        report.entries.push_back(std::move(item));
    }
    report.score = 100.0 * static_cast<double>(equivalent_count) /
                   static_cast<double>(infobox.size());
    return report;
}

}  // namespace wikigen
