#pragma once

// Structured view of a generated article: `==Title==` delimited sections,
// rule-based sentence segmentation, and `[k]` citation extraction. The
// parser is total; any text yields an Article.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wikigen/error.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

struct Sentence {
    std::string text;            // citation markers stripped
    std::vector<int> citations;  // sorted ascending, deduplicated
    int word_count = 0;

    bool operator==(const Sentence&) const = default;
};

struct Section {
    std::string title;
    std::vector<Sentence> sentences;

    bool operator==(const Section&) const = default;
};

struct Article {
    std::string keyword;
    std::vector<Section> sections;
    int total_words = 0;  // citation markers excluded

    bool operator==(const Article&) const = default;

    std::string plain_text() const {
        std::string out;
        for (const auto& section : sections) {
            for (const auto& sentence : section.sentences) {
                if (!out.empty()) out.push_back(' ');
                out += sentence.text;
            }
        }
        return out;
    }
};

struct Outline {
    std::vector<std::string> titles;
    std::string raw;

    bool operator==(const Outline&) const = default;
};

/// Sentence segmentation knobs. The abbreviation list suppresses splits
/// after e.g. "Dr." and is deliberately config-visible.
struct SentenceSplitOptions {
    std::vector<std::string> abbreviations = {
        "mr",  "mrs", "ms",  "dr",  "prof", "st",  "vs", "etc", "e.g", "i.e",
        "u.s", "u.k", "jr",  "sr",  "inc",  "ltd", "co", "fig", "al",  "approx"};
};

namespace detail {

inline bool is_closing_punct(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

/// Matches `[<digits>]` at position `i`; on success returns the citation
/// index and advances `i` past the closing bracket.
inline std::optional<int> take_citation_marker(std::string_view s, size_t& i) {
    if (i >= s.size() || s[i] != '[') return std::nullopt;
    size_t j = i + 1;
    size_t digits_start = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == digits_start || j >= s.size() || s[j] != ']') return std::nullopt;
    long value = 0;
    for (size_t p = digits_start; p < j; ++p) {
        value = value * 10 + (s[p] - '0');
        if (value > 1000000) value = 1000000;  // clamp absurd indices
    }
    i = j + 1;
    return static_cast<int>(value);
}

inline bool ends_with_abbreviation(std::string_view text, const SentenceSplitOptions& options) {
    // `text` ends with the terminator '.'; inspect the word it closes.
    if (text.empty() || text.back() != '.') return false;
    size_t end = text.size() - 1;  // exclude the final dot
    size_t start = end;
    while (start > 0 && !is_space(text[start - 1])) --start;
    if (start == end) return false;  // bare dot
    std::string word = lowercase(text.substr(start, end - start));
    // Initials and enumerations keep their trailing dots out of the check.
    for (const auto& abbr : options.abbreviations) {
        if (word == abbr || word == abbr + ".") return true;
    }
    return false;
}

}  // namespace detail

/// Splits a section body into sentences. Sentences end after `.` `!` `?`;
/// a run of `[k]` markers and closing quotes/brackets right after the
/// terminator attaches to the preceding sentence. Markers anywhere are
/// stripped from the text and recorded as that sentence's citations.
inline std::vector<Sentence> split_sentences(std::string_view body,
                                             const SentenceSplitOptions& options = {}) {
    std::vector<Sentence> sentences;
    std::string text;
    std::set<int> citations;

    auto flush = [&]() {
        std::string trimmed = trim(text);
        if (!trimmed.empty()) {
            Sentence s;
            s.text = std::move(trimmed);
            s.citations.assign(citations.begin(), citations.end());
            s.word_count = word_count(s.text);
            sentences.push_back(std::move(s));
        }
        text.clear();
        citations.clear();
    };

    size_t i = 0;
    while (i < body.size()) {
        if (auto k = detail::take_citation_marker(body, i)) {
            citations.insert(*k);
            continue;
        }
        char c = body[i];
        text.push_back(c);
        ++i;
        if (c != '.' && c != '!' && c != '?') continue;
        if (c == '.' && detail::ends_with_abbreviation(text, options)) continue;

        // Attach trailing markers and closing punctuation, then require
        // whitespace (or end of input) for a boundary.
        size_t probe = i;
        std::vector<int> pending;
        std::string closers;
        while (probe < body.size()) {
            if (auto k = detail::take_citation_marker(body, probe)) {
                pending.push_back(*k);
            } else if (detail::is_closing_punct(body[probe])) {
                closers.push_back(body[probe]);
                ++probe;
            } else {
                break;
            }
        }
        if (probe < body.size() && !is_space(body[probe])) continue;  // e.g. "3.5"

        for (int k : pending) citations.insert(k);
        text += closers;
        i = probe;
        flush();
    }
    flush();
    return sentences;
}

namespace detail {

/// Recognizes `==Title==` style headers (two or more '=' on each side,
/// inner whitespace ignored). Returns the normalized title.
inline std::optional<std::string> header_title(std::string_view line) {
    std::string s = trim(line);
    if (s.size() < 5) return std::nullopt;
    size_t lead = 0;
    while (lead < s.size() && s[lead] == '=') ++lead;
    size_t tail = 0;
    while (tail < s.size() - lead && s[s.size() - 1 - tail] == '=') ++tail;
    if (lead < 2 || tail < 2) return std::nullopt;
    if (lead + tail >= s.size()) return std::nullopt;
    std::string title = trim(s.substr(lead, s.size() - lead - tail));
    if (title.empty()) return std::nullopt;
    return title;
}

}  // namespace detail

/// Parses raw generated text into sections and sentences. Text before the
/// first header becomes an implicit "Introduction" section when non-empty.
inline Article parse_article(std::string_view raw, std::string keyword,
                             const SentenceSplitOptions& options = {}) {
    Article article;
    article.keyword = std::move(keyword);

    std::optional<std::string> current_title;
    std::string body;

    auto flush_section = [&]() {
        auto sentences = split_sentences(body, options);
        body.clear();
        if (!current_title.has_value()) {
            // Preamble before the first header.
            if (sentences.empty()) return;
            current_title = "Introduction";
        }
        Section section;
        section.title = *current_title;
        section.sentences = std::move(sentences);
        article.sections.push_back(std::move(section));
    };

    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line =
            raw.substr(pos, eol == std::string_view::npos ? raw.size() - pos : eol - pos);
        if (auto title = detail::header_title(line)) {
            flush_section();
            current_title = *title;
        } else {
            body.append(line);
            body.push_back('\n');
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    flush_section();

    for (const auto& section : article.sections)
        for (const auto& sentence : section.sentences) article.total_words += sentence.word_count;
    return article;
}

/// Parses the mandated outline reply format: numbered `n. <Title>` lines.
/// Throws when no numbered line is present.
inline Outline parse_outline(std::string_view raw) {
    Outline outline;
    outline.raw = std::string(raw);
    size_t pos = 0;
    while (pos <= raw.size()) {
        size_t eol = raw.find('\n', pos);
        std::string_view line =
            raw.substr(pos, eol == std::string_view::npos ? raw.size() - pos : eol - pos);
        std::string s = trim(line);
        size_t digits = 0;
        while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
        if (digits > 0 && digits < s.size() && s[digits] == '.') {
            std::string title = trim(std::string_view(s).substr(digits + 1));
            if (title.size() >= 2 && title.front() == '<' && title.back() == '>')
                title = trim(std::string_view(title).substr(1, title.size() - 2));
            if (!title.empty()) outline.titles.push_back(title);
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    if (outline.titles.empty())
        throw ParseError("no numbered outline lines found in reply: " + outline.raw);
    return outline;
}

// ---------------------------------------------------------------------------
// Serialization (article.json)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json article_to_json(const Article& article) {
    nlohmann::ordered_json j;
    j["keyword"] = article.keyword;
    auto sections = nlohmann::ordered_json::array();
    for (const auto& section : article.sections) {
        nlohmann::ordered_json s;
        s["title"] = section.title;
        auto sentences = nlohmann::ordered_json::array();
        for (const auto& sentence : section.sentences) {
            nlohmann::ordered_json item;
            item["text"] = sentence.text;
            item["citations"] = sentence.citations;
            sentences.push_back(std::move(item));
        }
        s["sentences"] = std::move(sentences);
        sections.push_back(std::move(s));
    }
    j["sections"] = std::move(sections);
    return j;
}

inline Article article_from_json(const nlohmann::json& j) {
    Article article;
    article.keyword = j.value("keyword", "");
    if (j.contains("sections")) {
        for (const auto& s : j.at("sections")) {
            Section section;
            section.title = s.value("title", "");
            if (s.contains("sentences")) {
                for (const auto& item : s.at("sentences")) {
                    Sentence sentence;
                    sentence.text = item.value("text", "");
                    if (item.contains("citations"))
                        for (const auto& k : item.at("citations"))
                            sentence.citations.push_back(k.get<int>());
                    sentence.word_count = word_count(sentence.text);
                    article.total_words += sentence.word_count;
                    section.sentences.push_back(std::move(sentence));
                }
            }
            article.sections.push_back(std::move(section));
        }
    }
    return article;
}

}  // namespace wikigen
