#pragma once

// Dataset schema and loading: reference wiki pages, related documents, the
// construction-time acceptance filters, and fixed-size document chunking.
//
// On-disk layout: one directory per entry, holding `wikipage.json` and
// `related_docs.jsonl` (one document object per line), UTF-8 throughout.

#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wikigen/error.hpp"
#include "wikigen/text.hpp"

namespace wikigen {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

enum class DocSource { Human, Search };

inline std::string to_string(DocSource source) {
    return source == DocSource::Human ? "human" : "search";
}

inline DocSource parse_doc_source(const std::string& s, const std::string& where) {
    if (s == "human") return DocSource::Human;
    if (s == "search") return DocSource::Search;
    throw ParseError(where + ": field 'source' must be \"human\" or \"search\", got \"" + s + "\"");
}

struct InfoboxEntry {
    std::string key;
    std::string value;

    bool operator==(const InfoboxEntry&) const = default;
};

struct WikiSection {
    std::string title;
    std::string content;

    bool operator==(const WikiSection&) const = default;
};

struct WikiPage {
    std::string id;
    std::string keyword;  // the event name
    std::string url;
    std::string summary;
    std::vector<WikiSection> sections;
    std::vector<InfoboxEntry> infobox;

    bool operator==(const WikiPage&) const = default;

    /// Summary plus all section contents, in source order.
    std::string full_text() const {
        std::string out = summary;
        for (const auto& section : sections) {
            if (!out.empty()) out += "\n";
            out += section.content;
        }
        return out;
    }
};

struct RelatedDocument {
    int doc_id = 0;  // positive, unique within an entry
    std::string title;
    std::string url;
    std::string content;
    DocSource source = DocSource::Human;

    bool operator==(const RelatedDocument&) const = default;
};

struct DatasetEntry {
    std::string event;  // equals wikipage.keyword
    WikiPage wikipage;
    std::vector<RelatedDocument> related_docs;

    bool operator==(const DatasetEntry&) const = default;
};

/// A <=256-word segment of a document; the unit of retrieval and citation.
struct Chunk {
    long chunk_id = 0;   // global ordinal within one corpus
    int doc_id = 0;      // source document
    int chunk_index = 0; // ordinal within the document
    std::vector<std::string> words;
    int word_count = 0;

    bool operator==(const Chunk&) const = default;

    std::string text() const {
        std::string out;
        for (size_t i = 0; i < words.size(); ++i) {
            if (i) out.push_back(' ');
            out += words[i];
        }
        return out;
    }
};

constexpr int kChunkWords = 256;

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline void validate_page(const WikiPage& page, const std::string& where) {
    if (page.keyword.empty())
        throw ValidationError(where + ": field 'keyword' must be non-empty");
    for (size_t i = 0; i < page.sections.size(); ++i) {
        if (page.sections[i].title.empty())
            throw ValidationError(where + ": field 'sections[" + std::to_string(i) +
                                  "].title' must be non-empty");
    }
    for (size_t i = 0; i < page.infobox.size(); ++i) {
        if (page.infobox[i].key.empty())
            throw ValidationError(where + ": field 'infobox[" + std::to_string(i) +
                                  "].key' must be non-empty");
    }
}

inline void validate_entry_record(const DatasetEntry& entry, const std::string& where) {
    validate_page(entry.wikipage, where);
    if (entry.event != entry.wikipage.keyword)
        throw ValidationError(where + ": entry event must equal wikipage keyword");
    std::set<int> seen;
    for (const auto& doc : entry.related_docs) {
        if (doc.doc_id <= 0)
            throw ValidationError(where + ": field 'doc_id' must be positive, got " +
                                  std::to_string(doc.doc_id));
        if (!seen.insert(doc.doc_id).second)
            throw ValidationError(where + ": duplicate doc_id " + std::to_string(doc.doc_id));
    }
}

/// Construction-time acceptance filter. Checks run in a fixed order and the
/// verdict carries the first failing rule.
struct FilterVerdict {
    bool accepted = false;
    std::string reason;  // empty when accepted
};

inline FilterVerdict validate_entry(int page_word_count, int link_count,
                                    double crawl_success_rate, bool created_after_cutoff) {
    if (page_word_count < 1000 || page_word_count > 3000)
        return {false, "word-count"};
    if (link_count < 10 || link_count > 100)
        return {false, "link-count"};
    if (!(crawl_success_rate > 0.40))
        return {false, "crawl-rate"};
    if (!created_after_cutoff)
        return {false, "creation-date"};
    return {true, ""};
}

// ---------------------------------------------------------------------------
// Chunking
// ---------------------------------------------------------------------------

/// Greedy fixed-size segmentation: consecutive windows of `chunk_words`
/// words, the final chunk holding the remainder. Concatenating a document's
/// chunks in order reproduces its word sequence exactly.
inline std::vector<Chunk> chunk_document(const RelatedDocument& doc, long first_chunk_id = 0,
                                         int chunk_words = kChunkWords) {
    std::vector<Chunk> chunks;
    std::vector<std::string> words = split_words(doc.content);
    long chunk_id = first_chunk_id;
    int index = 0;
    for (size_t start = 0; start < words.size(); start += static_cast<size_t>(chunk_words)) {
        size_t end = std::min(words.size(), start + static_cast<size_t>(chunk_words));
        Chunk chunk;
        chunk.chunk_id = chunk_id++;
        chunk.doc_id = doc.doc_id;
        chunk.chunk_index = index++;
        chunk.words.assign(words.begin() + static_cast<long>(start),
                           words.begin() + static_cast<long>(end));
        chunk.word_count = static_cast<int>(chunk.words.size());
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

/// Chunk a whole document list, assigning global chunk ordinals in document
/// order.
inline std::vector<Chunk> chunk_documents(const std::vector<RelatedDocument>& docs,
                                          int chunk_words = kChunkWords) {
    std::vector<Chunk> all;
    for (const auto& doc : docs) {
        auto chunks = chunk_document(doc, static_cast<long>(all.size()), chunk_words);
        all.insert(all.end(), std::make_move_iterator(chunks.begin()),
                   std::make_move_iterator(chunks.end()));
    }
    return all;
}

/// Pseudo documents built from the reference page itself (summary first,
/// then each section); the corpus used by golden retrieval.
inline std::vector<RelatedDocument> wikipage_documents(const WikiPage& page) {
    std::vector<RelatedDocument> docs;
    int next_id = 1;
    if (word_count(page.summary) > 0) {
        RelatedDocument doc;
        doc.doc_id = next_id++;
        doc.title = "Summary";
        doc.url = page.url;
        doc.content = page.summary;
        doc.source = DocSource::Human;
        docs.push_back(std::move(doc));
    }
    for (const auto& section : page.sections) {
        if (word_count(section.content) == 0) continue;
        RelatedDocument doc;
        doc.doc_id = next_id++;
        doc.title = section.title;
        doc.url = page.url;
        doc.content = section.content;
        doc.source = DocSource::Human;
        docs.push_back(std::move(doc));
    }
    return docs;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace detail {

inline const json& require_field(const json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end())
        throw ParseError(where + ": missing field '" + std::string(name) + "'");
    return *it;
}

inline std::string require_string(const json& j, const char* name, const std::string& where) {
    const json& field = require_field(j, name, where);
    if (!field.is_string())
        throw ParseError(where + ": field '" + std::string(name) + "' must be a string");
    return field.get<std::string>();
}

}  // namespace detail

inline ojson page_to_json(const WikiPage& page) {
    ojson j;
    j["id"] = page.id;
    j["keyword"] = page.keyword;
    j["url"] = page.url;
    j["summary"] = page.summary;
    ojson sections = ojson::array();
    for (const auto& section : page.sections) {
        ojson s;
        s["title"] = section.title;
        s["content"] = section.content;
        sections.push_back(std::move(s));
    }
    j["sections"] = std::move(sections);
    ojson infobox = ojson::array();
    for (const auto& entry : page.infobox) {
        ojson e;
        e["key"] = entry.key;
        e["value"] = entry.value;
        infobox.push_back(std::move(e));
    }
    j["infobox"] = std::move(infobox);
    return j;
}

inline WikiPage page_from_json(const json& j, const std::string& where) {
    WikiPage page;
    page.id = detail::require_string(j, "id", where);
    page.keyword = detail::require_string(j, "keyword", where);
    page.url = detail::require_string(j, "url", where);
    page.summary = detail::require_string(j, "summary", where);
    const json& sections = detail::require_field(j, "sections", where);
    if (!sections.is_array()) throw ParseError(where + ": field 'sections' must be an array");
    for (const auto& s : sections) {
        WikiSection section;
        section.title = detail::require_string(s, "title", where + " sections");
        section.content = detail::require_string(s, "content", where + " sections");
        page.sections.push_back(std::move(section));
    }
    const json& infobox = detail::require_field(j, "infobox", where);
    if (!infobox.is_array()) throw ParseError(where + ": field 'infobox' must be an array");
    for (const auto& e : infobox) {
        InfoboxEntry entry;
        entry.key = detail::require_string(e, "key", where + " infobox");
        entry.value = detail::require_string(e, "value", where + " infobox");
        page.infobox.push_back(std::move(entry));
    }
    validate_page(page, where);
    return page;
}

inline ojson document_to_json(const RelatedDocument& doc) {
    ojson j;
    j["doc_id"] = doc.doc_id;
    j["title"] = doc.title;
    j["url"] = doc.url;
    j["content"] = doc.content;
    j["source"] = to_string(doc.source);
    return j;
}

inline RelatedDocument document_from_json(const json& j, const std::string& where) {
    RelatedDocument doc;
    const json& id = detail::require_field(j, "doc_id", where);
    if (!id.is_number_integer())
        throw ParseError(where + ": field 'doc_id' must be an integer");
    doc.doc_id = id.get<int>();
    doc.title = detail::require_string(j, "title", where);
    doc.url = detail::require_string(j, "url", where);
    doc.content = detail::require_string(j, "content", where);
    doc.source = parse_doc_source(detail::require_string(j, "source", where), where);
    return doc;
}

inline void save_entry(const std::filesystem::path& dir, const DatasetEntry& entry) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "wikipage.json");
        out << page_to_json(entry.wikipage).dump(2) << "\n";
    }
    {
        std::ofstream out(dir / "related_docs.jsonl");
        for (const auto& doc : entry.related_docs) out << document_to_json(doc).dump() << "\n";
    }
}

inline DatasetEntry load_entry(const std::filesystem::path& dir) {
    const auto page_path = dir / "wikipage.json";
    std::ifstream page_in(page_path);
    if (!page_in) throw ParseError("cannot open " + page_path.string());
    json page_json;
    try {
        page_in >> page_json;
    } catch (const json::exception& e) {
        throw ParseError(page_path.string() + ": " + e.what());
    }

    DatasetEntry entry;
    entry.wikipage = page_from_json(page_json, page_path.string());
    entry.event = entry.wikipage.keyword;

    const auto docs_path = dir / "related_docs.jsonl";
    std::ifstream docs_in(docs_path);
    if (!docs_in) throw ParseError("cannot open " + docs_path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(docs_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::string where = docs_path.string() + " line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        entry.related_docs.push_back(document_from_json(j, where));
    }
    validate_entry_record(entry, dir.string());
    return entry;
}

/// Loads every entry directory under `path`, in name order.
inline std::vector<DatasetEntry> load_dataset(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw ParseError("dataset path does not exist: " + path.string());
    std::vector<std::filesystem::path> dirs;
    for (const auto& item : std::filesystem::directory_iterator(path)) {
        if (item.is_directory() && std::filesystem::exists(item.path() / "wikipage.json"))
            dirs.push_back(item.path());
    }
    std::sort(dirs.begin(), dirs.end());
    std::vector<DatasetEntry> entries;
    entries.reserve(dirs.size());
    for (const auto& dir : dirs) entries.push_back(load_entry(dir));
    return entries;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct DatasetStats {
    int events = 0;
    int related_docs = 0;
    long total_words = 0;
    double avg_sections = 0.0;
    double avg_page_words = 0.0;
    double avg_human_docs = 0.0;
    double avg_human_words = 0.0;
    double avg_search_docs = 0.0;
    double avg_search_words = 0.0;
};

inline DatasetStats dataset_stats(const std::vector<DatasetEntry>& entries) {
    DatasetStats stats;
    stats.events = static_cast<int>(entries.size());
    if (entries.empty()) return stats;
    long sections = 0, page_words = 0, human_docs = 0, human_words = 0;
    long search_docs = 0, search_words = 0;
    for (const auto& entry : entries) {
        sections += static_cast<long>(entry.wikipage.sections.size());
        page_words += word_count(entry.wikipage.full_text());
        for (const auto& doc : entry.related_docs) {
            long words = word_count(doc.content);
            if (doc.source == DocSource::Human) {
                ++human_docs;
                human_words += words;
            } else {
                ++search_docs;
                search_words += words;
            }
        }
    }
    stats.related_docs = static_cast<int>(human_docs + search_docs);
    stats.total_words = page_words + human_words + search_words;
    double n = static_cast<double>(entries.size());
    stats.avg_sections = static_cast<double>(sections) / n;
    stats.avg_page_words = static_cast<double>(page_words) / n;
    stats.avg_human_docs = static_cast<double>(human_docs) / n;
    stats.avg_human_words = static_cast<double>(human_words) / n;
    stats.avg_search_docs = static_cast<double>(search_docs) / n;
    stats.avg_search_words = static_cast<double>(search_words) / n;
    return stats;
}

}  // namespace wikigen
