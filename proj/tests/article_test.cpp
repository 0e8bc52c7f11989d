#include "wikigen/article.hpp"

#include <gtest/gtest.h>

namespace wikigen {
namespace {

TEST(SplitSentences, CitationsAttachToPrecedingSentence) {
    auto sentences = split_sentences("A.[1][2] B.[3]");
    ASSERT_EQ(sentences.size(), 2u);
    EXPECT_EQ(sentences[0].text, "A.");
    EXPECT_EQ(sentences[0].citations, (std::vector<int>{1, 2}));
    EXPECT_EQ(sentences[1].text, "B.");
    EXPECT_EQ(sentences[1].citations, (std::vector<int>{3}));
}

TEST(SplitSentences, NoCitations) {
    auto sentences = split_sentences("No citations here.");
    ASSERT_EQ(sentences.size(), 1u);
    EXPECT_EQ(sentences[0].text, "No citations here.");
    EXPECT_TRUE(sentences[0].citations.empty());
    EXPECT_EQ(sentences[0].word_count, 3);
}

TEST(SplitSentences, SortsAndDedupesCitations) {
    auto sentences = split_sentences("X happened.[2] It ended.[2][1]");
    ASSERT_EQ(sentences.size(), 2u);
    EXPECT_EQ(sentences[0].citations, (std::vector<int>{2}));
    EXPECT_EQ(sentences[1].citations, (std::vector<int>{1, 2}));
}

TEST(SplitSentences, MidSentenceMarkersAttachToEnclosingSentence) {
    auto sentences = split_sentences("The match[3] was played at Wembley.[2]");
    ASSERT_EQ(sentences.size(), 1u);
    EXPECT_EQ(sentences[0].text, "The match was played at Wembley.");
    EXPECT_EQ(sentences[0].citations, (std::vector<int>{2, 3}));
}

TEST(SplitSentences, MarkersAreNotWords) {
    auto sentences = split_sentences("It rained.[1][2]");
    ASSERT_EQ(sentences.size(), 1u);
    EXPECT_EQ(sentences[0].word_count, 2);
    EXPECT_EQ(sentences[0].word_count, word_count(sentences[0].text));
}

TEST(SplitSentences, AbbreviationsSuppressSplits) {
    auto sentences = split_sentences("Dr. Smith arrived. The game began.");
    ASSERT_EQ(sentences.size(), 2u);
    EXPECT_EQ(sentences[0].text, "Dr. Smith arrived.");
    EXPECT_EQ(sentences[1].text, "The game began.");
}

TEST(SplitSentences, DecimalsDoNotSplit) {
    auto sentences = split_sentences("Attendance rose 3.5 percent. It fell later.");
    ASSERT_EQ(sentences.size(), 2u);
    EXPECT_EQ(sentences[0].text, "Attendance rose 3.5 percent.");
}

TEST(SplitSentences, QuestionAndExclamation) {
    auto sentences = split_sentences("Really? Yes! Done.");
    ASSERT_EQ(sentences.size(), 3u);
}

TEST(SplitSentences, ClosingQuoteAttaches) {
    auto sentences = split_sentences("He said \"it ended.\"[4] More text followed.");
    ASSERT_EQ(sentences.size(), 2u);
    EXPECT_EQ(sentences[0].text, "He said \"it ended.\"");
    EXPECT_EQ(sentences[0].citations, (std::vector<int>{4}));
}

TEST(SplitSentences, EmptyInput) {
    EXPECT_TRUE(split_sentences("").empty());
    EXPECT_TRUE(split_sentences("   \n\n ").empty());
}

TEST(ParseArticle, SingleSection) {
    auto article = parse_article("==Introduction==\nA fact.[1]", "kw");
    ASSERT_EQ(article.sections.size(), 1u);
    EXPECT_EQ(article.sections[0].title, "Introduction");
    ASSERT_EQ(article.sections[0].sentences.size(), 1u);
    EXPECT_EQ(article.sections[0].sentences[0].text, "A fact.");
    EXPECT_EQ(article.sections[0].sentences[0].citations, (std::vector<int>{1}));
}

TEST(ParseArticle, EmptyInputGivesEmptyArticle) {
    auto article = parse_article("", "kw");
    EXPECT_TRUE(article.sections.empty());
    EXPECT_EQ(article.total_words, 0);
}

TEST(ParseArticle, SixSectionPlayoffShape) {
    std::string raw =
        "==Introduction==\n"
        "The final decided the last promotion place.\n"
        "==Date and Venue==\n"
        "The final was played on May 21.[2] The stadium held ninety thousand.[2]\n"
        "==Teams==\n"
        "Four clubs contested the semi-finals.[2]\n"
        "==Ticket Information==\n"
        "Tickets went on sale in May.[3]\n"
        "==Broadcasting==\n"
        "The match was televised nationally.[3]\n"
        "==Conclusion==\n"
        "The winner joined the higher division.\n";
    auto article = parse_article(raw, "2022 EFL League One play-off final");
    ASSERT_EQ(article.sections.size(), 6u);
    EXPECT_EQ(article.sections[0].title, "Introduction");
    EXPECT_EQ(article.sections[1].title, "Date and Venue");
    EXPECT_EQ(article.sections[2].title, "Teams");
    EXPECT_EQ(article.sections[3].title, "Ticket Information");
    EXPECT_EQ(article.sections[4].title, "Broadcasting");
    EXPECT_EQ(article.sections[5].title, "Conclusion");
    ASSERT_EQ(article.sections[1].sentences.size(), 2u);
}

TEST(ParseArticle, PreambleBecomesIntroduction) {
    auto article = parse_article("Some preamble text.\n==Details==\nBody.", "kw");
    ASSERT_EQ(article.sections.size(), 2u);
    EXPECT_EQ(article.sections[0].title, "Introduction");
    EXPECT_EQ(article.sections[1].title, "Details");
}

TEST(ParseArticle, HeaderVariantsNormalize) {
    auto a = parse_article("== Teams ==\nx.", "kw");
    auto b = parse_article("===Teams===\nx.", "kw");
    auto c = parse_article("==Teams==\nx.", "kw");
    ASSERT_EQ(a.sections.size(), 1u);
    EXPECT_EQ(a.sections[0].title, "Teams");
    EXPECT_EQ(b.sections[0].title, "Teams");
    EXPECT_EQ(c.sections[0].title, "Teams");
}

TEST(ParseArticle, TotalWordsExcludesMarkers) {
    auto article = parse_article("==A==\nTwo words.[1] Three more words.[2]", "kw");
    EXPECT_EQ(article.total_words, 5);
}

TEST(ParseArticle, SerializeRoundTrip) {
    std::string raw =
        "Preamble sentence.\n==Teams==\nFour clubs took part.[1][3] They trained hard.\n"
        "==Results==\nThe final ended 2-1.[2]\n";
    auto article = parse_article(raw, "kw");
    auto j = article_to_json(article);
    auto reparsed = article_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(reparsed, article);
    // And a second serialize yields identical bytes.
    EXPECT_EQ(article_to_json(reparsed).dump(), j.dump());
}

TEST(ParseOutline, NumberedLines) {
    auto outline = parse_outline("1. Introduction\n2. Aftermath");
    EXPECT_EQ(outline.titles, (std::vector<std::string>{"Introduction", "Aftermath"}));
}

TEST(ParseOutline, AngleBracketsStripped) {
    auto outline = parse_outline("1. <Teams>");
    EXPECT_EQ(outline.titles, (std::vector<std::string>{"Teams"}));
}

TEST(ParseOutline, ProseRejected) {
    EXPECT_THROW(parse_outline("no list here"), ParseError);
}

TEST(ParseOutline, SkipsNonNumberedNoise) {
    auto outline = parse_outline("Here is the outline:\n1. Introduction\n2. Venue\nThanks!");
    EXPECT_EQ(outline.titles, (std::vector<std::string>{"Introduction", "Venue"}));
}

}  // namespace
}  // namespace wikigen
