#include "wikigen/metrics_ngram.hpp"

#include <gtest/gtest.h>

#include <random>

#include "ngram_fixtures.hpp"

namespace wikigen {
namespace {

// Example hand derivations behind the frozen fixture table:
//   cat_sat  BLEU: p1..p3 = 1, p4 smoothed to 1, BP = exp(1 - 4/3)
//   cat_prefix ROUGE-L: lcs=2, P=1, R=2/3, F = 2.44*P*R/(R+1.44*P)
//   reordered METEOR: 3 matches in 3 chunks, penalty = 0.5*(3/3)^3 = 0.5
TEST(NgramMetrics, FrozenFixtureValues) {
    for (const auto& fixture : wikigen::testing::kNgramFixtures) {
        auto cand = split_words(fixture.cand);
        auto ref = split_words(fixture.ref);
        EXPECT_NEAR(bleu_n(cand, ref, 1).value, fixture.b1, 1e-6) << fixture.name;
        EXPECT_NEAR(bleu_n(cand, ref, 4).value, fixture.b4, 1e-6) << fixture.name;
        EXPECT_NEAR(rouge_l(cand, ref).value, fixture.rouge_l, 1e-6) << fixture.name;
        EXPECT_NEAR(meteor(cand, ref).value, fixture.meteor, 1e-6) << fixture.name;
    }
}

TEST(NgramMetrics, IdentityScoresHundred) {
    TokenList tokens = split_words("eight teams played twelve games in june");
    EXPECT_DOUBLE_EQ(bleu_n(tokens, tokens, 1).value, 100.0);
    EXPECT_DOUBLE_EQ(bleu_n(tokens, tokens, 4).value, 100.0);
    EXPECT_DOUBLE_EQ(rouge_l(tokens, tokens).value, 100.0);
    // METEOR identity equals its closed form 100*(1 - 0.5/m^3).
    double m = static_cast<double>(tokens.size());
    EXPECT_NEAR(meteor(tokens, tokens).value, 100.0 * (1.0 - 0.5 / (m * m * m)), 1e-9);
}

TEST(NgramMetrics, EmptyCandidateIsZero) {
    TokenList empty;
    TokenList ref = {"a", "b"};
    EXPECT_DOUBLE_EQ(bleu_n(empty, ref, 4).value, 0.0);
    EXPECT_DOUBLE_EQ(rouge_l(empty, ref).value, 0.0);
    EXPECT_DOUBLE_EQ(meteor(empty, ref).value, 0.0);
    EXPECT_DOUBLE_EQ(bleu_n(ref, empty, 4).value, 0.0);
    EXPECT_DOUBLE_EQ(rouge_l(ref, empty).value, 0.0);
    EXPECT_DOUBLE_EQ(meteor(ref, empty).value, 0.0);
}

TEST(NgramMetrics, RemovingSharedTokensDrivesToZero) {
    TokenList cand = {"x1", "x2", "x3"};
    TokenList ref = {"y1", "y2", "y3"};
    EXPECT_DOUBLE_EQ(bleu_n(cand, ref, 4).value, 0.0);
    EXPECT_DOUBLE_EQ(rouge_l(cand, ref).value, 0.0);
    EXPECT_DOUBLE_EQ(meteor(cand, ref).value, 0.0);
}

TEST(NgramMetrics, StemStageAligns) {
    // "running" and "runs" only match through the stemmer.
    TokenList cand = {"running"};
    TokenList ref = {"runs"};
    EXPECT_GT(meteor(cand, ref).value, 0.0);
    EXPECT_DOUBLE_EQ(bleu_n(cand, ref, 1).value, 0.0);
}

TEST(NgramMetrics, DeterministicAcrossCalls) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> vocab(0, 9), length(1, 40);
    for (int trial = 0; trial < 25; ++trial) {
        TokenList cand, ref;
        int cl = length(rng), rl = length(rng);
        for (int i = 0; i < cl; ++i) cand.push_back("w" + std::to_string(vocab(rng)));
        for (int i = 0; i < rl; ++i) ref.push_back("w" + std::to_string(vocab(rng)));
        double b = bleu_n(cand, ref, 4).value;
        double r = rouge_l(cand, ref).value;
        double m = meteor(cand, ref).value;
        EXPECT_DOUBLE_EQ(bleu_n(cand, ref, 4).value, b);
        EXPECT_DOUBLE_EQ(rouge_l(cand, ref).value, r);
        EXPECT_DOUBLE_EQ(meteor(cand, ref).value, m);
        EXPECT_GE(b, 0.0);
        EXPECT_LE(b, 100.0);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 100.0);
        EXPECT_GE(m, 0.0);
        EXPECT_LE(m, 100.0);
    }
}

TEST(NgramMetrics, OrderValidation) {
    TokenList t = {"a"};
    EXPECT_THROW(bleu_n(t, t, 0), Error);
    EXPECT_THROW(bleu_n(t, t, 5), Error);
}

}  // namespace
}  // namespace wikigen
