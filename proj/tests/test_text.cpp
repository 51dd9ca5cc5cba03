#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pulso/text.hpp"
#include "support/oracles.hpp"

using pulso::Lexicon;
using pulso::ScorerOptions;
using pulso::SentenceScore;
using Tokens = std::vector<std::string>;

namespace {

Lexicon small_lexicon() {
    return Lexicon::build({"macri", "scioli"}, {{"macri", "mauricio macri"}, {"macri", "#cambiemos"}},
                          {"gana", "esperanza", ":)"}, {"miente", "no gana", "aumentará los impuestos"});
}

const Lexicon &bundled() {
    static const Lexicon lx = pulso::load_lexicon(pulso::LexiconPaths::in_directory(PULSO_DATA_DIR "/lexicon"));
    return lx;
}

oracle::PlainLexicon plain(const Lexicon &lx) {
    return {lx.attributes(), lx.synonyms(), lx.positive_words(), lx.negative_words()};
}

std::string join(const Tokens &t) {
    std::string s;
    for (const auto &w : t) s += (s.empty() ? "" : " ") + w;
    return s;
}

}  // namespace

TEST(Segment, SplitsAfterTerminatorsAndNewlines) {
    EXPECT_EQ(pulso::segment_sentences("Gana Macri. CampañaDeMiedo"), (Tokens{"Gana Macri.", "CampañaDeMiedo"}));
    EXPECT_EQ(pulso::segment_sentences("¿Vamos? ¡Sí!\nchau"), (Tokens{"¿Vamos?", "¡Sí!", "chau"}));
    EXPECT_EQ(pulso::segment_sentences("espera… ya"), (Tokens{"espera…", "ya"}));
    EXPECT_EQ(pulso::segment_sentences("uno\r\ndos"), (Tokens{"uno", "dos"}));
}

TEST(Segment, KeepsInnerPunctuation) {
    EXPECT_EQ(pulso::segment_sentences("v1.5 sale hoy"), (Tokens{"v1.5 sale hoy"}));
    EXPECT_EQ(pulso::segment_sentences("ver https://t.co/a.b"), (Tokens{"ver https://t.co/a.b"}));
}

TEST(Segment, DropsEmptySegments) {
    EXPECT_TRUE(pulso::segment_sentences("").empty());
    EXPECT_TRUE(pulso::segment_sentences("  \n\n ").empty());
    EXPECT_EQ(pulso::segment_sentences("a.  \n\n b"), (Tokens{"a.", "b"}));
}

TEST(Tokenize, StripsPunctuationAndFolds) {
    const ScorerOptions opt;
    EXPECT_EQ(pulso::tokenize("¡Macri, GANA!", opt), (Tokens{"macri", "gana"}));
    EXPECT_EQ(pulso::tokenize("#Cambiemos! @mauriciomacri:", opt), (Tokens{"#cambiemos", "@mauriciomacri"}));
    EXPECT_EQ(pulso::tokenize("\"Aníbal\" ... ok", opt), (Tokens{"aníbal", "ok"}));
}

TEST(Tokenize, LinkAndEntityFilters) {
    ScorerOptions opt;
    EXPECT_EQ(pulso::tokenize("mirá https://t.co/xyz HTTP://A.B ya", opt), (Tokens{"mirá", "ya"}));
    opt.filter_links = false;
    EXPECT_EQ(pulso::tokenize("mirá https://t.co/xyz", opt).size(), 2u);
    opt = {};
    opt.filter_user_mentions = true;
    EXPECT_EQ(pulso::tokenize("hola @mauriciomacri #Cambiemos", opt), (Tokens{"hola", "#cambiemos"}));
    opt.filter_hashtags = true;
    EXPECT_EQ(pulso::tokenize("hola @mauriciomacri #Cambiemos", opt), (Tokens{"hola"}));
}

TEST(Tokenize, KeepsDictionaryTokensVerbatim) {
    const auto lx = small_lexicon();
    EXPECT_EQ(pulso::tokenize("bien :) ok", {}), (Tokens{"bien", "ok"}));
    EXPECT_EQ(pulso::tokenize("bien :) ok", {}, &lx), (Tokens{"bien", ":)", "ok"}));
}

TEST(Score, SingleWordExamples) {
    const auto lx = small_lexicon();
    EXPECT_EQ(pulso::score_sentence({"macri", "gana"}, lx), (SentenceScore{"macri", 1}));
    EXPECT_EQ(pulso::score_sentence({"hoy", "llueve"}, lx), (SentenceScore{std::nullopt, 0}));
    EXPECT_EQ(pulso::score_sentence({}, lx), (SentenceScore{std::nullopt, 0}));
    EXPECT_EQ(pulso::score_sentence({"gana", "gana", "miente"}, lx), (SentenceScore{std::nullopt, 1}));
}

TEST(Score, PhraseExamples) {
    const auto lx = small_lexicon();
    EXPECT_EQ(pulso::score_sentence({"scioli", "aumentará", "los", "impuestos"}, lx), (SentenceScore{"scioli", -1}));
    // longest match wins over the embedded positive word
    EXPECT_EQ(pulso::score_sentence({"macri", "no", "gana"}, lx), (SentenceScore{"macri", -1}));
    EXPECT_EQ(pulso::score_sentence({"mauricio", "macri", "gana"}, lx), (SentenceScore{"macri", 1}));
    // an incomplete phrase does not score
    EXPECT_EQ(pulso::score_sentence({"aumentará", "los"}, lx), (SentenceScore{std::nullopt, 0}));
}

TEST(Score, FirstAttributeNamesTheSentence) {
    const auto lx = small_lexicon();
    EXPECT_EQ(pulso::score_sentence({"scioli", "gana", "macri"}, lx), (SentenceScore{"scioli", 1}));
    EXPECT_EQ(pulso::score_sentence({"#cambiemos", "scioli"}, lx), (SentenceScore{"macri", 0}));
}

TEST(Score, AttributeTokensAreConsumed) {
    const auto lx = Lexicon::build({"macri"}, {{"macri", "cambiemos"}}, {"cambiemos", "gana"}, {});
    EXPECT_EQ(pulso::score_sentence({"cambiemos", "gana"}, lx), (SentenceScore{"macri", 1}));
}

TEST(AnalyzeTweet, TwoSentenceExample) {
    pulso::TweetRecord r;
    r.id = 42;
    r.screen_name = "votante";
    r.text = "Gana Macri. CampañaDeMiedo";
    r.retweeted_text = "Scioli miente";
    const auto rows = pulso::analyze_tweet(r, bundled());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (pulso::SentenceSentiment{42, "votante", 0, "macri", 1}));
    EXPECT_EQ(rows[1], (pulso::SentenceSentiment{42, "votante", 1, std::nullopt, -1}));
}

TEST(AnalyzeTweet, EmoticonAndHashtagSynonym) {
    pulso::TweetRecord r;
    r.text = "#MacriPresidente :)";
    const auto rows = pulso::analyze_tweet(r, bundled());
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].attribute, "macri");
    EXPECT_EQ(rows[0].sentiment_score, 1);
}

TEST(ScoreProperty, MatchesBruteForceOracle) {
    std::mt19937_64 rng(2015);
    const Tokens vocab{"macri", "scioli", "mauricio", "daniel", "gana", "no", "los", "impuestos", "aumentará",
                       "miente", "hoy", "el", "cambio", "#cambiemos", "futuro"};
    const std::vector<std::string> phrases{"gana", "no gana", "aumentará los impuestos", "miente", "el cambio",
                                           "futuro", "los", "hoy el cambio", "no"};
    for (int round = 0; round < 1000; ++round) {
        // random split of phrases into positive / negative
        std::vector<std::string> pos, neg;
        for (const auto &p : phrases) {
            const auto roll = rng() % 3;
            if (roll == 0) pos.push_back(p);
            else if (roll == 1) neg.push_back(p);
        }
        std::vector<std::pair<std::string, std::string>> syn;
        if (rng() % 2) syn.push_back({"macri", "mauricio macri"});
        if (rng() % 2) syn.push_back({"scioli", "daniel"});
        if (rng() % 2) syn.push_back({"macri", "#cambiemos"});
        const auto lx = Lexicon::build({"macri", "scioli"}, syn, pos, neg);

        Tokens tokens(rng() % 12);
        for (auto &t : tokens) t = vocab[rng() % vocab.size()];
        const auto got = pulso::score_sentence(tokens, lx);
        const auto want = oracle::score(tokens, plain(lx));
        ASSERT_EQ(got.attribute, want.attribute) << join(tokens);
        ASSERT_EQ(got.score, want.score) << join(tokens);
    }
}

TEST(ScoreProperty, UnknownTokensDoNotChangeScore) {
    std::mt19937_64 rng(11);
    const auto lx = Lexicon::build({"macri", "scioli"}, {}, {"gana", "bien"}, {"miente", "mal"});
    const Tokens known{"macri", "scioli", "gana", "bien", "miente", "mal"};
    const Tokens unknown{"hoy", "la", "gente", "zzz", "123"};
    for (int round = 0; round < 500; ++round) {
        Tokens tokens(rng() % 8);
        for (auto &t : tokens) t = known[rng() % known.size()];
        const auto base = pulso::score_sentence(tokens, lx);
        for (int k = 0; k < 3; ++k)
            tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng() % (tokens.size() + 1)),
                          unknown[rng() % unknown.size()]);
        EXPECT_EQ(pulso::score_sentence(tokens, lx), base);
    }

    // with phrase entries, unknown tokens at the edges are still neutral
    const auto phrased = small_lexicon();
    const Tokens words{"macri", "no", "gana", "aumentará", "los", "impuestos", "mauricio"};
    for (int round = 0; round < 500; ++round) {
        Tokens tokens(rng() % 8);
        for (auto &t : tokens) t = words[rng() % words.size()];
        const auto base = pulso::score_sentence(tokens, phrased);
        tokens.insert(tokens.begin(), unknown[rng() % unknown.size()]);
        tokens.push_back(unknown[rng() % unknown.size()]);
        EXPECT_EQ(pulso::score_sentence(tokens, phrased), base);
    }
}

TEST(ScoreProperty, PermutationKeepsSingleWordScore) {
    std::mt19937_64 rng(5);
    const auto lx = Lexicon::build({"macri", "scioli"}, {{"macri", "#cambiemos"}}, {"gana", "bien"}, {"miente"});
    const Tokens vocab{"macri", "scioli", "#cambiemos", "gana", "bien", "miente", "hoy"};
    for (int round = 0; round < 500; ++round) {
        Tokens tokens(rng() % 10);
        for (auto &t : tokens) t = vocab[rng() % vocab.size()];
        const auto base = pulso::score_sentence(tokens, lx);
        std::shuffle(tokens.begin(), tokens.end(), rng);
        const auto shuffled = pulso::score_sentence(tokens, lx);
        EXPECT_EQ(shuffled.score, base.score);
        EXPECT_EQ(shuffled.attribute.has_value(), base.attribute.has_value());
    }
}

TEST(TokenizeProperty, LinksAreInvisible) {
    std::mt19937_64 rng(17);
    const Tokens vocab{"Macri", "gana", "¡hoy!", "#Cambiemos", "@x", "aumentará", "los", "impuestos", "ñ"};
    const Tokens links{"https://t.co/abc", "http://x.y/z?q=1", "HTTPS://T.CO/Q"};
    for (int round = 0; round < 500; ++round) {
        Tokens words(rng() % 10);
        for (auto &w : words) w = vocab[rng() % vocab.size()];
        Tokens with = words;
        for (int k = 0; k < 2; ++k)
            with.insert(with.begin() + static_cast<std::ptrdiff_t>(rng() % (with.size() + 1)),
                        links[rng() % links.size()]);
        EXPECT_EQ(pulso::tokenize(join(with), {}), pulso::tokenize(join(words), {}));
    }
}

TEST(AnalyzeProperty, OneRowPerSentence) {
    std::mt19937_64 rng(23);
    const Tokens vocab{"Macri", "gana", "hoy", "Scioli", "miente", "el", ":)", "v1.5"};
    const Tokens ends{". ", "! ", "? ", "\n", "… "};
    for (int round = 0; round < 500; ++round) {
        const std::size_t n = rng() % 5;
        std::string text;
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t words = 1 + rng() % 5;
            for (std::size_t w = 0; w < words; ++w) text += (w ? " " : "") + vocab[rng() % vocab.size()];
            text += ends[rng() % ends.size()];
        }
        const auto rows = pulso::analyze_text(1, "u", text, bundled(), {});
        ASSERT_EQ(rows.size(), n) << text;
        for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].sentence_index, i);
    }
}
