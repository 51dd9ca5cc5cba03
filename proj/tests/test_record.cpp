#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pulso/record.hpp"
#include "pulso/synthetic.hpp"

using pulso::IngestFilter;
using pulso::ParseError;
using pulso::TweetRecord;

namespace {

TweetRecord tweet(std::string text, std::string created = "2015-11-20T10:00:00-03:00") {
    TweetRecord r;
    r.id = 1;
    r.created_at = *pulso::parse_timestamp(created);
    r.screen_name = "alguien";
    r.text = std::move(text);
    r.lang = "es";
    return r;
}

}  // namespace

TEST(ParseRecord, Minimal) {
    const auto r = pulso::parse_record(
        R"({"id": 7, "created_at": "2015-11-20T10:00:00-03:00", "text": "Gana Macri", "lang": "es"})");
    EXPECT_EQ(r.id, 7);
    EXPECT_EQ(r.text, "Gana Macri");
    EXPECT_EQ(r.lang, "es");
    EXPECT_EQ(r.created_at.utc_seconds, 1448024400);
    EXPECT_FALSE(r.user_location.has_value());
    EXPECT_FALSE(r.coordinates.has_value());
}

TEST(ParseRecord, OtherLanguagesParse) {
    const auto r = pulso::parse_record(
        R"({"id": "8", "created_at": "2015-11-20 10:00:00Z", "text": "hi", "lang": "EN-gb", "user.location": null})");
    EXPECT_EQ(r.id, 8);
    EXPECT_EQ(r.lang, "en");
    EXPECT_FALSE(r.user_location.has_value());
}

TEST(ParseRecord, OptionalFields) {
    const auto r = pulso::parse_record(
        R"({"id": 9, "created_at": "2015-11-20T10:00:00-03:00", "text": "t", "lang": "es",
            "user.location": "CABA", "user.followers_count": 12, "coordinates.coordinates.0": -58.4,
            "coordinates.coordinates.1": -34.6, "entities.hashtags.0.text": "Balotaje",
            "retweeted_status.text": "rt"})");
    EXPECT_EQ(r.user_location, "CABA");
    EXPECT_EQ(r.followers_count, 12);
    ASSERT_TRUE(r.coordinates.has_value());
    EXPECT_DOUBLE_EQ(r.coordinates->lat, -34.6);
    EXPECT_EQ(r.hashtag_0, "Balotaje");
    EXPECT_EQ(r.retweeted_text, "rt");
}

TEST(ParseRecord, Rejections) {
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "text": "x)"), ParseError);
    EXPECT_THROW(pulso::parse_record(R"([1, 2])"), ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"created_at": "2015-11-20T10:00:00Z", "text": "x", "lang": "es"})"),
                 ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "text": "x", "lang": "es"})"), ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00", "text": "x", "lang": "es"})"),
                 ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00Z", "lang": "es"})"), ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00Z", "text": "x"})"), ParseError);
    EXPECT_THROW(pulso::parse_record(R"({"id": "x1", "created_at": "2015-11-20T10:00:00Z", "text": "x", "lang": "es"})"),
                 ParseError);
    EXPECT_THROW(
        pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00Z", "text": "x", "lang": "es",
                                "coordinates.coordinates.0": 1.0})"),
        ParseError);
    const std::string long_text(501, 'a');
    EXPECT_THROW(pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00Z", "text": ")" + long_text +
                                     R"(", "lang": "es"})"),
                 ParseError);
}

TEST(ParseRecord, TextLimitCountsCharacters) {
    std::string text;
    for (int i = 0; i < 500; ++i) text += "ñ";
    const auto r = pulso::parse_record(R"({"id": 1, "created_at": "2015-11-20T10:00:00Z", "text": ")" + text +
                                       R"(", "lang": "es"})");
    EXPECT_EQ(r.text.size(), 1000u);
}

TEST(RecordReader, SkipsAndCountsMalformedLines) {
    std::istringstream in(
        "{\"id\": 1, \"created_at\": \"2015-11-20T10:00:00Z\", \"text\": \"a\", \"lang\": \"es\"}\n"
        "{\"id\": 2, \"text\": \"trunc\n"
        "\n"
        "{\"id\": 3, \"created_at\": \"2015-11-20T10:00:00Z\", \"text\": \"b\", \"lang\": \"es\"}\n");
    pulso::RecordReader reader(in);
    std::vector<std::int64_t> ids;
    while (auto r = reader.next()) ids.push_back(r->id);
    EXPECT_EQ(ids, (std::vector<std::int64_t>{1, 3}));
    EXPECT_EQ(reader.parsed(), 2u);
    EXPECT_EQ(reader.malformed(), 1u);
    ASSERT_EQ(reader.errors().size(), 1u);
    EXPECT_NE(reader.errors()[0].find("line 2"), std::string::npos) << reader.errors()[0];
}

TEST(RecordProperty, JsonLineRoundTrip) {
    std::mt19937_64 rng(31);
    pulso::synthetic::CorpusOptions opt;
    for (int i = 0; i < 1000; ++i) {
        auto r = pulso::synthetic::make_tweet(rng, 1000 + i, opt);
        if (rng() % 4 == 0) r.coordinates = pulso::Coordinates{-58.0 - (rng() % 1000) / 997.0, -34.125};
        if (rng() % 4 == 0) r.retweeted_text = "RT \"citado\" \\ ñ";
        if (rng() % 5 == 0) r.created_at.offset_minutes = 330;
        const auto back = pulso::parse_record(pulso::to_json_line(r));
        EXPECT_EQ(back, r);
        EXPECT_EQ(back.created_at.offset_minutes, r.created_at.offset_minutes);
    }
}

TEST(Filter, CutoffIsInclusive) {
    IngestFilter f;
    f.window_end = *pulso::parse_timestamp("2015-11-22T17:59:59-03:00");
    EXPECT_FALSE(pulso::passes_filter(tweet("x", "2015-11-22T18:00:01-03:00"), f));
    EXPECT_TRUE(pulso::passes_filter(tweet("x", "2015-11-22T17:59:59-03:00"), f));
    // same instant written in UTC
    EXPECT_TRUE(pulso::passes_filter(tweet("x", "2015-11-22T20:59:59Z"), f));
    EXPECT_FALSE(pulso::passes_filter(tweet("x", "2015-11-22T21:00:00Z"), f));
    f.window_start = *pulso::parse_timestamp("2015-11-20T00:00:00-03:00");
    EXPECT_FALSE(pulso::passes_filter(tweet("x", "2015-11-19T23:59:59-03:00"), f));
}

TEST(Filter, KeywordsAccountsAndLanguage) {
    IngestFilter f;
    EXPECT_TRUE(pulso::passes_filter(tweet("lo que sea"), f));
    f.keywords = {"Balotaje"};
    EXPECT_TRUE(pulso::passes_filter(tweet("Mañana es el #balotaje2015"), f));
    EXPECT_FALSE(pulso::passes_filter(tweet("nada que ver"), f));
    f.follow_accounts = {"@Alguien"};
    EXPECT_TRUE(pulso::passes_filter(tweet("nada que ver"), f));
    f.lang = "es";
    auto en = tweet("Balotaje");
    en.lang = "en";
    EXPECT_FALSE(pulso::passes_filter(en, f));
}

TEST(Filter, Defaults) {
    const auto f = pulso::default_ingest_filter();
    EXPECT_EQ(f.keywords.size(), pulso::default_keywords().size());
    EXPECT_EQ(f.lang, "es");
    EXPECT_EQ(f.window_end->utc_seconds, 1448225999);
    EXPECT_TRUE(pulso::passes_filter(tweet("Vamos Scioli"), f));
    EXPECT_FALSE(pulso::passes_filter(tweet("Vamos Scioli", "2015-11-22T18:00:00-03:00"), f));
    EXPECT_FALSE(pulso::passes_filter(tweet("hoy llueve"), f));
    auto followed = tweet("hoy llueve");
    followed.screen_name = "LaNacion";
    EXPECT_TRUE(pulso::passes_filter(followed, f));
}

TEST(Filter, WindowMustBeOrdered) {
    IngestFilter f;
    f.window_start = *pulso::parse_timestamp("2015-11-22T00:00:00Z");
    f.window_end = *pulso::parse_timestamp("2015-11-21T00:00:00Z");
    EXPECT_THROW(pulso::FilterMatcher{f}, pulso::Error);
}
