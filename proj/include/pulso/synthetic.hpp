#pragma once

// Deterministic synthetic corpora for tests, benchmarks and demos. The
// vocabulary lines up with the bundled dictionaries and location rules.

#include <array>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pulso/record.hpp"
#include "pulso/tweet.hpp"

namespace pulso::synthetic {

struct CorpusOptions {
    std::size_t tweets = 10000;
    std::uint64_t seed = 2015;
    double duplicate_rate = 0.01;  // re-emit an earlier id
    double malformed_rate = 0.0;   // emit a broken line instead of a record
    double foreign_lang_rate = 0.03;
    double late_rate = 0.05;  // created after polls close
};

namespace detail {

template <std::size_t N>
std::string_view pick(std::mt19937_64 &rng, const std::array<std::string_view, N> &items) {
    return items[rng() % N];
}

inline bool chance(std::mt19937_64 &rng, double p) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace detail

inline TweetRecord make_tweet(std::mt19937_64 &rng, std::int64_t id, const CorpusOptions &opt) {
    using detail::chance;
    using detail::pick;
    static constexpr std::array<std::string_view, 10> kMentions = {
        "Macri", "macri", "MACRI", "#MacriPresidente", "@mauriciomacri",
        "Scioli", "scioli", "#ScioliPresidente", "@danieloscioli", "Mauricio"};
    static constexpr std::array<std::string_view, 8> kPositive = {
        "gana", "#Cambiemos", "ganador", "esperanza", "Cambiemos", "#CaravanaNaranja", "futuro", "confianza"};
    static constexpr std::array<std::string_view, 8> kNegative = {
        "CampañaDeMiedo", "miente", "corrupción", "aumentará los impuestos", "fracaso", "mentira", "2001", "crisis"};
    static constexpr std::array<std::string_view, 12> kFiller = {
        "hoy", "el", "debate", "Argentina", "elecciones", "todos", "porque", "presidente", "la", "gente",
        "balotaje", "votar"};
    static constexpr std::array<std::string_view, 16> kLocations = {
        "CABA, Argentina", "Buenos Aires", "Córdoba, Argentina", "Rosario", "Mendoza", "Salta",
        "Tucumán", "La Plata", "Argentina", "Narnia", "", "Montevideo, Uruguay", "Madrid", "Neuquén",
        "en mi casa", "Caracas"};

    TweetRecord r;
    r.id = id;
    r.screen_name = "user" + std::to_string(rng() % 5000);
    r.user_name = "Usuario " + r.screen_name.substr(4);
    r.followers_count = static_cast<std::int64_t>(rng() % 10000);
    r.lang = chance(rng, opt.foreign_lang_rate) ? "en" : "es";

    // 2015-11-05 00:00 to 2015-11-22 17:59:59 Argentina time, or a bit after
    const std::int64_t start = parse_timestamp("2015-11-05T00:00:00-03:00")->utc_seconds;
    const std::int64_t close = polls_close().utc_seconds;
    const std::int64_t at = chance(rng, opt.late_rate)
                                ? close + 1 + static_cast<std::int64_t>(rng() % (3 * 86400))
                                : start + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(close - start + 1));
    r.created_at = Timestamp{at, -180};

    std::string text;
    const std::size_t sentences = 1 + rng() % 3;
    for (std::size_t s = 0; s < sentences; ++s) {
        const std::size_t words = 2 + rng() % 6;
        std::string sentence;
        for (std::size_t w = 0; w < words; ++w) {
            std::string_view word;
            const auto roll = rng() % 10;
            if (roll < 2) word = pick(rng, kMentions);
            else if (roll < 4) word = pick(rng, kPositive);
            else if (roll < 5) word = pick(rng, kNegative);
            else word = pick(rng, kFiller);
            if (!sentence.empty()) sentence += ' ';
            sentence += word;
        }
        if (chance(rng, 0.1)) sentence += " https://t.co/x" + std::to_string(rng() % 1000);
        text += sentence;
        text += (s + 1 < sentences) ? (chance(rng, 0.5) ? ". " : "!\n") : "";
    }
    r.text = std::move(text);

    if (const auto loc = pick(rng, kLocations); !loc.empty()) r.user_location = std::string(loc);
    if (chance(rng, 0.2)) r.retweet_count = static_cast<std::int64_t>(rng() % 100);
    if (chance(rng, 0.1)) r.hashtag_0 = "Balotaje2015";
    return r;
}

/// Writes `opt.tweets` lines of JSON records.
inline void write_corpus(std::ostream &out, const CorpusOptions &opt) {
    std::mt19937_64 rng(opt.seed);
    std::int64_t next_id = 1000;
    for (std::size_t i = 0; i < opt.tweets; ++i) {
        if (detail::chance(rng, opt.malformed_rate)) {
            out << "{\"id\": " << next_id++ << ", \"text\": \"truncated\n";
            continue;
        }
        std::int64_t id = next_id++;
        if (i > 0 && detail::chance(rng, opt.duplicate_rate)) id = 1000 + static_cast<std::int64_t>(rng() % i);
        out << to_json_line(make_tweet(rng, id, opt)) << '\n';
    }
}

}  // namespace pulso::synthetic
