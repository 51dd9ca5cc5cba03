#pragma once

// The published province table: positive-tweet counts, official votes,
// population and the printed percentages (two decimals).

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pulso/aggregation.hpp"
#include "pulso/stats.hpp"

namespace fixture {

struct Row {
    std::string country;
    std::string province;
    std::uint64_t tweets_scioli = 0;
    std::uint64_t tweets_macri = 0;
    std::uint64_t tweets = 0;
    std::optional<std::uint64_t> votes_scioli, votes_macri, votes_total, population;
    std::optional<double> pct_tw_scioli, pct_tw_macri, pct_v_scioli, pct_v_macri;
    double pct_tweets = 0, pct_votes = 0, pct_population = 0;
};

// "4.833.680" -> 4833680
inline std::optional<std::uint64_t> count(const std::string &s) {
    if (s.empty()) return std::nullopt;
    std::string digits;
    for (char c : s)
        if (c != '.') digits += c;
    return std::stoull(digits);
}

// "50,33" -> 50.33
inline std::optional<double> percent(const std::string &s) {
    if (s.empty()) return std::nullopt;
    std::string t = s;
    for (auto &c : t)
        if (c == ',') c = '.';
    return std::stod(t);
}

inline std::vector<Row> load(const std::string &path = PULSO_DATA_DIR "/fixtures/province_table.tsv") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<Row> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '\t')) f.push_back(cell);
        f.resize(16);
        Row r;
        r.country = f[0];
        r.province = f[1];
        r.tweets_scioli = *count(f[2]);
        r.tweets_macri = *count(f[3]);
        r.tweets = *count(f[4]);
        r.votes_scioli = count(f[5]);
        r.votes_macri = count(f[6]);
        r.votes_total = count(f[7]);
        r.population = count(f[8]);
        r.pct_tw_scioli = percent(f[9]);
        r.pct_tw_macri = percent(f[10]);
        r.pct_v_scioli = percent(f[11]);
        r.pct_v_macri = percent(f[12]);
        r.pct_tweets = percent(f[13]).value_or(0);
        r.pct_votes = percent(f[14]).value_or(0);
        r.pct_population = percent(f[15]).value_or(0);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline pulso::AggregateState state(const std::vector<Row> &rows) {
    pulso::AggregateState s;
    for (const auto &r : rows) {
        s.add({r.country, r.province, pulso::CandidateLabel::Scioli, pulso::SentimentLabel::Positivo},
              r.tweets_scioli);
        s.add({r.country, r.province, pulso::CandidateLabel::Macri, pulso::SentimentLabel::Positivo},
              r.tweets_macri);
    }
    return s;
}

inline std::vector<pulso::OfficialResult> official(const std::vector<Row> &rows) {
    std::vector<pulso::OfficialResult> out;
    for (const auto &r : rows)
        if (r.votes_scioli) out.push_back({r.province, *r.votes_scioli, *r.votes_macri, r.population});
    return out;
}

}  // namespace fixture
