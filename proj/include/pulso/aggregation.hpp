#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pulso/attribution.hpp"
#include "pulso/csv.hpp"
#include "pulso/error.hpp"
#include "pulso/stats.hpp"

namespace pulso {

enum class SentimentLabel : std::int8_t { Negativo = -1, Neutro = 0, Positivo = 1 };

inline constexpr std::string_view to_string(SentimentLabel s) {
    switch (s) {
        case SentimentLabel::Positivo: return "Positivo";
        case SentimentLabel::Negativo: return "Negativo";
        case SentimentLabel::Neutro: return "Neutro";
    }
    return "Neutro";
}

inline std::optional<SentimentLabel> parse_sentiment(std::string_view s) {
    if (s == "Positivo") return SentimentLabel::Positivo;
    if (s == "Negativo") return SentimentLabel::Negativo;
    if (s == "Neutro") return SentimentLabel::Neutro;
    return std::nullopt;
}

/// Sign of the summed sentence scores; an empty list is Neutro.
inline SentimentLabel tweet_score(std::span<const std::int64_t> sentence_scores) {
    std::int64_t sum = 0;
    for (auto s : sentence_scores) sum += s;
    if (sum > 0) return SentimentLabel::Positivo;
    if (sum < 0) return SentimentLabel::Negativo;
    return SentimentLabel::Neutro;
}

struct AggregateKey {
    std::string country;
    std::string province;
    CandidateLabel candidate = CandidateLabel::SinCandidato;
    SentimentLabel sentiment = SentimentLabel::Neutro;

    friend auto operator<=>(const AggregateKey &, const AggregateKey &) = default;
    friend bool operator==(const AggregateKey &, const AggregateKey &) = default;
};

// Counters per (country, province, candidate, sentiment). The empty state
// is the identity of merge, and merge is commutative and associative, so
// per-worker states can be combined in any order.
class AggregateState {
public:
    void fold(SentimentLabel label, CandidateLabel candidate, const LocationEntry &location) {
        add({location.country, location.province, candidate, label}, 1);
    }

    void add(const AggregateKey &key, std::uint64_t count) {
        if (count == 0) return;
        counters_[key] += count;
        considered_total_ += count;
    }

    void merge(const AggregateState &other) {
        for (const auto &[key, n] : other.counters_) counters_[key] += n;
        considered_total_ += other.considered_total_;
    }

    std::uint64_t count(const AggregateKey &key) const {
        auto it = counters_.find(key);
        return it == counters_.end() ? 0 : it->second;
    }

    const std::map<AggregateKey, std::uint64_t> &counters() const noexcept { return counters_; }
    std::uint64_t considered_total() const noexcept { return considered_total_; }

    std::uint64_t total(SentimentLabel label) const {
        std::uint64_t n = 0;
        for (const auto &[key, c] : counters_)
            if (key.sentiment == label) n += c;
        return n;
    }

    friend bool operator==(const AggregateState &, const AggregateState &) = default;

private:
    std::map<AggregateKey, std::uint64_t> counters_;
    std::uint64_t considered_total_ = 0;
};

inline AggregateState fold(AggregateState state, SentimentLabel label, CandidateLabel candidate,
                           const LocationEntry &location) {
    state.fold(label, candidate, location);
    return state;
}

inline AggregateState merge(AggregateState a, const AggregateState &b) {
    a.merge(b);
    return a;
}

struct NationalShares {
    double pct_macri = 0.0;
    double pct_scioli = 0.0;
    std::uint64_t n_macri = 0;
    std::uint64_t n_scioli = 0;

    std::uint64_t two_candidate_total() const { return n_macri + n_scioli; }
};

inline NationalShares national_shares(std::uint64_t n_macri, std::uint64_t n_scioli) {
    const std::uint64_t total = n_macri + n_scioli;
    if (total == 0) throw UndefinedShareError("no positive tweets naming exactly one candidate");
    return {static_cast<double>(n_macri) * 100.0 / static_cast<double>(total),
            static_cast<double>(n_scioli) * 100.0 / static_cast<double>(total), n_macri, n_scioli};
}

/// Shares over Positivo tweets naming exactly one candidate; Neutro,
/// Negativo, Scioli-Macri and Sin Candidato cells are ignored.
inline NationalShares national_shares(const AggregateState &state) {
    std::uint64_t macri = 0, scioli = 0;
    for (const auto &[key, n] : state.counters()) {
        if (key.sentiment != SentimentLabel::Positivo) continue;
        if (key.candidate == CandidateLabel::Macri) macri += n;
        if (key.candidate == CandidateLabel::Scioli) scioli += n;
    }
    return national_shares(macri, scioli);
}

/// Official national Macri share in percent.
inline double official_macri_share(std::span<const OfficialResult> official) {
    std::uint64_t macri = 0, total = 0;
    for (const auto &o : official) {
        macri += o.votes_macri;
        total += o.votes_macri + o.votes_scioli;
    }
    if (total == 0) throw UndefinedShareError("official results carry no votes");
    return static_cast<double>(macri) * 100.0 / static_cast<double>(total);
}

struct ProvinceRow {
    std::string country;
    std::string province;
    std::uint64_t tweets_scioli = 0;
    std::uint64_t tweets_macri = 0;
    bool has_official = false;  // joined to an official-results province
    bool residual = false;      // home-country province with no official row
    std::uint64_t votes_scioli = 0;
    std::uint64_t votes_macri = 0;
    std::optional<std::uint64_t> population;
    std::optional<double> pct_tw_scioli, pct_tw_macri;
    std::optional<double> pct_v_scioli, pct_v_macri;
    double pct_tweets = 0.0;
    std::optional<double> pct_votes;
    std::optional<double> pct_population;
    std::optional<bool> agrees;

    std::uint64_t tweets() const { return tweets_scioli + tweets_macri; }
    std::uint64_t votes() const { return votes_scioli + votes_macri; }
};

struct ProvinceTable {
    std::vector<ProvinceRow> rows;
    std::size_t agreement_count = 0;
    std::size_t provinces_compared = 0;
    std::uint64_t total_tweets = 0;      // positive, exactly one candidate
    std::uint64_t locatable_tweets = 0;  // in rows joined to official provinces

    double coverage_pct() const {
        return total_tweets == 0 ? 0.0
                                 : static_cast<double>(locatable_tweets) * 100.0 / static_cast<double>(total_tweets);
    }
};

/// Joins per-province positive counts with official votes.
///
/// A row joins the official table when its country is `home_country` and its
/// province names an official row. Only joined rows take part in winner
/// agreement; a tie on either side counts as disagreement. Unlocatable,
/// foreign and residual rows are still emitted.
inline ProvinceTable province_table(const AggregateState &state, std::span<const OfficialResult> official,
                                    std::string_view home_country = "Argentina") {
    ProvinceTable table;
    std::map<std::pair<std::string, std::string>, ProvinceRow> by_place;
    for (const auto &[key, n] : state.counters()) {
        if (key.sentiment != SentimentLabel::Positivo) continue;
        if (key.candidate != CandidateLabel::Macri && key.candidate != CandidateLabel::Scioli) continue;
        auto &row = by_place[{key.country, key.province}];
        row.country = key.country;
        row.province = key.province;
        (key.candidate == CandidateLabel::Macri ? row.tweets_macri : row.tweets_scioli) += n;
        table.total_tweets += n;
    }

    std::uint64_t vote_total = 0, population_total = 0;
    bool have_population = !official.empty();
    for (const auto &o : official) {
        vote_total += o.votes_scioli + o.votes_macri;
        if (o.population)
            population_total += *o.population;
        else
            have_population = false;
        auto &row = by_place[{std::string(home_country), o.province}];
        row.country = std::string(home_country);
        row.province = o.province;
        row.has_official = true;
        row.votes_scioli = o.votes_scioli;
        row.votes_macri = o.votes_macri;
        row.population = o.population;
    }

    auto pct = [](std::uint64_t part, std::uint64_t whole) {
        return static_cast<double>(part) * 100.0 / static_cast<double>(whole);
    };
    for (auto &[place, row] : by_place) {
        if (row.tweets() > 0) {
            row.pct_tw_scioli = pct(row.tweets_scioli, row.tweets());
            row.pct_tw_macri = pct(row.tweets_macri, row.tweets());
        }
        if (table.total_tweets > 0) row.pct_tweets = pct(row.tweets(), table.total_tweets);
        if (row.has_official) {
            if (row.votes() > 0) {
                row.pct_v_scioli = pct(row.votes_scioli, row.votes());
                row.pct_v_macri = pct(row.votes_macri, row.votes());
            }
            if (vote_total > 0) row.pct_votes = pct(row.votes(), vote_total);
            if (have_population && population_total > 0) row.pct_population = pct(*row.population, population_total);
            const bool tweet_tie = row.tweets_macri == row.tweets_scioli;
            const bool vote_tie = row.votes_macri == row.votes_scioli;
            row.agrees = !tweet_tie && !vote_tie &&
                         (row.tweets_macri > row.tweets_scioli) == (row.votes_macri > row.votes_scioli);
            ++table.provinces_compared;
            if (*row.agrees) ++table.agreement_count;
            table.locatable_tweets += row.tweets();
        } else {
            row.residual = row.country == home_country && row.province != kNoProvince;
        }
        table.rows.push_back(std::move(row));
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ProvinceRow &a, const ProvinceRow &b) { return a.tweets() > b.tweets(); });
    return table;
}

/// aggregate.csv: country,province,candidate,sentiment,count in key order.
inline void write_aggregate_csv(const AggregateState &state, std::ostream &out) {
    out << "country,province,candidate,sentiment,count\n";
    for (const auto &[key, n] : state.counters()) {
        out << csv::quote(key.country) << ',' << csv::quote(key.province) << ','
            << csv::quote(to_string(key.candidate)) << ',' << to_string(key.sentiment) << ',' << n << '\n';
    }
}

inline AggregateState read_aggregate_csv(std::istream &in) {
    AggregateState state;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("country,", 0) == 0) continue;
        std::vector<std::string> f;
        try {
            f = csv::split(line);
        } catch (const Error &e) {
            throw ParseError(lineno, e.what());
        }
        if (f.size() != 5) throw ParseError(lineno, "expected 5 columns");
        const auto candidate = parse_candidate(f[2]);
        if (!candidate) throw ParseError(lineno, "unknown candidate '" + f[2] + "'");
        const auto sentiment = parse_sentiment(f[3]);
        if (!sentiment) throw ParseError(lineno, "unknown sentiment '" + f[3] + "'");
        std::uint64_t n = 0;
        try {
            std::size_t used = 0;
            if (f[4].empty() || f[4][0] == '-') throw std::invalid_argument("sign");
            n = std::stoull(f[4], &used);
            if (used != f[4].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw ParseError(lineno, "bad count '" + f[4] + "'");
        }
        state.add({f[0], f[1], *candidate, *sentiment}, n);
    }
    return state;
}

/// Per-province (tweets, votes) vectors for one candidate over the joined
/// rows, as raw counts or as within-province percentages.
struct CorrelationInput {
    std::vector<double> tweets;
    std::vector<double> votes;
};

inline CorrelationInput correlation_input(const ProvinceTable &table, CandidateLabel candidate, bool percent) {
    CorrelationInput in;
    for (const auto &row : table.rows) {
        if (!row.has_official) continue;
        const bool macri = candidate == CandidateLabel::Macri;
        if (percent) {
            if (!row.pct_tw_macri || !row.pct_v_macri) continue;
            in.tweets.push_back(macri ? *row.pct_tw_macri : *row.pct_tw_scioli);
            in.votes.push_back(macri ? *row.pct_v_macri : *row.pct_v_scioli);
        } else {
            in.tweets.push_back(static_cast<double>(macri ? row.tweets_macri : row.tweets_scioli));
            in.votes.push_back(static_cast<double>(macri ? row.votes_macri : row.votes_scioli));
        }
    }
    return in;
}

}  // namespace pulso
