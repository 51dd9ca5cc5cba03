#pragma once

// End-to-end replay: parse -> filter -> dedupe -> score -> attribute -> fold,
// then report emission.
//
// Records are processed in batches. Within a batch, parsing and filtering
// run on the workers, deduplication is one ordered pass (first occurrence
// wins regardless of thread count), and scoring/folding runs on the workers
// again, each into its own AggregateState. States are merged at the end, so
// the result does not depend on the number of threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "pulso/aggregation.hpp"
#include "pulso/attribution.hpp"
#include "pulso/error.hpp"
#include "pulso/lexicon.hpp"
#include "pulso/record.hpp"
#include "pulso/stats.hpp"
#include "pulso/text.hpp"

namespace pulso {

struct PipelineCounts {
    std::size_t parsed = 0;
    std::size_t malformed = 0;
    std::size_t filtered_out = 0;
    std::size_t deduped = 0;
    std::size_t scored = 0;
    std::size_t unlocatable = 0;
    std::size_t positive = 0;
    std::size_t neutral = 0;
    std::size_t negative = 0;
};

struct StreamResult {
    AggregateState state;
    PipelineCounts counts;
    std::vector<std::string> errors;  // first few malformed-line messages
};

struct StreamContext {
    const Lexicon &lexicon;
    const LocationNormalizer &locations;
    const FilterMatcher &filter;
    ScorerOptions options;
    unsigned threads = 1;
    std::size_t batch_size = 4096;
    std::size_t keep_errors = 20;
};

namespace detail {

template <typename Fn>
void parallel_ranges(std::size_t n, unsigned threads, Fn &&fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t from = n * w / workers;
        const std::size_t to = n * (w + 1) / workers;
        pool.emplace_back([&fn, w, from, to] { fn(w, from, to); });
    }
}

struct Slot {
    std::size_t line = 0;
    std::string text;
    std::optional<TweetRecord> record;
    std::string error;
    bool passes = false;
};

struct WorkerTally {
    AggregateState state;
    std::size_t unlocatable = 0;
    std::size_t by_label[3] = {0, 0, 0};
};

}  // namespace detail

/// Runs the corpus in `in` through the pipeline. Thread count does not
/// affect the result.
inline StreamResult process_stream(std::istream &in, const StreamContext &ctx) {
    StreamResult result;
    std::unordered_set<std::int64_t> seen;
    std::vector<detail::WorkerTally> tallies(std::max(1u, ctx.threads));
    std::vector<detail::Slot> batch;
    std::size_t line_number = 0;
    std::string line;
    bool eof = false;

    while (!eof) {
        batch.clear();
        while (batch.size() < ctx.batch_size) {
            if (!std::getline(in, line)) {
                eof = true;
                break;
            }
            ++line_number;
            if (unicode::trim(line).empty()) continue;
            batch.push_back({line_number, std::move(line), std::nullopt, {}, false});
            line.clear();
        }
        if (batch.empty()) break;

        detail::parallel_ranges(batch.size(), ctx.threads, [&](std::size_t, std::size_t from, std::size_t to) {
            for (std::size_t i = from; i < to; ++i) {
                auto &slot = batch[i];
                try {
                    slot.record = parse_record(slot.text, slot.line);
                    slot.passes = ctx.filter(*slot.record);
                } catch (const ParseError &e) {
                    slot.error = e.what();
                }
            }
        });

        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            auto &slot = batch[i];
            if (!slot.record) {
                ++result.counts.malformed;
                if (result.errors.size() < ctx.keep_errors) result.errors.push_back(slot.error);
                continue;
            }
            ++result.counts.parsed;
            if (!slot.passes) {
                ++result.counts.filtered_out;
            } else if (!seen.insert(slot.record->id).second) {
                ++result.counts.deduped;
            } else {
                kept.push_back(i);
            }
        }
        result.counts.scored += kept.size();

        detail::parallel_ranges(kept.size(), ctx.threads, [&](std::size_t w, std::size_t from, std::size_t to) {
            auto &tally = tallies[w];
            for (std::size_t k = from; k < to; ++k) {
                const TweetRecord &r = *batch[kept[k]].record;
                std::vector<std::int64_t> scores;
                for (const auto &s : analyze_tweet(r, ctx.lexicon, ctx.options)) scores.push_back(s.sentiment_score);
                const SentimentLabel label = tweet_score(scores);
                const CandidateLabel candidate = classify_candidate(r.text);
                const LocationEntry location = ctx.locations.normalize(r.user_location.value_or(""));
                if (!location.matched()) ++tally.unlocatable;
                ++tally.by_label[static_cast<int>(label) + 1];
                tally.state.fold(label, candidate, location);
            }
        });
    }

    for (auto &t : tallies) {
        result.state.merge(t.state);
        result.counts.unlocatable += t.unlocatable;
        result.counts.negative += t.by_label[0];
        result.counts.neutral += t.by_label[1];
        result.counts.positive += t.by_label[2];
    }
    return result;
}

// ---- report rendering ----------------------------------------------------

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline nlohmann::json shares_json(const AggregateState &state, std::span<const OfficialResult> official) {
    nlohmann::json j;
    j["considered_total"] = state.considered_total();
    j["positive_total"] = state.total(SentimentLabel::Positivo);
    try {
        const auto shares = national_shares(state);
        j["defined"] = true;
        j["n_macri"] = shares.n_macri;
        j["n_scioli"] = shares.n_scioli;
        j["two_candidate_total"] = shares.two_candidate_total();
        j["pct_macri"] = shares.pct_macri;
        j["pct_scioli"] = shares.pct_scioli;
        if (!official.empty()) {
            const double off = official_macri_share(official);
            j["official_pct_macri"] = off;
            j["official_pct_scioli"] = 100.0 - off;
            j["margin_pp"] = std::fabs(shares.pct_macri - off);
        }
    } catch (const UndefinedShareError &) {
        j["defined"] = false;
    }
    if (!official.empty()) {
        const auto table = province_table(state, official);
        j["provinces"] = {{"agreement_count", table.agreement_count},
                          {"provinces_compared", table.provinces_compared},
                          {"locatable_tweets", table.locatable_tweets},
                          {"total_tweets", table.total_tweets},
                          {"coverage_pct", table.coverage_pct()}};
    }
    return j;
}

inline void write_province_table_csv(const ProvinceTable &table, std::ostream &out, int decimals = 4) {
    auto opt = [&](const std::optional<double> &v) { return v ? format_fixed(*v, decimals) : std::string(); };
    out << "country,province,tweets_scioli,tweets_macri,tweets,votes_scioli,votes_macri,votes_total,"
           "pct_tw_scioli,pct_tw_macri,pct_v_scioli,pct_v_macri,pct_tweets,pct_votes,pct_population,agrees\n";
    for (const auto &r : table.rows) {
        out << csv::quote(r.country) << ',' << csv::quote(r.province) << ',' << r.tweets_scioli << ','
            << r.tweets_macri << ',' << r.tweets() << ',';
        if (r.has_official)
            out << r.votes_scioli << ',' << r.votes_macri << ',' << r.votes() << ',';
        else
            out << ",,,";
        out << opt(r.pct_tw_scioli) << ',' << opt(r.pct_tw_macri) << ',' << opt(r.pct_v_scioli) << ','
            << opt(r.pct_v_macri) << ',' << format_fixed(r.pct_tweets, decimals) << ',' << opt(r.pct_votes) << ','
            << opt(r.pct_population) << ',';
        if (r.agrees) out << (*r.agrees ? "yes" : "no");
        else if (r.residual) out << "residual";
        out << '\n';
    }
}

inline nlohmann::json correlation_json(const AggregateState &state, std::span<const OfficialResult> official,
                                       bool include_percent) {
    const auto table = province_table(state, official);
    nlohmann::json arr = nlohmann::json::array();
    std::vector<bool> bases{false};
    if (include_percent) bases.push_back(true);
    for (bool percent : bases) {
        for (auto cand : {CandidateLabel::Macri, CandidateLabel::Scioli}) {
            nlohmann::json j;
            j["candidate"] = std::string(to_string(cand));
            j["basis"] = percent ? "percent" : "counts";
            const auto input = correlation_input(table, cand, percent);
            try {
                const auto res = correlation_test(input.tweets, input.votes);
                j["r"] = res.r;
                j["p"] = res.p_value;
                j["n"] = res.n;
                j["degenerate"] = res.degenerate;
            } catch (const StatsError &e) {
                j["n"] = input.tweets.size();
                j["error"] = e.what();
            }
            arr.push_back(std::move(j));
        }
    }
    return arr;
}

inline void write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

/// aggregate.csv and shares.json always; province_table.csv and
/// correlation.json when official results are given.
inline void write_reports(const std::filesystem::path &out_dir, const AggregateState &state,
                          std::span<const OfficialResult> official, int decimals = 4) {
    std::filesystem::create_directories(out_dir);
    {
        std::ostringstream s;
        write_aggregate_csv(state, s);
        write_text_file(out_dir / "aggregate.csv", s.str());
    }
    write_text_file(out_dir / "shares.json", shares_json(state, official).dump(2) + "\n");
    if (!official.empty()) {
        std::ostringstream s;
        write_province_table_csv(province_table(state, official), s, decimals);
        write_text_file(out_dir / "province_table.csv", s.str());
        write_text_file(out_dir / "correlation.json", correlation_json(state, official, true).dump(2) + "\n");
    }
}

struct PipelineConfig {
    std::filesystem::path corpus;
    LexiconPaths lexicon;
    std::filesystem::path locations;
    std::optional<std::filesystem::path> official;
    IngestFilter filter;
    ScorerOptions options;
    unsigned threads = 1;
    std::filesystem::path out_dir;
    int decimals = 4;
};

struct PipelineReport {
    PipelineCounts counts;
    std::vector<std::string> errors;
    AggregateState state;
};

inline nlohmann::json report_json(const PipelineCounts &c, const std::vector<std::string> &errors) {
    return {{"parsed", c.parsed},     {"malformed", c.malformed}, {"filtered_out", c.filtered_out},
            {"deduped", c.deduped},   {"scored", c.scored},       {"unlocatable", c.unlocatable},
            {"positive", c.positive}, {"neutral", c.neutral},     {"negative", c.negative},
            {"errors", errors}};
}

/// Full run from files to report directory. Throws EmptyCorpusError when
/// no record survives filtering; nothing is written in that case.
inline PipelineReport run_pipeline(const PipelineConfig &config) {
    const Lexicon lexicon = load_lexicon(config.lexicon);
    const LocationNormalizer locations(load_location_rules(config.locations));
    std::vector<OfficialResult> official;
    if (config.official) official = load_official(*config.official);
    const FilterMatcher filter(config.filter);

    std::ifstream in(config.corpus, std::ios::binary);
    if (!in) throw Error("cannot open corpus " + config.corpus.string());
    StreamContext ctx{lexicon, locations, filter, config.options, std::max(1u, config.threads)};
    StreamResult res = process_stream(in, ctx);
    if (res.counts.scored == 0) throw EmptyCorpusError("no records survived the ingest filter");

    write_reports(config.out_dir, res.state, official, config.decimals);
    write_text_file(config.out_dir / "report.json", report_json(res.counts, res.errors).dump(2) + "\n");
    return {res.counts, std::move(res.errors), std::move(res.state)};
}

}  // namespace pulso
