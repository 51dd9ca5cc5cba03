// pulso: replay a tweet corpus through the lexicon sentiment pipeline and
// compare positive-tweet shares with official results.
//
// Exit codes: 0 success, 1 input error, 2 empty corpus.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulso/pulso.hpp"
#include "pulso/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kInputError = 1;
constexpr int kEmptyCorpus = 2;

std::vector<std::string> read_list(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw pulso::Error("cannot open " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = pulso::unicode::trim(line);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

pulso::Timestamp timestamp_arg(const std::string &s, const char *flag) {
    auto ts = pulso::parse_timestamp(s, pulso::kArgentinaOffsetMinutes);
    if (!ts) throw pulso::Error(std::string("bad timestamp for ") + flag + ": '" + s + "'");
    return *ts;
}

unsigned thread_count(std::optional<unsigned> flag) {
    if (flag) return std::max(1u, *flag);
    if (const char *env = std::getenv("PULSO_THREADS"); env != nullptr && *env != '\0') {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception &) {
            throw pulso::Error(std::string("PULSO_THREADS is not a number: '") + env + "'");
        }
    }
    return 1;
}

pulso::AggregateState read_aggregate(const fs::path &path) {
    std::ifstream in(path);
    if (!in) throw pulso::Error("cannot open aggregate " + path.string());
    return pulso::read_aggregate_csv(in);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Lexicon-based tweet sentiment pipeline"};
    app.require_subcommand(1);

    // run
    auto *run = app.add_subcommand("run", "Replay a corpus and write reports");
    std::string corpus, lexicon_dir, locations, official, from, to, lang = "es", out_dir;
    std::string keywords_file, follow_file;
    std::optional<unsigned> threads;
    bool no_keyword_filter = false, any_lang = false, keep_links = false, drop_mentions = false,
         drop_hashtags = false;
    int decimals = 4;
    run->add_option("--corpus", corpus, "JSON-lines corpus")->required()->check(CLI::ExistingFile);
    run->add_option("--lexicon", lexicon_dir, "Dictionary directory")->required()->check(CLI::ExistingDirectory);
    run->add_option("--locations", locations, "Location rules TSV")->required()->check(CLI::ExistingFile);
    run->add_option("--official", official, "Official results TSV")->check(CLI::ExistingFile);
    run->add_option("--from", from, "Window start (default offset -03:00)");
    run->add_option("--to", to, "Window end, default 2015-11-22T17:59:59-03:00");
    run->add_option("--lang", lang, "Language to keep");
    run->add_flag("--any-lang", any_lang, "Keep every language");
    run->add_option("--keywords", keywords_file, "Keyword list, one per line")->check(CLI::ExistingFile);
    run->add_option("--follow", follow_file, "Followed accounts, one per line")->check(CLI::ExistingFile);
    run->add_flag("--no-keyword-filter", no_keyword_filter, "Do not filter on keywords or accounts");
    run->add_flag("--keep-links", keep_links, "Score URL tokens");
    run->add_flag("--filter-mentions", drop_mentions, "Drop @mentions before scoring");
    run->add_flag("--filter-hashtags", drop_hashtags, "Drop #hashtags before scoring");
    run->add_option("--threads", threads, "Worker threads (PULSO_THREADS if unset)");
    run->add_option("--decimals", decimals, "Decimals in CSV percentages")->check(CLI::Range(0, 17));
    run->add_option("--out", out_dir, "Output directory")->required();

    // lexicon
    auto *lex = app.add_subcommand("lexicon", "Dictionary maintenance");
    lex->require_subcommand(1);
    auto *validate = lex->add_subcommand("validate", "Load and check the dictionaries");
    std::string validate_dir;
    validate->add_option("--lexicon", validate_dir)->required()->check(CLI::ExistingDirectory);
    auto *suggest = lex->add_subcommand("suggest", "Most frequent terms missing from the dictionaries");
    std::string suggest_dir, suggest_corpus;
    std::size_t top = 50;
    suggest->add_option("--lexicon", suggest_dir)->required()->check(CLI::ExistingDirectory);
    suggest->add_option("--corpus", suggest_corpus)->required()->check(CLI::ExistingFile);
    suggest->add_option("--top", top)->check(CLI::PositiveNumber);

    // locations
    auto *loc = app.add_subcommand("locations", "Location rule maintenance");
    loc->require_subcommand(1);
    auto *unmatched = loc->add_subcommand("unmatched", "Distinct raw locations no rule matches");
    std::string unmatched_corpus, unmatched_rules;
    std::size_t unmatched_top = 0;
    unmatched->add_option("--corpus", unmatched_corpus)->required()->check(CLI::ExistingFile);
    unmatched->add_option("--locations", unmatched_rules)->required()->check(CLI::ExistingFile);
    unmatched->add_option("--top", unmatched_top, "Limit output (0 = all)");

    // correlate
    auto *correlate = app.add_subcommand("correlate", "Pearson r between positive tweets and votes");
    std::string corr_aggregate, corr_official;
    bool percent = false;
    correlate->add_option("--aggregate", corr_aggregate)->required()->check(CLI::ExistingFile);
    correlate->add_option("--official", corr_official)->required()->check(CLI::ExistingFile);
    correlate->add_flag("--percent", percent, "Also correlate within-province percentages");

    // report
    auto *report = app.add_subcommand("report", "Rebuild reports from an aggregate.csv");
    std::string rep_aggregate, rep_official, rep_out;
    int rep_decimals = 4;
    report->add_option("--aggregate", rep_aggregate)->required()->check(CLI::ExistingFile);
    report->add_option("--official", rep_official)->check(CLI::ExistingFile);
    report->add_option("--out", rep_out)->required();
    report->add_option("--decimals", rep_decimals)->check(CLI::Range(0, 17));

    // synth
    auto *synth = app.add_subcommand("synth", "Write a deterministic synthetic corpus");
    pulso::synthetic::CorpusOptions synth_opt;
    std::string synth_out;
    synth->add_option("--tweets", synth_opt.tweets);
    synth->add_option("--seed", synth_opt.seed);
    synth->add_option("--duplicate-rate", synth_opt.duplicate_rate)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--malformed-rate", synth_opt.malformed_rate)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--out", synth_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : kInputError;
    }

    try {
        if (*run) {
            pulso::PipelineConfig cfg;
            cfg.corpus = corpus;
            cfg.lexicon = pulso::LexiconPaths::in_directory(lexicon_dir);
            cfg.locations = locations;
            if (!official.empty()) cfg.official = fs::path(official);
            cfg.filter = pulso::default_ingest_filter();
            if (!keywords_file.empty()) {
                cfg.filter.keywords.clear();
                for (auto &k : read_list(keywords_file)) cfg.filter.keywords.insert(std::move(k));
            }
            if (!follow_file.empty()) {
                cfg.filter.follow_accounts.clear();
                for (auto &a : read_list(follow_file)) cfg.filter.follow_accounts.insert(std::move(a));
            }
            if (no_keyword_filter) {
                cfg.filter.keywords.clear();
                cfg.filter.follow_accounts.clear();
            }
            cfg.filter.lang = any_lang ? std::nullopt : std::optional<std::string>(lang);
            if (!from.empty()) cfg.filter.window_start = timestamp_arg(from, "--from");
            if (!to.empty()) cfg.filter.window_end = timestamp_arg(to, "--to");
            cfg.options.filter_links = !keep_links;
            cfg.options.filter_user_mentions = drop_mentions;
            cfg.options.filter_hashtags = drop_hashtags;
            cfg.threads = thread_count(threads);
            cfg.out_dir = out_dir;
            cfg.decimals = decimals;

            const auto rep = pulso::run_pipeline(cfg);
            const auto &c = rep.counts;
            std::cerr << "parsed " << c.parsed << ", malformed " << c.malformed << ", filtered " << c.filtered_out
                      << ", deduped " << c.deduped << ", scored " << c.scored << ", unlocatable " << c.unlocatable
                      << "\n";
            for (const auto &e : rep.errors) std::cerr << "  skipped " << e << "\n";
        } else if (*validate) {
            const auto lx = pulso::load_lexicon(pulso::LexiconPaths::in_directory(validate_dir));
            std::cout << "ok: " << lx.attributes().size() << " attributes, " << lx.synonyms().size()
                      << " synonyms, " << lx.positive_words().size() << " positive, "
                      << lx.negative_words().size() << " negative\n";
        } else if (*suggest) {
            const auto lx = pulso::load_lexicon(pulso::LexiconPaths::in_directory(suggest_dir));
            std::ifstream in(suggest_corpus);
            pulso::RecordReader reader(in);
            pulso::TermCounter counter;
            while (auto r = reader.next()) counter.add(r->text);
            for (const auto &t : counter.top(lx, top)) std::cout << t.term << '\t' << t.count << '\n';
            if (reader.malformed() > 0) std::cerr << "skipped " << reader.malformed() << " malformed lines\n";
        } else if (*unmatched) {
            const pulso::LocationNormalizer norm(pulso::load_location_rules(unmatched_rules));
            std::ifstream in(unmatched_corpus);
            pulso::RecordReader reader(in);
            std::map<std::string, std::uint64_t> misses;
            while (auto r = reader.next()) {
                if (!r->user_location || r->user_location->empty()) continue;
                if (!norm.normalize(*r->user_location).matched()) ++misses[*r->user_location];
            }
            std::vector<std::pair<std::string, std::uint64_t>> ranked(misses.begin(), misses.end());
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto &a, const auto &b) { return a.second > b.second; });
            if (unmatched_top > 0 && ranked.size() > unmatched_top) ranked.resize(unmatched_top);
            for (const auto &[raw, n] : ranked) std::cout << raw << '\t' << n << '\n';
        } else if (*correlate) {
            const auto state = read_aggregate(corr_aggregate);
            const auto off = pulso::load_official(corr_official);
            std::cout << pulso::correlation_json(state, off, percent).dump(2) << '\n';
        } else if (*report) {
            const auto state = read_aggregate(rep_aggregate);
            std::vector<pulso::OfficialResult> off;
            if (!rep_official.empty()) off = pulso::load_official(rep_official);
            pulso::write_reports(rep_out, state, off, rep_decimals);
        } else if (*synth) {
            std::ofstream out(synth_out, std::ios::binary);
            if (!out) throw pulso::Error("cannot write " + synth_out);
            pulso::synthetic::write_corpus(out, synth_opt);
        }
    } catch (const pulso::EmptyCorpusError &e) {
        std::cerr << "pulso: " << e.what() << "\n";
        return kEmptyCorpus;
    } catch (const std::exception &e) {
        std::cerr << "pulso: " << e.what() << "\n";
        return kInputError;
    }
    return 0;
}
