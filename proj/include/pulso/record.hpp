#pragma once

// Line-delimited tweet records and the ingest filter.
//
// One JSON object per line, keys named after the tweets table columns:
//   {"id": 1, "created_at": "2015-11-20T10:00:00-03:00", "user.name": "...",
//    "user.screen_name": "...", "user.followers_count": 0, "text": "...",
//    "retweeted_status.retweet_count": 0, "retweeted_status.id": 0,
//    "retweeted_status.favorite_count": 0, "retweeted_status.text": "...",
//    "user.location": "...", "coordinates.coordinates.0": -58.4,
//    "coordinates.coordinates.1": -34.6, "entities.hashtags.0.text": "...",
//    "entities.hashtags.1.text": "...", "lang": "es"}
// id, created_at, text and lang are required; null means absent.

#include <cctype>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pulso/error.hpp"
#include "pulso/tweet.hpp"
#include "pulso/unicode.hpp"

namespace pulso {

inline constexpr std::size_t kMaxTextLength = 500;
inline constexpr std::size_t kMaxLocationLength = 500;
inline constexpr std::size_t kMaxLangLength = 5;

namespace detail {

using json = nlohmann::json;

inline const json *field(const json &obj, const char *key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

inline std::optional<std::int64_t> int_field(const json &obj, const char *key, std::size_t line) {
    const json *v = field(obj, key);
    if (v == nullptr) return std::nullopt;
    if (v->is_number_integer()) return v->get<std::int64_t>();
    if (v->is_number_unsigned()) {
        const auto u = v->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ParseError(line, std::string(key) + " out of range");
        return static_cast<std::int64_t>(u);
    }
    if (v->is_string()) {
        const auto &s = v->get_ref<const std::string &>();
        try {
            std::size_t used = 0;
            const auto n = std::stoll(s, &used);
            if (used == s.size()) return n;
        } catch (const std::exception &) {
        }
    }
    throw ParseError(line, std::string(key) + " is not an integer");
}

inline std::optional<std::string> string_field(const json &obj, const char *key, std::size_t line) {
    const json *v = field(obj, key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ParseError(line, std::string(key) + " is not a string");
    return v->get<std::string>();
}

inline std::optional<double> real_field(const json &obj, const char *key, std::size_t line) {
    const json *v = field(obj, key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ParseError(line, std::string(key) + " is not a number");
    return v->get<double>();
}

}  // namespace detail

/// Parses one corpus line; `line_number` is used in error messages.
inline TweetRecord parse_record(std::string_view line, std::size_t line_number = 1) {
    using detail::json;
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error &e) {
        throw ParseError(line_number, std::string("malformed record: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_number, "record is not an object");

    TweetRecord r;
    const auto id = detail::int_field(obj, "id", line_number);
    if (!id) throw ParseError(line_number, "missing id");
    r.id = *id;

    const auto created = detail::string_field(obj, "created_at", line_number);
    if (!created) throw ParseError(line_number, "missing created_at");
    const auto ts = parse_timestamp(*created);
    if (!ts) throw ParseError(line_number, "bad created_at '" + *created + "'");
    r.created_at = *ts;

    auto text = detail::string_field(obj, "text", line_number);
    if (!text) throw ParseError(line_number, "missing text");
    if (unicode::length(*text) > kMaxTextLength) throw ParseError(line_number, "text longer than 500 characters");
    r.text = std::move(*text);

    const auto lang = detail::string_field(obj, "lang", line_number);
    if (!lang || lang->empty()) throw ParseError(line_number, "missing lang");
    std::string primary = lang->substr(0, lang->find_first_of("-_"));
    for (auto &c : primary) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (primary.empty() || primary.size() > kMaxLangLength) throw ParseError(line_number, "bad lang '" + *lang + "'");
    r.lang = std::move(primary);

    r.user_name = detail::string_field(obj, "user.name", line_number).value_or("");
    r.screen_name = detail::string_field(obj, "user.screen_name", line_number).value_or("");
    r.followers_count = detail::int_field(obj, "user.followers_count", line_number).value_or(0);
    r.retweet_count = detail::int_field(obj, "retweeted_status.retweet_count", line_number);
    r.retweeted_id = detail::int_field(obj, "retweeted_status.id", line_number);
    r.retweeted_favorite_count = detail::int_field(obj, "retweeted_status.favorite_count", line_number);
    r.retweeted_text = detail::string_field(obj, "retweeted_status.text", line_number);
    r.user_location = detail::string_field(obj, "user.location", line_number);
    if (r.user_location && unicode::length(*r.user_location) > kMaxLocationLength)
        throw ParseError(line_number, "user.location longer than 500 characters");
    const auto lon = detail::real_field(obj, "coordinates.coordinates.0", line_number);
    const auto lat = detail::real_field(obj, "coordinates.coordinates.1", line_number);
    if (lon.has_value() != lat.has_value()) throw ParseError(line_number, "coordinates need both components");
    if (lon) r.coordinates = Coordinates{*lon, *lat};
    r.hashtag_0 = detail::string_field(obj, "entities.hashtags.0.text", line_number);
    r.hashtag_1 = detail::string_field(obj, "entities.hashtags.1.text", line_number);
    return r;
}

/// Inverse of parse_record; absent optionals are omitted.
inline std::string to_json_line(const TweetRecord &r) {
    detail::json obj = detail::json::object();
    obj["id"] = r.id;
    obj["created_at"] = format_timestamp(r.created_at);
    obj["user.name"] = r.user_name;
    obj["user.screen_name"] = r.screen_name;
    obj["user.followers_count"] = r.followers_count;
    obj["text"] = r.text;
    if (r.retweet_count) obj["retweeted_status.retweet_count"] = *r.retweet_count;
    if (r.retweeted_id) obj["retweeted_status.id"] = *r.retweeted_id;
    if (r.retweeted_favorite_count) obj["retweeted_status.favorite_count"] = *r.retweeted_favorite_count;
    if (r.retweeted_text) obj["retweeted_status.text"] = *r.retweeted_text;
    if (r.user_location) obj["user.location"] = *r.user_location;
    if (r.coordinates) {
        obj["coordinates.coordinates.0"] = r.coordinates->lon;
        obj["coordinates.coordinates.1"] = r.coordinates->lat;
    }
    if (r.hashtag_0) obj["entities.hashtags.0.text"] = *r.hashtag_0;
    if (r.hashtag_1) obj["entities.hashtags.1.text"] = *r.hashtag_1;
    obj["lang"] = r.lang;
    return obj.dump();
}

// Streams records from a corpus, skipping and counting malformed lines.
// Blank lines are ignored and not counted.
class RecordReader {
public:
    explicit RecordReader(std::istream &in, std::size_t keep_errors = 20) : in_(in), keep_errors_(keep_errors) {}

    /// Next well-formed record, or nullopt at end of stream.
    std::optional<TweetRecord> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_number_;
            if (unicode::trim(line).empty()) continue;
            try {
                auto r = parse_record(line, line_number_);
                ++parsed_;
                return r;
            } catch (const ParseError &e) {
                ++malformed_;
                if (errors_.size() < keep_errors_) errors_.emplace_back(e.what());
            }
        }
        return std::nullopt;
    }

    std::size_t parsed() const noexcept { return parsed_; }
    std::size_t malformed() const noexcept { return malformed_; }
    std::size_t line_number() const noexcept { return line_number_; }
    const std::vector<std::string> &errors() const noexcept { return errors_; }

private:
    std::istream &in_;
    std::size_t keep_errors_;
    std::size_t line_number_ = 0;
    std::size_t parsed_ = 0;
    std::size_t malformed_ = 0;
    std::vector<std::string> errors_;
};

struct IngestFilter {
    std::set<std::string> keywords;
    std::set<std::string> follow_accounts;
    std::optional<std::string> lang;
    std::optional<Timestamp> window_start;
    std::optional<Timestamp> window_end;
};

/// Final keyword list of the collection agent, in its printed order.
inline std::vector<std::string> default_keywords() {
    return {"Cambiamos",       "Cadena3Elecciones", "Argentina",      "Elecciones2015",  "macri",
            "fpv",             "Balotaje",          "ELECCIONES",     "Scioli",          "yolovotoamm",
            "peronismo",       "MacriPresidente",   "macripresidente", "CambiamosConMacri", "VamosConMacri",
            "mm2015",          "MeHackearonLaCuenta", "CampañaSucia", "CampañaDeMiedo",  "YoVotoAScioli",
            "MacriNosMiente",  "SiMacriGana",       "SiGanaMacri",    "ScioliPresidente", "MIVICTORIA",
            "Balotaje2015",    "argentinadebate",   "ganascioli",     "QueGaneScioli",   "Mesaza",
            "GanoMacri"};
}

inline std::vector<std::string> default_follow_accounts() {
    return {"danieloscioli", "clarincom",    "pagina_12",    "infobae", "CSN",       "6780ficial",
            "mauriciomacri", "TRIBUNACOMAR", "todonoticias", "lanacion", "TV_PUBLICA"};
}

/// 2015-11-22 17:59:59 Argentina time, close of the polls.
inline Timestamp polls_close() { return *parse_timestamp("2015-11-22T17:59:59-03:00"); }

inline IngestFilter default_ingest_filter() {
    IngestFilter f;
    for (auto &k : default_keywords()) f.keywords.insert(std::move(k));
    for (auto &a : default_follow_accounts()) f.follow_accounts.insert(std::move(a));
    f.lang = "es";
    f.window_end = polls_close();
    return f;
}

// IngestFilter with keywords and accounts folded once up front.
class FilterMatcher {
public:
    explicit FilterMatcher(const IngestFilter &filter) : filter_(filter) {
        if (filter.window_start && filter.window_end && *filter.window_end < *filter.window_start)
            throw Error("ingest window ends before it starts");
        for (const auto &k : filter.keywords)
            if (!unicode::trim(k).empty()) keywords_.push_back(unicode::canonical(unicode::trim(k)));
        for (const auto &a : filter.follow_accounts) {
            std::string_view name = unicode::trim(a);
            if (!name.empty() && name.front() == '@') name.remove_prefix(1);
            if (!name.empty()) accounts_.insert(unicode::canonical(name));
        }
    }

    bool operator()(const TweetRecord &r) const {
        if (filter_.lang && r.lang != *filter_.lang) return false;
        if (filter_.window_start && r.created_at < *filter_.window_start) return false;
        if (filter_.window_end && *filter_.window_end < r.created_at) return false;
        if (keywords_.empty()) return true;
        if (!accounts_.empty() && accounts_.contains(unicode::canonical(r.screen_name))) return true;
        const std::string text = unicode::canonical(r.text);
        for (const auto &k : keywords_)
            if (text.find(k) != std::string::npos) return true;
        return false;
    }

private:
    IngestFilter filter_;
    std::vector<std::string> keywords_;
    std::set<std::string> accounts_;
};

/// (no keywords, or keyword in text, or author followed) and language and
/// inclusive time window.
inline bool passes_filter(const TweetRecord &record, const IngestFilter &filter) {
    return FilterMatcher(filter)(record);
}

}  // namespace pulso
