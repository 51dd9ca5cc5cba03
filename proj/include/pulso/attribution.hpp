#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pulso/error.hpp"
#include "pulso/unicode.hpp"

namespace pulso {

enum class CandidateLabel : std::uint8_t { Macri, Scioli, ScioliMacri, SinCandidato };

inline constexpr std::string_view to_string(CandidateLabel c) {
    switch (c) {
        case CandidateLabel::Macri: return "Macri";
        case CandidateLabel::Scioli: return "Scioli";
        case CandidateLabel::ScioliMacri: return "Scioli-Macri";
        case CandidateLabel::SinCandidato: return "Sin Candidato";
    }
    return "Sin Candidato";
}

inline std::optional<CandidateLabel> parse_candidate(std::string_view s) {
    for (auto c : {CandidateLabel::Macri, CandidateLabel::Scioli, CandidateLabel::ScioliMacri,
                   CandidateLabel::SinCandidato})
        if (s == to_string(c)) return c;
    return std::nullopt;
}

/// Case-insensitive containment of "macri" / "scioli" anywhere in the text,
/// so "#MacriPresidente" and "@danieloscioli" count as mentions.
inline CandidateLabel classify_candidate(std::string_view text) {
    const std::string lowered = unicode::canonical(text);
    const bool macri = lowered.find("macri") != std::string::npos;
    const bool scioli = lowered.find("scioli") != std::string::npos;
    if (macri && scioli) return CandidateLabel::ScioliMacri;
    if (macri) return CandidateLabel::Macri;
    if (scioli) return CandidateLabel::Scioli;
    return CandidateLabel::SinCandidato;
}

inline constexpr std::string_view kNoProvince = "Sin Provincia";
inline constexpr std::string_view kNoCountry = "Sin País";

struct LocationRule {
    std::string pattern;  // matched case-insensitively as a substring
    std::string province;
    std::string country;
    std::int64_t order = 0;

    friend bool operator==(const LocationRule &, const LocationRule &) = default;
};

struct LocationEntry {
    std::string raw_location;
    std::string province{kNoProvince};
    std::string country{kNoCountry};

    bool matched() const { return !(province == kNoProvince && country == kNoCountry); }

    friend bool operator==(const LocationEntry &, const LocationEntry &) = default;
};

/// Sorts by order and checks the rule invariants.
inline std::vector<LocationRule> validate_rules(std::vector<LocationRule> rules) {
    std::sort(rules.begin(), rules.end(), [](const auto &a, const auto &b) { return a.order < b.order; });
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (unicode::trim(rules[i].pattern).empty())
            throw RuleError("rule " + std::to_string(rules[i].order) + " has an empty pattern");
        if (i > 0 && rules[i].order == rules[i - 1].order)
            throw RuleError("duplicate rule order " + std::to_string(rules[i].order));
    }
    return rules;
}

/// locations.tsv: order<TAB>pattern<TAB>province<TAB>country, optional
/// header line starting with "order".
inline std::vector<LocationRule> load_location_rules(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw RuleError("cannot open location rules " + path.string());
    std::vector<LocationRule> rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (unicode::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::size_t pos = 0;
        for (;;) {
            const auto tab = line.find('\t', pos);
            f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (lineno == 1 && f[0] == "order") continue;
        if (f.size() != 4)
            throw RuleError(path.string() + ":" + std::to_string(lineno) + ": expected 4 tab-separated fields");
        LocationRule r;
        try {
            std::size_t used = 0;
            r.order = std::stoll(f[0], &used);
            if (used != f[0].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw RuleError(path.string() + ":" + std::to_string(lineno) + ": bad order '" + f[0] + "'");
        }
        r.pattern = f[1];
        r.province = f[2];
        r.country = f[3];
        rules.push_back(std::move(r));
    }
    return validate_rules(std::move(rules));
}

// Ordered first-match-wins substring rules with a memo per distinct raw
// location string. Lookups are safe from many threads; the memo holds a
// deterministic value per key so concurrent inserts of the same key agree.
class LocationNormalizer {
public:
    explicit LocationNormalizer(std::vector<LocationRule> rules) : rules_(validate_rules(std::move(rules))) {
        folded_.reserve(rules_.size());
        for (const auto &r : rules_) folded_.push_back(unicode::canonical(r.pattern));
    }

    LocationEntry normalize(std::string_view raw) const {
        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(std::string(raw)); it != memo_.end()) return it->second;
        }
        LocationEntry entry = compute(raw);
        std::unique_lock lock(mutex_);
        return memo_.try_emplace(std::string(raw), std::move(entry)).first->second;
    }

    const std::vector<LocationRule> &rules() const noexcept { return rules_; }

    std::size_t cached() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

private:
    LocationEntry compute(std::string_view raw) const {
        LocationEntry entry;
        entry.raw_location = std::string(raw);
        if (raw.empty()) return entry;
        const std::string lowered = unicode::canonical(raw);
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            if (lowered.find(folded_[i]) != std::string::npos) {
                entry.province = rules_[i].province;
                entry.country = rules_[i].country;
                break;
            }
        }
        return entry;
    }

    std::vector<LocationRule> rules_;
    std::vector<std::string> folded_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, LocationEntry> memo_;
};

/// Stateless form of LocationNormalizer::normalize.
inline LocationEntry normalize_location(std::string_view raw, const std::vector<LocationRule> &rules) {
    return LocationNormalizer(rules).normalize(raw);
}

}  // namespace pulso
