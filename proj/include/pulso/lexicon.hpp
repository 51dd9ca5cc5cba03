#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pulso/error.hpp"
#include "pulso/unicode.hpp"

namespace pulso {

/// Dictionary key form: canonical match form with internal whitespace
/// collapsed to single spaces, so "aumentará  los impuestos" is the same
/// three-token phrase as the tokenizer would produce.
inline std::string lexicon_key(std::string_view entry) {
    const std::string folded = unicode::canonical(unicode::trim(entry));
    std::string key;
    bool pending_space = false;
    for (const auto &cp : unicode::decode(folded)) {
        if (unicode::is_space(cp.value)) {
            pending_space = !key.empty();
            continue;
        }
        if (pending_space) key.push_back(' ');
        pending_space = false;
        key.append(folded, cp.offset, cp.length);
    }
    return key;
}

inline std::size_t phrase_length(std::string_view key) {
    return key.empty() ? 0 : static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
}

struct LexiconPaths {
    std::filesystem::path white_list;
    std::filesystem::path normalization;
    std::filesystem::path positive;
    std::filesystem::path negative;

    static LexiconPaths in_directory(const std::filesystem::path &dir) {
        return {dir / "white_list.txt", dir / "normalization.tsv", dir / "pos_words.txt",
                dir / "neg_words.txt"};
    }
};

// The four sentiment dictionaries. Immutable once built; every key is in
// lexicon_key form and the first spelling seen is kept for display.
class Lexicon {
public:
    Lexicon() = default;

    static Lexicon build(const std::vector<std::string> &attributes,
                         const std::vector<std::pair<std::string, std::string>> &synonyms,
                         const std::vector<std::string> &positive,
                         const std::vector<std::string> &negative) {
        Lexicon lx;
        if (attributes.empty()) throw LexiconError("attribute white list is empty");
        for (const auto &a : attributes) lx.attributes_.insert(lx.remember(a, "attribute"));
        for (const auto &[base, synonym] : synonyms) {
            const std::string base_key = lexicon_key(base);
            if (!lx.attributes_.contains(base_key))
                throw LexiconError("synonym '" + synonym + "' has unknown canonical base '" + base + "'");
            const std::string key = lx.remember(synonym, "synonym");
            if (lx.attributes_.contains(key) && key != base_key)
                throw LexiconError("synonym '" + synonym + "' is itself a different attribute");
            auto [it, inserted] = lx.synonyms_.emplace(key, base_key);
            if (!inserted && it->second != base_key)
                throw LexiconError("synonym '" + synonym + "' maps to both '" + it->second + "' and '" +
                                   base_key + "'");
        }
        for (const auto &w : positive) lx.positive_.insert(lx.remember(w, "positive word"));
        for (const auto &w : negative) {
            const std::string key = lx.remember(w, "negative word");
            if (lx.positive_.contains(key))
                throw LexiconError("polarity conflict: '" + w + "' is both positive and negative");
            lx.negative_.insert(key);
        }
        return lx;
    }

    const std::set<std::string> &attributes() const noexcept { return attributes_; }
    const std::map<std::string, std::string> &synonyms() const noexcept { return synonyms_; }
    const std::set<std::string> &positive_words() const noexcept { return positive_; }
    const std::set<std::string> &negative_words() const noexcept { return negative_; }

    /// Canonical attribute named by `key`, directly or through a synonym.
    std::optional<std::string> attribute_of(const std::string &key) const {
        if (attributes_.contains(key)) return key;
        if (auto it = synonyms_.find(key); it != synonyms_.end()) return it->second;
        return std::nullopt;
    }

    /// +1, -1 or 0.
    int polarity(const std::string &key) const {
        if (positive_.contains(key)) return 1;
        if (negative_.contains(key)) return -1;
        return 0;
    }

    bool contains(const std::string &key) const {
        return attributes_.contains(key) || synonyms_.contains(key) || positive_.contains(key) ||
               negative_.contains(key);
    }

    std::size_t max_phrase_tokens() const noexcept { return max_phrase_; }

    const std::string &display(const std::string &key) const {
        auto it = display_.find(key);
        return it == display_.end() ? key : it->second;
    }

    bool empty() const noexcept { return attributes_.empty(); }

    friend bool operator==(const Lexicon &, const Lexicon &) = default;

private:
    std::string remember(const std::string &entry, const char *kind) {
        std::string key = lexicon_key(entry);
        if (key.empty()) throw LexiconError(std::string("empty ") + kind + " entry");
        display_.emplace(key, std::string(unicode::trim(entry)));
        max_phrase_ = std::max(max_phrase_, phrase_length(key));
        return key;
    }

    std::set<std::string> attributes_;
    std::map<std::string, std::string> synonyms_;
    std::set<std::string> positive_;
    std::set<std::string> negative_;
    std::map<std::string, std::string> display_;
    std::size_t max_phrase_ = 0;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot open dictionary file " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (unicode::trim(line).empty()) continue;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

/// Reads the four dictionary files. No comment syntax: lines starting with
/// '#' are hashtag entries.
inline Lexicon load_lexicon(const LexiconPaths &paths) {
    const auto attributes = detail::read_lines(paths.white_list);
    std::vector<std::pair<std::string, std::string>> synonyms;
    std::size_t lineno = 0;
    for (const auto &line : detail::read_lines(paths.normalization)) {
        ++lineno;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw LexiconError(paths.normalization.string() + ": entry " + std::to_string(lineno) +
                               " is not canonical<TAB>synonym");
        synonyms.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return Lexicon::build(attributes, synonyms, detail::read_lines(paths.positive),
                          detail::read_lines(paths.negative));
}

/// Writes the dictionaries in display spelling, ordered by key.
inline void save_lexicon(const Lexicon &lexicon, const LexiconPaths &paths) {
    auto open = [](const std::filesystem::path &p) {
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary);
        if (!out) throw LexiconError("cannot write " + p.string());
        return out;
    };
    {
        auto out = open(paths.white_list);
        for (const auto &k : lexicon.attributes()) out << lexicon.display(k) << '\n';
    }
    {
        auto out = open(paths.normalization);
        for (const auto &[syn, base] : lexicon.synonyms())
            out << lexicon.display(base) << '\t' << lexicon.display(syn) << '\n';
    }
    {
        auto out = open(paths.positive);
        for (const auto &k : lexicon.positive_words()) out << lexicon.display(k) << '\n';
    }
    {
        auto out = open(paths.negative);
        for (const auto &k : lexicon.negative_words()) out << lexicon.display(k) << '\n';
    }
}

struct TermFrequency {
    std::string term;
    std::uint64_t count = 0;

    friend bool operator==(const TermFrequency &, const TermFrequency &) = default;
};

// Word counts for the dictionary tuning loop. Text is split on the single
// space character only, so "Macri," and "Macri" are different terms, as
// are "Macri" and "macri". Counters from separate partitions merge by sum.
class TermCounter {
public:
    void add(std::string_view text) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto next = text.find(' ', pos);
            const auto end = next == std::string_view::npos ? text.size() : next;
            if (end > pos) ++counts_[std::string(text.substr(pos, end - pos))];
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
    }

    void merge(const TermCounter &other) {
        for (const auto &[term, n] : other.counts_) counts_[term] += n;
    }

    /// Top `top_k` terms whose canonical form is in none of the dictionaries,
    /// by count descending then term ascending.
    std::vector<TermFrequency> top(const Lexicon &lexicon, std::size_t top_k) const {
        if (top_k < 1) throw Error("top_k must be at least 1");
        std::vector<TermFrequency> terms;
        for (const auto &[term, n] : counts_) {
            if (lexicon.contains(lexicon_key(term))) continue;
            terms.push_back({term, n});
        }
        auto by_rank = [](const TermFrequency &a, const TermFrequency &b) {
            return a.count != b.count ? a.count > b.count : a.term < b.term;
        };
        const std::size_t k = std::min(top_k, terms.size());
        std::partial_sort(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(k), terms.end(), by_rank);
        terms.resize(k);
        return terms;
    }

    std::size_t distinct() const noexcept { return counts_.size(); }

private:
    std::unordered_map<std::string, std::uint64_t> counts_;
};

namespace detail {
inline std::string_view text_of(std::string_view s) { return s; }
template <typename Record>
    requires requires(const Record &r) { std::string_view(r.text); }
std::string_view text_of(const Record &r) {
    return r.text;
}
}  // namespace detail

/// Frequency ranking over any range of strings or records with a `text` member.
template <typename Corpus>
std::vector<TermFrequency> suggest_terms(const Corpus &corpus, const Lexicon &lexicon, std::size_t top_k) {
    if (top_k < 1) throw Error("top_k must be at least 1");
    TermCounter counter;
    for (const auto &item : corpus) counter.add(detail::text_of(item));
    return counter.top(lexicon, top_k);
}

}  // namespace pulso
