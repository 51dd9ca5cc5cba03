#pragma once

// Sentence segmentation, tokenization and dictionary scoring.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulso/lexicon.hpp"
#include "pulso/tweet.hpp"
#include "pulso/unicode.hpp"

namespace pulso {

struct ScorerOptions {
    bool filter_links = true;
    bool filter_user_mentions = false;
    bool filter_hashtags = false;
};

struct SentenceSentiment {
    std::int64_t tweet_id = 0;
    std::string screen_name;
    std::size_t sentence_index = 0;
    std::optional<std::string> attribute;
    std::int64_t sentiment_score = 0;

    friend bool operator==(const SentenceSentiment &, const SentenceSentiment &) = default;
};

struct SentenceScore {
    std::optional<std::string> attribute;
    std::int64_t score = 0;

    friend bool operator==(const SentenceScore &, const SentenceScore &) = default;
};

namespace detail {

inline bool is_sentence_end(UChar32 c) {
    return c == '.' || c == '!' || c == '?' || c == 0x2026;  // … HORIZONTAL ELLIPSIS
}

inline void push_segment(std::vector<std::string> &out, std::string_view piece) {
    // trim unicode whitespace at both ends
    const auto cps = unicode::decode(piece);
    std::size_t b = 0, e = cps.size();
    while (b < e && unicode::is_space(cps[b].value)) ++b;
    while (e > b && unicode::is_space(cps[e - 1].value)) --e;
    if (b == e) return;
    const std::size_t from = cps[b].offset;
    const std::size_t to = cps[e - 1].offset + cps[e - 1].length;
    out.emplace_back(piece.substr(from, to - from));
}

inline bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

inline bool is_link(std::string_view token) {
    return starts_with_ci(token, "http://") || starts_with_ci(token, "https://");
}

}  // namespace detail

/// Splits at newlines and after . ! ? … when the next character is
/// whitespace or the end of text. Punctuation stays with its sentence.
inline std::vector<std::string> segment_sentences(std::string_view text) {
    std::vector<std::string> out;
    const auto cps = unicode::decode(text);
    std::size_t start = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const UChar32 c = cps[i].value;
        if (c == '\n' || c == '\r' || c == 0x2028 || c == 0x2029) {
            detail::push_segment(out, text.substr(start, cps[i].offset - start));
            start = cps[i].offset + cps[i].length;
        } else if (detail::is_sentence_end(c) &&
                   (i + 1 == cps.size() || unicode::is_space(cps[i + 1].value))) {
            const std::size_t end = cps[i].offset + cps[i].length;
            detail::push_segment(out, text.substr(start, end - start));
            start = end;
        }
    }
    if (start < text.size()) detail::push_segment(out, text.substr(start));
    return out;
}

/// Whitespace tokenizer producing canonical-form tokens.
///
/// Surrounding punctuation is stripped except a leading '#' or '@' directly
/// attached to the word. Tokens that become empty are dropped. When a
/// lexicon is given, a raw token that is itself a dictionary key (":)" for
/// instance) is kept as is.
inline std::vector<std::string> tokenize(std::string_view sentence, const ScorerOptions &options,
                                         const Lexicon *keep_verbatim = nullptr) {
    std::vector<std::string> tokens;
    const auto cps = unicode::decode(sentence);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && unicode::is_space(cps[i].value)) ++i;
        if (i == cps.size()) break;
        std::size_t j = i;
        while (j < cps.size() && !unicode::is_space(cps[j].value)) ++j;

        const std::size_t raw_from = cps[i].offset;
        const std::string_view raw = sentence.substr(raw_from, cps[j - 1].offset + cps[j - 1].length - raw_from);

        if (options.filter_links && detail::is_link(raw)) {
            i = j;
            continue;
        }
        if (keep_verbatim != nullptr && !(options.filter_user_mentions && raw.front() == '@') &&
            !(options.filter_hashtags && raw.front() == '#')) {
            std::string key = unicode::canonical(raw);
            if (keep_verbatim->contains(key)) {
                tokens.push_back(std::move(key));
                i = j;
                continue;
            }
        }

        std::size_t b = i, e = j;
        while (e > b && unicode::is_punct(cps[e - 1].value)) --e;
        while (b < e && unicode::is_punct(cps[b].value)) {
            const UChar32 c = cps[b].value;
            if ((c == '#' || c == '@') && b + 1 < e && !unicode::is_punct(cps[b + 1].value)) break;
            ++b;
        }
        i = j;
        if (b == e) continue;

        const std::size_t from = cps[b].offset;
        const std::string_view word = sentence.substr(from, cps[e - 1].offset + cps[e - 1].length - from);
        if (options.filter_links && detail::is_link(word)) continue;
        if (options.filter_user_mentions && word.front() == '@') continue;
        if (options.filter_hashtags && word.front() == '#') continue;
        tokens.push_back(unicode::canonical(word));
    }
    return tokens;
}

/// Scores one tokenized sentence.
///
/// Attribute and synonym phrases are matched first, leftmost-longest and
/// non-overlapping; the first one in token order names the attribute and
/// every matched token is consumed. Polarity phrases are then matched the
/// same way over the remaining tokens, each adding +1 or -1. A token
/// contributes to at most one match.
inline SentenceScore score_sentence(const std::vector<std::string> &tokens, const Lexicon &lexicon) {
    SentenceScore result;
    const std::size_t n = tokens.size();
    const std::size_t longest = lexicon.max_phrase_tokens();
    std::vector<bool> consumed(n, false);

    // longest span starting at `at`, over unconsumed tokens, accepted by `match`
    auto longest_match = [&](std::size_t at, auto &&match) -> std::size_t {
        std::string phrase;
        std::size_t best = 0;
        for (std::size_t len = 1; len <= longest && at + len <= n; ++len) {
            if (consumed[at + len - 1]) break;
            if (len > 1) phrase.push_back(' ');
            phrase += tokens[at + len - 1];
            if (match(phrase)) best = len;
        }
        return best;
    };

    for (std::size_t i = 0; i < n;) {
        const std::size_t len = longest_match(i, [&](const std::string &p) {
            return lexicon.attribute_of(p).has_value();
        });
        if (len == 0) {
            ++i;
            continue;
        }
        std::string phrase = tokens[i];
        for (std::size_t k = 1; k < len; ++k) phrase += ' ' + tokens[i + k];
        if (!result.attribute) result.attribute = lexicon.attribute_of(phrase);
        for (std::size_t k = 0; k < len; ++k) consumed[i + k] = true;
        i += len;
    }

    for (std::size_t i = 0; i < n;) {
        if (consumed[i]) {
            ++i;
            continue;
        }
        int sign = 0;
        const std::size_t len = longest_match(i, [&](const std::string &p) {
            const int s = lexicon.polarity(p);
            if (s != 0) sign = s;
            return s != 0;
        });
        if (len == 0) {
            ++i;
            continue;
        }
        result.score += sign;
        for (std::size_t k = 0; k < len; ++k) consumed[i + k] = true;
        i += len;
    }
    return result;
}

/// One row per sentence of `text`, indices from 0.
inline std::vector<SentenceSentiment> analyze_text(std::int64_t tweet_id, std::string_view screen_name,
                                                   std::string_view text, const Lexicon &lexicon,
                                                   const ScorerOptions &options) {
    std::vector<SentenceSentiment> rows;
    const auto sentences = segment_sentences(text);
    rows.reserve(sentences.size());
    for (std::size_t idx = 0; idx < sentences.size(); ++idx) {
        auto scored = score_sentence(tokenize(sentences[idx], options, &lexicon), lexicon);
        rows.push_back({tweet_id, std::string(screen_name), idx, std::move(scored.attribute), scored.score});
    }
    return rows;
}

/// Scores only `text`; the retweeted text is ignored.
inline std::vector<SentenceSentiment> analyze_tweet(const TweetRecord &record, const Lexicon &lexicon,
                                                    const ScorerOptions &options = {}) {
    return analyze_text(record.id, record.screen_name, record.text, lexicon, options);
}

}  // namespace pulso
