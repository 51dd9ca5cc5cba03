#pragma once

// Thin helpers over ICU for the two text operations everything else relies
// on: walking UTF-8 by code point, and the canonical match form
// (NFC + full case folding, diacritics preserved).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "pulso/error.hpp"

namespace pulso::unicode {

struct CodePoint {
    UChar32 value;
    std::size_t offset;  // byte offset of the first unit
    std::size_t length;  // byte length; ill-formed bytes decode as U+FFFD, length 1
};

inline std::vector<CodePoint> decode(std::string_view text) {
    std::vector<CodePoint> out;
    out.reserve(text.size());
    const auto *s = reinterpret_cast<const uint8_t *>(text.data());
    const auto n = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < n) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, n, c);
        if (c < 0) c = 0xFFFD;
        out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)});
    }
    return out;
}

inline std::size_t length(std::string_view text) {
    const auto *s = reinterpret_cast<const uint8_t *>(text.data());
    const auto n = static_cast<int32_t>(text.size());
    int32_t i = 0;
    std::size_t count = 0;
    while (i < n) {
        UChar32 c;
        U8_NEXT(s, i, n, c);
        ++count;
    }
    return count;
}

inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

// General category P* only; emoji and other symbols are not punctuation.
inline bool is_punct(UChar32 c) { return u_ispunct(c) != 0; }

inline const icu::Normalizer2 &nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2 *n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
    return *n;
}

/// Canonical match form used for every dictionary key and token comparison.
/// "Aníbal" and "Anibal" stay distinct; "MACRI" and "macri" collide.
inline std::string canonical(std::string_view text) {
    const icu::Normalizer2 &norm = nfc();
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString composed = norm.normalize(u, status);
    composed.foldCase(U_FOLD_CASE_DEFAULT);
    icu::UnicodeString result = norm.normalize(composed, status);
    if (U_FAILURE(status)) throw Error("unicode normalization failed");
    std::string out;
    result.toUTF8String(out);
    return out;
}

inline std::string to_upper(std::string_view text) {
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    u.toUpper();
    std::string out;
    u.toUTF8String(out);
    return out;
}

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

}  // namespace pulso::unicode
