#pragma once
// Word-level normal form shared by the quote matcher, the fact store trie
// and feature extraction. Normalization produces a token sequence, not a
// string: quotes are compared word by word, and an ellipsis (either the
// single character or a run of three-plus dots) survives as a distinct gap
// marker instead of vanishing into punctuation stripping.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexguard::text {

// Token a normalized ellipsis turns into (U+2026). No real word can collide
// with it: normalization maps every literal ellipsis to this marker before
// words are split, and edge-stripping never produces it.
inline const std::string kGap = "\xE2\x80\xA6";

inline bool is_gap(std::string_view w) { return w == kGap; }

namespace detail {

// Fold the handful of typographic characters the corpus uses into
// ASCII. Curly quotes -> straight, all dash variants -> hyphen. An
// ellipsis character becomes a padded three-dot run so the gap pass below
// treats "a…b" and "a...b" identically.
inline std::string fold_typography(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    while (i < in.size()) {
        unsigned char c = in[i];
        if (c == 0xE2 && i + 2 < in.size()) {
            unsigned char b1 = in[i + 1], b2 = in[i + 2];
            if (b1 == 0x80) {
                switch (b2) {
                case 0x9C: case 0x9D: out += '"'; i += 3; continue;  // “ ”
                case 0x98: case 0x99: out += '\''; i += 3; continue; // ‘ ’
                case 0x93: case 0x94: out += '-'; i += 3; continue;  // – —
                case 0xA6: out += " ... "; i += 3; continue;         // …
                }
            } else if (b1 == 0x88 && b2 == 0x92) { // − minus sign
                out += '-';
                i += 3;
                continue;
            }
        }
        out += static_cast<char>(c);
        ++i;
    }
    return out;
}

// Replace every run of three or more dots with a padded gap marker.
inline std::string mark_gaps(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    while (i < in.size()) {
        if (in[i] == '.') {
            size_t j = i;
            while (j < in.size() && in[j] == '.') ++j;
            if (j - i >= 3) {
                out += ' ';
                out += kGap;
                out += ' ';
            } else {
                out.append(in.substr(i, j - i));
            }
            i = j;
        } else {
            out += in[i++];
        }
    }
    return out;
}

inline constexpr std::string_view kEdgeChars = "\"'.,;:!?()[]{}-";

} // namespace detail

// Lowercase word sequence of `in`. Punctuation is stripped from word edges
// only, so internal apostrophes and abbreviation dots survive ("court's",
// "w.l.r.461"). Gap markers come through as their own tokens.
inline std::vector<std::string> normalize_words(std::string_view in) {
    std::string folded = detail::mark_gaps(detail::fold_typography(in));
    std::vector<std::string> words;
    size_t i = 0;
    const size_t n = folded.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(folded[i]))) ++i;
        size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(folded[j]))) ++j;
        if (j == i) break;
        std::string w = folded.substr(i, j - i);
        i = j;
        if (w == kGap) {
            words.push_back(kGap);
            continue;
        }
        size_t b = 0, e = w.size();
        while (b < e && detail::kEdgeChars.find(w[b]) != std::string_view::npos) ++b;
        while (e > b && detail::kEdgeChars.find(w[e - 1]) != std::string_view::npos) --e;
        if (b == e) continue;
        w = w.substr(b, e - b);
        std::transform(w.begin(), w.end(), w.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.push_back(std::move(w));
    }
    return words;
}

inline std::vector<std::string> without_gaps(const std::vector<std::string>& words) {
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words)
        if (!is_gap(w)) out.push_back(w);
    return out;
}

// Drop editorial interpolations: any bracketed span except a year
// ("[1956]", "[2003]") is reporter commentary, not quoted text. Nested
// brackets are consumed with the outermost pair.
inline std::string strip_editorial_brackets(std::string_view in) {
    auto is_year = [](std::string_view s) {
        size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        if (e - b != 4) return false;
        for (size_t k = b; k < e; ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        int y = (s[b] - '0') * 1000 + (s[b + 1] - '0') * 100 + (s[b + 2] - '0') * 10 + (s[b + 3] - '0');
        return (y >= 1200 && y <= 1999) || (y >= 2000 && y <= 2099);
    };
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    const size_t n = in.size();
    while (i < n) {
        if (in[i] == '[') {
            size_t j = i + 1;
            int depth = 1;
            while (j < n && depth) {
                if (in[j] == '[') ++depth;
                else if (in[j] == ']') --depth;
                ++j;
            }
            std::string_view inner = in.substr(i + 1, (j >= i + 2 ? j - i - 2 : 0));
            if (is_year(inner)) out.append(in.substr(i, j - i));
            i = j;
        } else {
            out += in[i++];
        }
    }
    return out;
}

// Word multiset: feature representation for intent comparison.
using Multiset = std::map<std::string, int>;

inline Multiset feature_multiset(const std::vector<std::string>& words,
                                 const std::set<std::string>& stopwords = {}) {
    Multiset m;
    for (const auto& w : words) {
        if (is_gap(w) || w.empty()) continue;
        if (stopwords.count(w)) continue;
        ++m[w];
    }
    return m;
}

// Multiset Jaccard: sum of per-word minima over sum of maxima. Two empty
// multisets count as identical.
inline double multiset_jaccard(const Multiset& a, const Multiset& b) {
    long mn = 0, mx = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            mx += ia->second;
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            mx += ib->second;
            ++ib;
        } else {
            mn += std::min(ia->second, ib->second);
            mx += std::max(ia->second, ib->second);
            ++ia;
            ++ib;
        }
    }
    if (mx == 0) return 1.0;
    return static_cast<double>(mn) / static_cast<double>(mx);
}

// Conventional English function-word list. Not applied by default anywhere;
// callers opt in (the classifier's calibrated default is the empty set).
inline const std::set<std::string>& common_stopwords() {
    static const std::set<std::string> s = {
        "a", "an", "and", "are", "as", "at", "be", "been", "but", "by", "for",
        "from", "had", "has", "have", "he", "her", "his", "if", "in", "is",
        "it", "its", "may", "must", "no", "not", "of", "on", "or", "shall",
        "she", "should", "so", "such", "that", "the", "their", "them", "then",
        "there", "these", "they", "this", "to", "was", "we", "were", "which",
        "who", "will", "with", "would",
    };
    return s;
}

} // namespace lexguard::text
