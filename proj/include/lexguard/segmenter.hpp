#pragma once

// Problem / Commentary / Fact segmentation with sentinel emission.
//
// Rule-based: the Problem runs up to the first analysis cue (a reporting
// phrase, a citation, or a first-person judicial marker, snapped back to the
// start of its sentence); quotation blocks immediately following a hand-over
// trigger become Fact segments bound to the trigger's citation key; the rest
// is Commentary. Sentinels <EOP> <SOC> <EOC> <SOF> mark the boundaries.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexguard/citation.hpp"
#include "lexguard/tokenizer.hpp"

namespace lexguard::seg {

struct UnbalancedQuotes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SegKind { Problem, Commentary, Fact };

struct Segment {
    SegKind kind = SegKind::Problem;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::optional<std::string> bound_key;  // Fact segments only

    friend bool operator==(const Segment&, const Segment&) = default;
};

// A reporting trigger that introduces a verbatim quote: cue phrase and/or
// citation, ending at (or within a few characters of) a colon or the opening
// quotation mark of the quote it announces.
struct HandOver {
    std::size_t begin = 0;
    std::size_t end = 0;
    cite::Citation citation;
    bool trailing_colon = false;
};

namespace detail {

inline std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '\'';
}

// Phrases a judge uses to hand off to quoted authority.
inline const std::vector<std::string>& reporting_cues() {
    static const std::vector<std::string> v = {
        "dictum of",   "said in",     "described by", "observed in",
        "stated that", "provided that", "said this",  "provides",
        "cited",       "explained in", "discussed in", "observed that",
    };
    return v;
}

// First-person / impersonal judicial analysis markers: where the narrative
// of the dispute ends and the court's own reasoning begins.
inline const std::vector<std::string>& judicial_markers() {
    static const std::vector<std::string> v = {
        "it is my view",  "in my judgment", "i think",
        "in my view",     "in my opinion",  "it can hardly be doubted",
    };
    return v;
}

// All word-bounded occurrences of `phrase` in `low` (both lowercase).
inline void find_phrase(const std::string& low, const std::string& phrase,
                        std::vector<std::pair<std::size_t, std::size_t>>& hits) {
    std::size_t at = 0;
    while ((at = low.find(phrase, at)) != std::string::npos) {
        std::size_t end = at + phrase.size();
        bool lb = at == 0 || !word_char(low[at - 1]);
        bool rb = end == low.size() || !word_char(low[end]);
        if (lb && rb) hits.emplace_back(at, end);
        at += 1;
    }
}

inline bool curly_open_at(const std::string& s, std::size_t i) {
    return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
           static_cast<unsigned char>(s[i + 1]) == 0x80 &&
           static_cast<unsigned char>(s[i + 2]) == 0x9C;
}

inline bool curly_close_at(const std::string& s, std::size_t i) {
    return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
           static_cast<unsigned char>(s[i + 1]) == 0x80 &&
           static_cast<unsigned char>(s[i + 2]) == 0x9D;
}

struct QuoteBlock {
    std::size_t begin = 0;  // includes the delimiters
    std::size_t end = 0;
};

// Pair up quotation delimiters. Straight double quotes toggle; curly quotes
// nest and must balance. Quotes of the other style inside an open block are
// kept inside it (nested quotes do not split a Fact). Single quotes count
// only when a plausible opener/closer pair wraps at least five words.
inline std::vector<QuoteBlock> quote_blocks(const std::string& s) {
    std::vector<QuoteBlock> out;
    bool straight = false;
    std::size_t sopen = 0, copen = 0;
    int curly = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        if (curly_open_at(s, i)) {
            if (!straight) {
                if (curly == 0) copen = i;
                ++curly;
            }
            i += 3;
            continue;
        }
        if (curly_close_at(s, i)) {
            if (!straight) {
                if (curly == 0) throw UnbalancedQuotes("closing quote with no opener");
                if (--curly == 0) out.push_back({copen, i + 3});
            }
            i += 3;
            continue;
        }
        if (s[i] == '"' && curly == 0) {
            if (!straight) {
                straight = true;
                sopen = i;
            } else {
                out.push_back({sopen, i + 1});
                straight = false;
            }
        }
        ++i;
    }
    if (straight || curly != 0) throw UnbalancedQuotes("unclosed quotation mark");

    // Single-quote pass, outside the blocks found above.
    auto inside = [&](std::size_t p) {
        for (const auto& b : out)
            if (p >= b.begin && p < b.end) return true;
        return false;
    };
    std::size_t j = 0;
    while (j < s.size()) {
        bool opener = s[j] == '\'' && !inside(j) &&
                      (j == 0 || std::isspace(static_cast<unsigned char>(s[j - 1])) ||
                       s[j - 1] == '(') &&
                      j + 1 < s.size() && word_char(s[j + 1]);
        if (!opener) {
            ++j;
            continue;
        }
        std::size_t k = j + 1;
        while (k < s.size()) {
            if (s[k] == '\'' && word_char(s[k - 1]) &&
                (k + 1 == s.size() || !word_char(s[k + 1])))
                break;
            ++k;
        }
        if (k < s.size() && !inside(k)) {
            int words = 0;
            bool in_word = false;
            for (std::size_t p = j + 1; p < k; ++p) {
                bool w = !std::isspace(static_cast<unsigned char>(s[p]));
                if (w && !in_word) ++words;
                in_word = w;
            }
            if (words >= 5) {
                out.push_back({j, k + 1});
                j = k + 1;
                continue;
            }
        }
        ++j;
    }
    std::sort(out.begin(), out.end(),
              [](const QuoteBlock& a, const QuoteBlock& b) { return a.begin < b.begin; });
    return out;
}

enum class Term { Colon, Quote, End };

struct TermHit {
    std::size_t end = 0;  // trigger end: past the colon, or at the last solid char
    Term kind = Term::End;
};

// case-insensitive ASCII compare of s[i..] against a lowercase literal
inline bool low_eq(const std::string& s, std::size_t i, const char* lit) {
    for (std::size_t k = 0; lit[k]; ++k) {
        if (i + k >= s.size()) return false;
        char c = s[i + k];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != lit[k]) return false;
    }
    return true;
}

// Scan forward from a citation for the trigger terminator, skipping bridge
// filler (", at 466, that") but stopping cold at anything substantive.
inline std::optional<TermHit> scan_terminator(const std::string& s, std::size_t from,
                                              std::size_t max_skip = 24) {
    std::size_t i = from, solid = from;
    while (i < s.size() && i - from <= max_skip) {
        char c = s[i];
        if (c == ':') return TermHit{i + 1, Term::Colon};
        if (c == '"' || curly_open_at(s, i)) return TermHit{solid, Term::Quote};
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == ',' || c == '.' || c == '-') {
            solid = ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            solid = i;
            continue;
        }
        bool skipped = false;
        for (const char* w : {"that", "adding", "at", "page", "para"}) {
            std::size_t n = std::string_view(w).size();
            if (low_eq(s, i, w) && (i + n == s.size() || !word_char(s[i + n]))) {
                i += n;
                solid = i;
                skipped = true;
                break;
            }
        }
        if (skipped) continue;
        return std::nullopt;
    }
    if (i >= s.size()) return TermHit{solid, Term::End};
    return std::nullopt;
}

// Tight terminator for the citation-then-cue form: the cue must butt against
// the colon / quote / end of text.
inline std::optional<TermHit> cue_terminator(const std::string& s, std::size_t cue_end) {
    std::size_t i = cue_end;
    while (i < s.size() && i - cue_end <= 3 &&
           std::isspace(static_cast<unsigned char>(s[i])))
        ++i;
    if (i >= s.size()) return TermHit{cue_end, Term::End};
    if (i - cue_end > 3) return std::nullopt;
    if (s[i] == ':') return TermHit{i + 1, Term::Colon};
    if (s[i] == '"' || curly_open_at(s, i)) return TermHit{cue_end, Term::Quote};
    return std::nullopt;
}

// Start of the sentence containing `pos`: just past the previous sentence
// terminator (or closing quote) followed by whitespace.
inline std::size_t sentence_start(const std::string& s, std::size_t pos) {
    std::size_t best = 0;
    for (std::size_t j = 0; j + 1 < pos && j + 1 < s.size(); ++j) {
        bool ender = s[j] == '.' || s[j] == '!' || s[j] == '?' || s[j] == '"' ||
                     curly_close_at(s, j);
        std::size_t after = curly_close_at(s, j) ? j + 3 : j + 1;
        if (ender && after < s.size() &&
            std::isspace(static_cast<unsigned char>(s[after])) && after <= pos)
            best = after;
    }
    while (best < pos && std::isspace(static_cast<unsigned char>(s[best]))) ++best;
    return best;
}

inline std::optional<std::pair<std::size_t, std::size_t>> trim_span(const std::string& s,
                                                                    std::size_t b,
                                                                    std::size_t e) {
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (b >= e) return std::nullopt;
    return std::make_pair(b, e);
}

}  // namespace detail

// Find reporting triggers that introduce quoted authority. Three shapes:
//   cue … citation … terminator     ("relied on the dictum of X in A v B …:")
//   citation … cue terminator       ("In A v B [1956] … Denning LJ stated that")
//   citation terminator             ("A v B [2003] at paragraph 8 :")
// where the terminator is a colon, the opening quote itself, or end of text
// (end of text does not count for the bare-citation shape).
inline std::vector<HandOver> detect_handover(const std::string& text) {
    std::vector<HandOver> out;
    const std::string low = detail::ascii_lower(text);
    std::vector<std::pair<std::size_t, std::size_t>> cues;
    for (const auto& p : detail::reporting_cues()) detail::find_phrase(low, p, cues);
    std::sort(cues.begin(), cues.end());

    for (const auto& sp : cite::detect_citations(text)) {
        // cue before the citation, bridged by name words only
        const std::pair<std::size_t, std::size_t>* before = nullptr;
        for (const auto& c : cues) {
            if (c.second > sp.begin) break;
            if (sp.begin - c.second > 60) continue;
            bool clean = true;
            for (std::size_t i = c.second; i < sp.begin && clean; ++i) {
                char ch = text[i];
                clean = std::isalpha(static_cast<unsigned char>(ch)) ||
                        std::isspace(static_cast<unsigned char>(ch)) || ch == ',' ||
                        ch == '(' || ch == ')' || ch == '.' || ch == '\'';
            }
            if (clean) before = &c;
        }
        if (before) {
            if (auto t = detail::scan_terminator(text, sp.end)) {
                out.push_back({before->first, t->end, sp.citation, t->kind == detail::Term::Colon});
                continue;
            }
        }

        // citation, then a cue within the same clause
        bool taken = false;
        int depth = 0;
        std::size_t stop = std::min(text.size(), sp.end + 130);
        for (std::size_t i = sp.end; i < stop; ++i) {
            char ch = text[i];
            if (ch == '(') ++depth;
            else if (ch == ')') depth = depth > 0 ? depth - 1 : 0;
            else if (ch == '"' || ch == ':' || detail::curly_open_at(text, i)) break;
            else if (depth == 0 && ch == '.' && i + 1 < text.size() &&
                     std::isspace(static_cast<unsigned char>(text[i + 1]))) {
                std::size_t nx = i + 1;
                while (nx < text.size() && std::isspace(static_cast<unsigned char>(text[nx]))) ++nx;
                if (nx < text.size() && std::isupper(static_cast<unsigned char>(text[nx]))) break;
            }
            for (const auto& c : cues) {
                if (c.first != i) continue;
                if (auto t = detail::cue_terminator(text, c.second)) {
                    out.push_back({sp.begin, t->end, sp.citation,
                                   t->kind == detail::Term::Colon});
                    taken = true;
                }
                break;
            }
            if (taken) break;
        }
        if (taken) continue;

        // bare citation running straight into a colon or the quote itself
        if (auto t = detail::scan_terminator(text, sp.end)) {
            if (t->kind != detail::Term::End)
                out.push_back({sp.begin, t->end, sp.citation, t->kind == detail::Term::Colon});
        }
    }
    return out;
}

struct SegmentResult {
    std::vector<Segment> segments;
    tok::TokenSeq tokens;
};

// Sentinel well-formedness: the sentinel subsequence must match
//   (EOP (SOC (EOC (SOF)?)*)?)?
// i.e. a lone <EOP> is fine (quote-free document), commentary opens with
// <SOC>, every Fact is introduced by <EOC><SOF>.
inline bool sentinels_well_formed(const std::vector<tok::Token>& tokens) {
    enum { Start, P, C, E, F } st = Start;
    for (const auto& t : tokens) {
        if (t.kind != tok::Token::Kind::Sentinel) continue;
        switch (t.sentinel) {
            case tok::Sentinel::EOP:
                if (st != Start) return false;
                st = P;
                break;
            case tok::Sentinel::SOC:
                if (st != P) return false;
                st = C;
                break;
            case tok::Sentinel::EOC:
                if (st != C && st != F && st != E) return false;
                st = E;
                break;
            case tok::Sentinel::SOF:
                if (st != E) return false;
                st = F;
                break;
        }
    }
    return true;
}

inline bool sentinels_well_formed(const tok::TokenSeq& seq) {
    return sentinels_well_formed(seq.tokens);
}

inline SegmentResult segment(const std::string& text,
                             const facts::FactStore* store = nullptr) {
    auto blocks = detail::quote_blocks(text);  // throws UnbalancedQuotes
    auto inside_block = [&](std::size_t p) {
        for (const auto& b : blocks)
            if (p >= b.begin && p < b.end) return true;
        return false;
    };

    // Fact segments: the first quote block after each hand-over trigger,
    // separated from it by whitespace only.
    std::vector<Segment> fact_segs;
    std::vector<bool> used(blocks.size(), false);
    for (const auto& h : detect_handover(text)) {
        if (inside_block(h.begin)) continue;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            if (used[bi] || blocks[bi].begin < h.end) continue;
            bool ws_gap = true;
            for (std::size_t p = h.end; p < blocks[bi].begin && ws_gap; ++p)
                ws_gap = std::isspace(static_cast<unsigned char>(text[p])) != 0;
            if (!ws_gap) break;
            std::size_t fe = blocks[bi].end;
            while (fe < text.size() &&
                   (text[fe] == '.' || text[fe] == ',' || text[fe] == ';' ||
                    text[fe] == '!' || text[fe] == '?'))
                ++fe;
            fact_segs.push_back(
                {SegKind::Fact, blocks[bi].begin, fe, cite::canonical_key(h.citation)});
            used[bi] = true;
            break;
        }
    }
    std::sort(fact_segs.begin(), fact_segs.end(),
              [](const Segment& a, const Segment& b) { return a.begin < b.begin; });

    // Problem / Commentary boundary: earliest cue outside any quote block.
    const std::string low = detail::ascii_lower(text);
    std::optional<std::size_t> first_cue;
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    for (const auto& p : detail::reporting_cues()) detail::find_phrase(low, p, hits);
    for (const auto& p : detail::judicial_markers()) detail::find_phrase(low, p, hits);
    for (const auto& h : hits)
        if (!inside_block(h.first) && (!first_cue || h.first < *first_cue))
            first_cue = h.first;
    for (const auto& sp : cite::detect_citations(text))
        if (!inside_block(sp.begin) && (!first_cue || sp.begin < *first_cue))
            first_cue = sp.begin;

    std::optional<std::size_t> boundary;
    if (first_cue) boundary = detail::sentence_start(text, *first_cue);

    SegmentResult res;
    if (boundary) {
        if (auto p = detail::trim_span(text, 0, *boundary))
            res.segments.push_back({SegKind::Problem, p->first, p->second, {}});
        std::size_t cur = *boundary;
        for (const auto& f : fact_segs) {
            if (auto c = detail::trim_span(text, cur, f.begin))
                res.segments.push_back({SegKind::Commentary, c->first, c->second, {}});
            res.segments.push_back(f);
            cur = f.end;
        }
        if (auto c = detail::trim_span(text, cur, text.size()))
            res.segments.push_back({SegKind::Commentary, c->first, c->second, {}});
    } else {
        if (auto p = detail::trim_span(text, 0, text.size()))
            res.segments.push_back({SegKind::Problem, p->first, p->second, {}});
    }

    // Token stream with sentinels spliced in at the boundaries.
    std::vector<std::pair<std::size_t, tok::Sentinel>> marks;
    bool tail_commentary = false;
    if (boundary) {
        marks.emplace_back(*boundary, tok::Sentinel::EOP);
        marks.emplace_back(*boundary, tok::Sentinel::SOC);
        std::size_t cur = *boundary;
        for (const auto& f : fact_segs) {
            marks.emplace_back(f.begin, tok::Sentinel::EOC);
            marks.emplace_back(f.begin, tok::Sentinel::SOF);
            cur = f.end;
        }
        tail_commentary = detail::trim_span(text, cur, text.size()).has_value();
    }

    tok::TokenSeq base = tok::tokenize(text, store);
    res.tokens.trailing_ws = base.trailing_ws;
    auto emit = [&](tok::Sentinel s, std::size_t at) {
        tok::Token t;
        t.kind = tok::Token::Kind::Sentinel;
        t.sentinel = s;
        t.text = tok::sentinel_text(s);
        t.begin = t.end = at;
        res.tokens.tokens.push_back(t);
    };
    std::size_t mi = 0;
    for (const auto& t : base.tokens) {
        while (mi < marks.size() && marks[mi].first <= t.begin) {
            emit(marks[mi].second, marks[mi].first);
            ++mi;
        }
        res.tokens.tokens.push_back(t);
    }
    while (mi < marks.size()) {
        emit(marks[mi].second, marks[mi].first);
        ++mi;
    }
    if (boundary) {
        if (tail_commentary) emit(tok::Sentinel::EOC, text.size());
    } else if (!res.segments.empty()) {
        emit(tok::Sentinel::EOP, text.size());
    }
    return res;
}

}  // namespace lexguard::seg
