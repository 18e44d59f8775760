#pragma once
// Case-citation grammar: parsing single citations, scanning prose for every
// citation span (full, year-only and bare party-pair forms), canonical keys
// that survive reporter formatting quirks, and round-trippable rendering.
//
// The scanner is anchored on the party connector ("v", "v.", "-v-" as a
// standalone word): party names grow outward from it, then an optional
// year/reporter/pinpoint tail is consumed. Ship-style case names without a
// party pair ("The Kapetan Markos N.L. (NO.2)") are out of grammar.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lexguard::cite {

enum class Series { WLR, AC, QB, KB, EMLR, AllER, ChD, LRCP, Amb, EWCACiv, UKHL, Other };

struct Pinpoint {
    enum class Kind { Page, Para };
    Kind kind = Kind::Page;
    int value = 0;

    friend bool operator==(const Pinpoint&, const Pinpoint&) = default;
};

struct Citation {
    std::string party1;
    std::string party2;
    std::optional<int> year;
    std::optional<int> volume;
    std::optional<Series> series;
    std::string series_other;          // set only when series == Other
    std::optional<int> page;           // first page, or neutral-citation number
    std::optional<Pinpoint> pinpoint;
    bool round_year = false;           // "(1767)" style nominate reporters

    friend bool operator==(const Citation&, const Citation&) = default;
};

struct CitationSpan {
    size_t begin = 0; // byte offsets into the scanned text
    size_t end = 0;
    Citation citation;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string_view series_label(Series s) {
    switch (s) {
    case Series::WLR: return "WLR";
    case Series::AC: return "AC";
    case Series::QB: return "QB";
    case Series::KB: return "KB";
    case Series::EMLR: return "EMLR";
    case Series::AllER: return "All ER";
    case Series::ChD: return "Ch D";
    case Series::LRCP: return "LR CP";
    case Series::Amb: return "Amb";
    case Series::EWCACiv: return "EWCA Civ";
    case Series::UKHL: return "UKHL";
    case Series::Other: return "";
    }
    return "";
}

namespace detail {

struct Tok {
    std::string_view s;
    size_t begin = 0, end = 0;
};

inline std::vector<Tok> lex(std::string_view text) {
    std::vector<Tok> out;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.push_back({text.substr(i, j - i), i, j});
        i = j;
    }
    return out;
}

inline bool is_connector(std::string_view s) {
    return s == "v" || s == "v." || s == "-v-";
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// strip closing punctuation that binds to prose, not to the citation
inline std::string_view rstrip_punct(std::string_view s, std::string_view chars = ",;:.!?\"'") {
    while (!s.empty() && chars.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    return s;
}

inline bool upper_start(std::string_view s) {
    for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            return std::isupper(static_cast<unsigned char>(c));
        if (c != '(' && c != '"' && c != '\'') return false;
    }
    return false;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// lowercase words allowed inside a party name when flanked by name words
inline bool is_joiner(std::string_view s) {
    std::string w = lower(s);
    return w == "of" || w == "and" || w == "for" || w == "y" || w == "de" || w == "la";
}

// lowercase corporate tails that may appear mid-name
inline bool is_name_abbrev(std::string_view s) {
    std::string w = lower(rstrip_punct(s, "."));
    return w == "ltd" || w == "plc" || w == "co" || w == "inc" || w == "ors" ||
           w == "anor" || w == "anr" || w == "llp" || w == "another" || w == "others";
}

// context words that precede a citation and must not be swallowed into it
inline bool is_lead_in(std::string_view s) {
    std::string w = lower(rstrip_punct(s, ".,:;"));
    return w == "in" || w == "see" || w == "as" || w == "per" || w == "cf" ||
           w == "and" || w == "but" || w == "nor" || w == "or" || w == "at" ||
           w == "by" || w == "from" || w == "with" || w == "upon" || w == "also" ||
           w == "following" || w == "applying" || w == "citing" || w == "namely" ||
           w == "including" || w == "include" || w == "eg" || w == "e.g" ||
           w == "ie" || w == "i.e" || w == "to" || w == "of" || w == "for" ||
           w == "compare" || w == "contrast" || w == "v" || w == "v." ||
           w == "-v-" || w == "&";
}

inline std::optional<int> bracket_year(std::string_view s, char open, char close) {
    s = rstrip_punct(s);
    if (s.size() < 6 || s.front() != open || s.back() != close) return std::nullopt;
    std::string_view inner = s.substr(1, s.size() - 2);
    if (inner.size() != 4 || !all_digits(inner)) return std::nullopt;
    int y = (inner[0] - '0') * 1000 + (inner[1] - '0') * 100 + (inner[2] - '0') * 10 +
            (inner[3] - '0');
    if (y < 1200 || y > 2099) return std::nullopt;
    return y;
}

// leading integer of a token ("626" from "626-627", "466" from "466,")
inline std::optional<int> leading_int(std::string_view s) {
    size_t k = 0;
    long v = 0;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
        v = v * 10 + (s[k] - '0');
        if (v > 1000000) return std::nullopt;
        ++k;
    }
    if (k == 0) return std::nullopt;
    // must not be glued to letters ("10th")
    if (k < s.size() && std::isalpha(static_cast<unsigned char>(s[k]))) return std::nullopt;
    return static_cast<int>(v);
}

// series token: letters and internal periods ("WLR", "A.C.", "Ll.")
inline bool series_word(std::string_view s) {
    s = rstrip_punct(s, ",;:");
    if (s.empty()) return false;
    bool alpha = false;
    for (char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) alpha = true;
        else if (c != '.' && c != '\'') return false;
    }
    return alpha;
}

inline std::string squash_series(std::string_view s) {
    std::string out;
    for (char c : s)
        if (std::isalpha(static_cast<unsigned char>(c)))
            out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

} // namespace detail

// Slug used in canonical keys: lowercase, periods/commas dropped,
// "Limited" folded to "ltd", "&" dropped, single-letter parenthesized
// initials promoted to the front ("Spurling (J) Ltd" -> "j spurling ltd").
inline std::string party_slug(std::string_view party) {
    std::vector<std::string> front, rest;
    for (const auto& t : detail::lex(party)) {
        std::string w;
        for (char c : t.s) {
            if (c == '.' || c == ',' || c == '"' || c == '\'' || c == ';' || c == ':') continue;
            w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        bool parens = w.size() >= 2 && w.front() == '(' && w.back() == ')';
        if (parens) w = w.substr(1, w.size() - 2);
        else {
            // strip stray unbalanced parens
            std::string u;
            for (char c : w)
                if (c != '(' && c != ')') u += c;
            w = u;
        }
        if (w.empty() || w == "&") continue;
        if (w == "limited") w = "ltd";
        if (parens && w.size() == 1 && std::isalpha(static_cast<unsigned char>(w[0])))
            front.push_back(w);
        else
            rest.push_back(w);
    }
    std::string out;
    for (const auto& w : front) {
        if (!out.empty()) out += '-';
        out += w;
    }
    for (const auto& w : rest) {
        if (!out.empty()) out += '-';
        out += w;
    }
    return out;
}

inline std::string series_slug(const Citation& c) {
    if (!c.series) return "";
    if (*c.series == Series::Other) {
        std::string s;
        for (char ch : c.series_other)
            if (std::isalnum(static_cast<unsigned char>(ch)))
                s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    }
    std::string s;
    for (char ch : series_label(*c.series)) {
        if (ch == ' ') s += '-';
        else s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return s;
}

// Canonical identity: parties + year + series + first page. The reporter
// volume is deliberately omitted so "[1956] WLR 461" and "[1956] 1 WLR 461"
// name the same case; pinpoints never participate.
inline std::string canonical_key(const Citation& c) {
    std::string key = party_slug(c.party1) + "-v-" + party_slug(c.party2);
    if (c.year) {
        key += '-';
        key += std::to_string(*c.year);
        if (c.series && c.page) {
            std::string s = series_slug(c);
            if (!s.empty()) {
                key += '-';
                key += s;
                key += '-';
                key += std::to_string(*c.page);
            }
        }
    }
    return key;
}

namespace detail {

struct Scanner {
    std::string_view text;
    std::vector<Tok> toks;

    explicit Scanner(std::string_view t) : text(t), toks(lex(t)) {}

    // Walk left from the connector collecting party-name tokens; returns the
    // index of the first token of the party, or nullopt.
    std::optional<size_t> party_start(size_t conn) const {
        if (conn == 0) return std::nullopt;
        size_t k = conn; // one past the last accepted token, walking down
        while (k > 0) {
            const Tok& t = toks[k - 1];
            std::string_view s = t.s;
            if (s.empty()) break;
            // prose punctuation glued to the end stops the walk
            char back = s.back();
            if (back == ',' || back == ';' || back == ':' || back == '"' || back == '!' ||
                back == '?')
                break;
            if (back == ')') {
                // consume a parenthesized unit "(J)" / "(No. 6)" / "(UK)"
                size_t m = k - 1;
                while (m > 0 && toks[m].s.find('(') == std::string_view::npos) --m;
                if (toks[m].s.find('(') == std::string_view::npos) break;
                k = m;
                continue;
            }
            if (upper_start(s) || s == "&" || is_name_abbrev(s)) {
                --k;
                continue;
            }
            if (is_joiner(s) && k >= 2 && upper_start(toks[k - 2].s)) {
                --k;
                continue;
            }
            break;
        }
        // trim context words and dangling joiners from the front
        while (k < conn &&
               (is_lead_in(toks[k].s) || is_joiner(toks[k].s) || toks[k].s == "&"))
            ++k;
        if (k == conn) return std::nullopt;
        return k;
    }

    // Walk right from the connector; returns one past the last party token.
    std::optional<size_t> party_end(size_t conn) const {
        size_t j = conn + 1;
        const size_t n = toks.size();
        bool stopped = false;
        while (j < n && !stopped) {
            std::string_view s = toks[j].s;
            if (s.empty()) break;
            if (s.front() == '(') {
                if (bracket_year(s, '(', ')')) break; // "(1767)" year, not a name part
                size_t m = j;
                while (m + 1 < n && s.find(')') == std::string_view::npos) s = toks[++m].s;
                if (s.find(')') == std::string_view::npos) break;
                j = m + 1;
                continue;
            }
            if (s.front() == '[' || std::isdigit(static_cast<unsigned char>(s.front()))) break;
            char back = s.back();
            bool ends_clause = back == ',' || back == ';' || back == ':' || back == '"' ||
                               back == '!' || back == '?';
            if (upper_start(s) || s == "&" || is_name_abbrev(s)) {
                // multi-letter word with a sentence period ends the name;
                // initials ("C.") and abbreviations ("Ltd.") continue
                bool sentence_dot = back == '.' && !is_name_abbrev(s) &&
                                    rstrip_punct(s, ".").size() > 1;
                ++j;
                if (ends_clause || sentence_dot) stopped = true;
                continue;
            }
            if (is_joiner(s) && j + 1 < n && !ends_clause &&
                (upper_start(toks[j + 1].s) || is_name_abbrev(toks[j + 1].s))) {
                ++j;
                continue;
            }
            break;
        }
        if (j == conn + 1) return std::nullopt;
        return j;
    }

    std::string slice(size_t tok_begin, size_t tok_end, std::string_view strip = "") const {
        std::string_view v = text.substr(toks[tok_begin].begin,
                                         toks[tok_end - 1].end - toks[tok_begin].begin);
        if (!strip.empty()) v = rstrip_punct(v, strip);
        return std::string(v);
    }

    // Party text keeps abbreviation and initial dots ("Ltd.", "C.") but
    // sheds sentence punctuation glued to the final word.
    std::string party_text(size_t tok_begin, size_t tok_end) const {
        std::string_view last = toks[tok_end - 1].s;
        bool keep_dot = is_name_abbrev(last) ||
                        (last.size() >= 2 && last.back() == '.' &&
                         rstrip_punct(last, ".").size() == 1);
        return slice(tok_begin, tok_end, keep_dot ? ",;:!?\"'" : ",;:.!?\"'");
    }

    // Map a squashed series token to the enum.
    static std::optional<Series> lookup_series(std::string_view squashed) {
        if (squashed == "WLR") return Series::WLR;
        if (squashed == "AC") return Series::AC;
        if (squashed == "QB") return Series::QB;
        if (squashed == "KB") return Series::KB;
        if (squashed == "EMLR") return Series::EMLR;
        if (squashed == "ALLER") return Series::AllER;
        if (squashed == "CHD") return Series::ChD;
        if (squashed == "AMB") return Series::Amb;
        if (squashed == "EWCACIV") return Series::EWCACiv;
        if (squashed == "UKHL") return Series::UKHL;
        if (squashed == "LRCP") return Series::LRCP;
        return std::nullopt;
    }

    struct Reporter {
        std::optional<int> volume;
        std::optional<Series> series;
        std::string series_other;
        std::optional<int> page;
        size_t next = 0;   // token index after the reporter
        size_t end = 0;    // byte offset of the last consumed character
    };

    // Parse "[vol] SERIES page" starting at token j. Handles glued
    // "W.L.R.461", multi-word "All E.R." / "Ch D" / "EWCA Civ", and the
    // volume-inside form "LR 8 CP 107".
    std::optional<Reporter> parse_reporter(size_t j) const {
        const size_t n = toks.size();
        Reporter r;
        if (j >= n) return std::nullopt;
        // optional volume
        if (auto v = leading_int(rstrip_punct(toks[j].s)); v && rstrip_punct(toks[j].s) ==
                std::to_string(*v) && *v >= 1 && *v <= 999) {
            r.volume = *v;
            ++j;
            if (j >= n) return std::nullopt;
        }
        std::string_view first = rstrip_punct(toks[j].s, ",;:");
        // glued series+page: letters/periods then digits in one token
        {
            size_t split = first.size();
            while (split > 0 && std::isdigit(static_cast<unsigned char>(first[split - 1])))
                --split;
            if (split > 0 && split < first.size()) {
                std::string_view letters = first.substr(0, split);
                std::string_view digits = first.substr(split);
                if (series_word(letters)) {
                    std::string sq = squash_series(letters);
                    if (auto s = lookup_series(sq)) r.series = *s;
                    else {
                        r.series = Series::Other;
                        r.series_other = std::string(rstrip_punct(letters, "."));
                    }
                    r.page = leading_int(digits);
                    r.next = j + 1;
                    r.end = toks[j].begin + rstrip_punct(toks[j].s, ",;:").size();
                    return r.page ? std::optional<Reporter>(r) : std::nullopt;
                }
            }
        }
        if (!series_word(first)) return std::nullopt;
        std::string sq = squash_series(first);
        size_t series_end_tok = j;
        // two-word series
        if (j + 1 < n) {
            std::string_view second = rstrip_punct(toks[j + 1].s, ",;:");
            if (series_word(second)) {
                std::string sq2 = sq + squash_series(second);
                if (lookup_series(sq2)) {
                    sq = sq2;
                    series_end_tok = j + 1;
                }
            }
            // "LR 8 CP" volume-inside form
            if (sq == "LR" && j + 2 < n) {
                auto vol2 = leading_int(rstrip_punct(toks[j + 1].s));
                std::string_view third = rstrip_punct(toks[j + 2].s, ",;:");
                if (vol2 && series_word(third)) {
                    r.volume = vol2;
                    sq = "LR" + squash_series(third);
                    series_end_tok = j + 2;
                }
            }
        }
        if (auto s = lookup_series(sq)) {
            r.series = *s;
        } else {
            r.series = Series::Other;
            r.series_other = std::string(rstrip_punct(first, "."));
        }
        size_t pj = series_end_tok + 1;
        if (pj >= n) return std::nullopt;
        std::string_view ptok = rstrip_punct(toks[pj].s);
        auto page = leading_int(ptok);
        if (!page || *page < 1) return std::nullopt;
        // reject if digits glued to more text ("1945" style prose years are
        // handled by the year parser; here a page is a standalone number)
        if (ptok != std::to_string(*page)) return std::nullopt;
        r.page = page;
        r.next = pj + 1;
        r.end = toks[pj].begin + ptok.size();
        return r;
    }

    struct Pin {
        Pinpoint pin;
        size_t next = 0;
        size_t end = 0;
    };

    // Pinpoint forms: "at 466", ", at 466", "at p 652", "at p. 116",
    // "at page 466", "at para 34", "at paragraph 8", "at paras 38, 62 and
    // 111" (first number), ", 96", "296 , 319", "at [10]", "[136]".
    std::optional<Pin> parse_pinpoint(size_t j, bool prev_had_comma) const {
        const size_t n = toks.size();
        if (j >= n) return std::nullopt;
        bool comma = prev_had_comma;
        if (toks[j].s == ",") {
            comma = true;
            ++j;
            if (j >= n) return std::nullopt;
        }
        auto finish = [&](Pinpoint::Kind kind, int value, size_t tok,
                          size_t core_len) -> std::optional<Pin> {
            if (value < 1) return std::nullopt;
            Pin p;
            p.pin = {kind, value};
            p.next = tok + 1;
            p.end = toks[tok].begin + core_len;
            // swallow "…, 62 and 111" continuations of a pinpoint list
            while (p.next < n) {
                size_t k = p.next;
                bool sep = false;
                if (toks[k].s == "and" || toks[k].s == ",") {
                    sep = true;
                    ++k;
                } else if (!toks[k - 1].s.empty() && toks[k - 1].s.back() == ',') {
                    sep = true;
                }
                if (!sep || k >= n) break;
                std::string_view c2 = rstrip_punct(toks[k].s);
                auto v2 = leading_int(c2);
                if (!v2 || c2 != std::to_string(*v2)) break;
                p.end = toks[k].begin + c2.size();
                p.next = k + 1;
            }
            return p;
        };
        std::string_view s = toks[j].s;
        // bracketed paragraph "[136]"
        if (s.size() >= 3 && s.front() == '[') {
            std::string_view inner = rstrip_punct(s.substr(1), "].,;:");
            if (all_digits(inner) && !bracket_year(s, '[', ']'))
                return finish(Pinpoint::Kind::Para, *leading_int(inner), j,
                              inner.size() + 2);
            return std::nullopt;
        }
        if (lower(s) == "at" || lower(s) == "(at") {
            ++j;
            if (j >= n) return std::nullopt;
            std::string_view t = toks[j].s;
            std::string w = lower(rstrip_punct(t, "."));
            Pinpoint::Kind kind = Pinpoint::Kind::Page;
            if (w == "p" || w == "page" || w == "pp" || w == "pages") {
                ++j;
            } else if (w == "para" || w == "paras" || w == "paragraph" || w == "paragraphs") {
                kind = Pinpoint::Kind::Para;
                ++j;
            }
            if (j >= n) return std::nullopt;
            std::string_view num = toks[j].s;
            if (num.size() >= 3 && num.front() == '[') {
                std::string_view inner = rstrip_punct(num.substr(1), "].,;:");
                if (all_digits(inner) && !bracket_year(num, '[', ']'))
                    return finish(Pinpoint::Kind::Para, *leading_int(inner), j,
                                  inner.size() + 2);
                return std::nullopt;
            }
            std::string_view core = rstrip_punct(num, ".,;:)!?\"'");
            auto v = leading_int(core);
            if (!v) return std::nullopt;
            return finish(kind, *v, j, core.size());
        }
        if (comma) {
            std::string_view core = rstrip_punct(s, ".,;:)!?\"'");
            auto v = leading_int(core);
            if (v && core == std::to_string(*v))
                return finish(Pinpoint::Kind::Page, *v, j, core.size());
        }
        return std::nullopt;
    }
};

} // namespace detail

// Scan prose for citation spans. Returns them in text order; overlapping
// candidates are resolved in favour of the earlier connector.
inline std::vector<CitationSpan> detect_citations(std::string_view prose) {
    using namespace detail;
    Scanner sc(prose);
    std::vector<CitationSpan> out;
    size_t claimed_until = 0; // byte offset already consumed by a span
    const size_t n = sc.toks.size();
    for (size_t i = 0; i < n; ++i) {
        if (!is_connector(sc.toks[i].s)) continue;
        if (sc.toks[i].begin < claimed_until) continue;
        auto p1b = sc.party_start(i);
        auto p2e = sc.party_end(i);
        if (!p1b || !p2e) continue;
        if (sc.toks[*p1b].begin < claimed_until) continue;

        Citation c;
        c.party1 = sc.party_text(*p1b, i);
        c.party2 = sc.party_text(i + 1, *p2e);
        // shed prose parens/quotes glued to the front of the first word
        size_t p1_off = 0;
        while (p1_off < c.party1.size() &&
               std::string_view("([\"'").find(c.party1[p1_off]) != std::string_view::npos)
            ++p1_off;
        c.party1.erase(0, p1_off);
        if (c.party1.empty() || c.party2.empty()) continue;

        size_t tok_end = *p2e;                       // one past last consumed token
        size_t byte_end = sc.toks[i + 1].begin + c.party2.size();

        // optional year
        size_t j = *p2e;
        std::optional<int> year;
        bool round_year = false;
        if (j < n) {
            if (auto y = bracket_year(sc.toks[j].s, '[', ']')) {
                year = y;
            } else if (auto y2 = bracket_year(sc.toks[j].s, '(', ')')) {
                year = y2;
                round_year = true;
            }
        }
        if (year) {
            c.year = year;
            c.round_year = round_year;
            size_t inner_len = 6; // [dddd]
            byte_end = sc.toks[j].begin + inner_len;
            tok_end = j + 1;
            // optional reporter
            if (auto rep = sc.parse_reporter(j + 1)) {
                c.volume = rep->volume;
                c.series = rep->series;
                c.series_other = rep->series_other;
                c.page = rep->page;
                tok_end = rep->next;
                byte_end = rep->end;
                // parallel citations: "; [2003] QB 1270" — consume, keep primary
                while (tok_end < n) {
                    size_t k = tok_end;
                    bool sep = false;
                    if (sc.toks[k].s == ";" || sc.toks[k].s == ",") {
                        sep = true;
                        ++k;
                    } else {
                        std::string_view prev = sc.toks[tok_end - 1].s;
                        if (!prev.empty() && (prev.back() == ';' || prev.back() == ','))
                            sep = true;
                    }
                    if (!sep || k >= n) break;
                    if (!bracket_year(sc.toks[k].s, '[', ']') &&
                        !bracket_year(sc.toks[k].s, '(', ')'))
                        break;
                    auto rep2 = sc.parse_reporter(k + 1);
                    if (!rep2) break;
                    tok_end = rep2->next;
                    byte_end = rep2->end;
                }
            }
            // optional pinpoint
            bool prev_comma = tok_end > 0 && !sc.toks[tok_end - 1].s.empty() &&
                              sc.toks[tok_end - 1].s.back() == ',';
            if (auto pin = sc.parse_pinpoint(tok_end, prev_comma)) {
                c.pinpoint = pin->pin;
                tok_end = pin->next;
                byte_end = pin->end;
            }
        } else {
            // bare citation: party pair only; demand real names (multi-char
            // somewhere) so stray "x v y" prose doesn't trigger
            bool namey = false;
            for (size_t k = *p1b; k < *p2e; ++k)
                if (k != i && rstrip_punct(sc.toks[k].s, ".,;:\"'").size() >= 2) namey = true;
            if (!namey) continue;
            if (auto pin = sc.parse_pinpoint(tok_end, false)) {
                c.pinpoint = pin->pin;
                tok_end = pin->next;
                byte_end = pin->end;
            }
        }

        CitationSpan span;
        span.begin = sc.toks[*p1b].begin + p1_off;
        span.end = byte_end;
        span.citation = std::move(c);
        claimed_until = span.end;
        out.push_back(std::move(span));
        i = tok_end > 0 ? tok_end - 1 : i;
    }
    return out;
}

// Parse one citation given as a standalone string. The whole input (minus
// surrounding whitespace/trailing punctuation) must be a single citation.
inline Citation parse_citation(std::string_view s) {
    auto spans = detect_citations(s);
    if (spans.empty()) throw ParseError("not a citation: '" + std::string(s) + "'");
    if (spans.size() > 1) throw ParseError("multiple citations in '" + std::string(s) + "'");
    const auto& sp = spans.front();
    // leading context words are forgiven ("In X v Y"), trailing prose is not
    std::string_view tail = s.substr(sp.end);
    while (!tail.empty() &&
           (std::isspace(static_cast<unsigned char>(tail.front())) ||
            std::string_view(".,;:!?\"')").find(tail.front()) != std::string_view::npos))
        tail.remove_prefix(1);
    if (!tail.empty())
        throw ParseError("trailing text after citation: '" + std::string(tail) + "'");
    return sp.citation;
}

// Canonical display form; parallel citations are never re-emitted.
inline std::string render(const Citation& c) {
    std::string out = c.party1 + " v " + c.party2;
    if (c.year) {
        out += c.round_year ? " (" : " [";
        out += std::to_string(*c.year);
        out += c.round_year ? ")" : "]";
        if (c.series && c.page) {
            out += ' ';
            if (*c.series == Series::LRCP) {
                out += "LR ";
                if (c.volume) out += std::to_string(*c.volume) + ' ';
                out += "CP";
            } else {
                if (c.volume) out += std::to_string(*c.volume) + ' ';
                std::string_view lbl = *c.series == Series::Other
                                           ? std::string_view(c.series_other)
                                           : series_label(*c.series);
                out += lbl;
            }
            out += ' ';
            out += std::to_string(*c.page);
        }
    }
    if (c.pinpoint) {
        out += c.pinpoint->kind == Pinpoint::Kind::Para ? " at para " : " at ";
        out += std::to_string(c.pinpoint->value);
    }
    return out;
}

} // namespace lexguard::cite
