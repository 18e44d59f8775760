#pragma once
// Quote-atomic tokenizer. Plain text splits into whitespace-delimited word
// chunks (punctuation stays attached); spans of text matching a stored quote
// collapse into a single quote token; pipeline sentinels (<EOP> <SOC> <EOC>
// <SOF>) are recognized even when glued to surrounding text. Every byte of
// the input lands in exactly one token (or its recorded whitespace), so
// detokenization is byte-exact by construction.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexguard/factstore.hpp"
#include "lexguard/text.hpp"

namespace lexguard::tok {

enum class Sentinel { EOP, SOC, EOC, SOF };

inline std::string_view sentinel_text(Sentinel s) {
    switch (s) {
    case Sentinel::EOP: return "<EOP>";
    case Sentinel::SOC: return "<SOC>";
    case Sentinel::EOC: return "<EOC>";
    case Sentinel::SOF: return "<SOF>";
    }
    return "";
}

struct Token {
    enum class Kind { Word, Quote, Sentinel };
    Kind kind = Kind::Word;
    std::string text;        // exact source bytes of the token
    std::string pre;         // whitespace run preceding it
    size_t begin = 0;        // byte span of `text` in the source
    size_t end = 0;
    std::string quote_id;    // Kind::Quote only
    size_t quote_words = 0;  // Kind::Quote: words the match consumed
    Sentinel sentinel = Sentinel::EOP; // Kind::Sentinel only
};

struct TokenSeq {
    std::vector<Token> tokens;
    std::string trailing_ws;
};

namespace detail {

struct Piece {
    std::string_view text;
    std::string_view pre;
    size_t begin = 0, end = 0;
    std::optional<Sentinel> sentinel;
    size_t nw_begin = 0, nw_end = 0; // range in the run's normalized stream
};

inline std::optional<Sentinel> sentinel_at(std::string_view s, size_t pos, size_t* len) {
    static constexpr std::pair<std::string_view, Sentinel> kMarks[] = {
        {"<EOP>", Sentinel::EOP},
        {"<SOC>", Sentinel::SOC},
        {"<EOC>", Sentinel::EOC},
        {"<SOF>", Sentinel::SOF},
    };
    for (auto [m, s2] : kMarks) {
        if (s.substr(pos, m.size()) == m) {
            *len = m.size();
            return s2;
        }
    }
    return std::nullopt;
}

inline std::vector<Piece> split_pieces(std::string_view text) {
    std::vector<Piece> pieces;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        size_t ws = i;
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view pre = text.substr(ws, i - ws);
        size_t cb = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == cb) {
            // trailing whitespace only: keep as a phantom piece so the
            // caller can attach it to the sequence
            if (!pre.empty()) pieces.push_back({text.substr(ws, 0), pre, i, i, {}});
            break;
        }
        // split the chunk at embedded sentinels
        size_t p = cb;
        std::string_view cur_pre = pre;
        while (p < i) {
            size_t q = p, mlen = 0;
            std::optional<Sentinel> hit;
            while (q < i) {
                if ((hit = sentinel_at(text, q, &mlen))) break;
                ++q;
            }
            if (q > p)
                pieces.push_back({text.substr(p, q - p), cur_pre, p, q, {}}), cur_pre = {};
            if (hit) {
                pieces.push_back({text.substr(q, mlen), cur_pre, q, q + mlen, hit});
                cur_pre = {};
                q += mlen;
            }
            p = q;
        }
    }
    return pieces;
}

} // namespace detail

// Tokenize `text`; with a frozen store, spans matching stored quotes become
// single quote tokens (greedy leftmost-longest, anchored at chunk starts,
// never crossing a sentinel).
inline TokenSeq tokenize(std::string_view text, const facts::FactStore* store = nullptr) {
    TokenSeq seq;
    auto pieces = detail::split_pieces(text);
    // peel off the phantom trailing-whitespace piece
    if (!pieces.empty() && pieces.back().text.empty() && !pieces.back().sentinel) {
        seq.trailing_ws = std::string(pieces.back().pre);
        pieces.pop_back();
    }

    size_t i = 0;
    const size_t n = pieces.size();
    while (i < n) {
        if (pieces[i].sentinel) {
            Token t;
            t.kind = Token::Kind::Sentinel;
            t.sentinel = *pieces[i].sentinel;
            t.text = std::string(pieces[i].text);
            t.pre = std::string(pieces[i].pre);
            t.begin = pieces[i].begin;
            t.end = pieces[i].end;
            seq.tokens.push_back(std::move(t));
            ++i;
            continue;
        }
        // contiguous run of word pieces
        size_t run_end = i;
        while (run_end < n && !pieces[run_end].sentinel) ++run_end;
        std::vector<std::string> flat;
        for (size_t k = i; k < run_end; ++k) {
            auto ws = text::normalize_words(pieces[k].text);
            pieces[k].nw_begin = flat.size();
            flat.insert(flat.end(), ws.begin(), ws.end());
            pieces[k].nw_end = flat.size();
        }
        size_t k = i;
        while (k < run_end) {
            std::optional<facts::FactStore::Match> m;
            if (store && pieces[k].nw_begin < pieces[k].nw_end)
                m = store->longest_match(flat, pieces[k].nw_begin);
            size_t cover_end = 0; // one past last covered piece
            if (m) {
                size_t target = pieces[k].nw_begin + m->length;
                for (size_t q = k; q < run_end; ++q) {
                    if (pieces[q].nw_end == target && (q + 1 == run_end ||
                                                       pieces[q + 1].nw_begin == target)) {
                        cover_end = q + 1;
                        break;
                    }
                    if (pieces[q].nw_end > target) break;
                }
            }
            if (m && cover_end > k) {
                Token t;
                t.kind = Token::Kind::Quote;
                t.pre = std::string(pieces[k].pre);
                t.begin = pieces[k].begin;
                t.end = pieces[cover_end - 1].end;
                t.text = std::string(text.substr(t.begin, t.end - t.begin));
                t.quote_id = m->quote->id;
                t.quote_words = m->length;
                seq.tokens.push_back(std::move(t));
                k = cover_end;
            } else {
                Token t;
                t.kind = Token::Kind::Word;
                t.text = std::string(pieces[k].text);
                t.pre = std::string(pieces[k].pre);
                t.begin = pieces[k].begin;
                t.end = pieces[k].end;
                seq.tokens.push_back(std::move(t));
                ++k;
            }
        }
        i = run_end;
    }
    return seq;
}

inline std::string detokenize(const TokenSeq& seq) {
    std::string out;
    for (const auto& t : seq.tokens) {
        out += t.pre;
        out += t.text;
    }
    out += seq.trailing_ws;
    return out;
}

struct TrainingPair {
    std::string context; // space-joined tokens preceding the target
    std::string target;

    friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

// A pair per token after the first, except that an ellipsis-only token is
// never a target: elided text marks a hole in the source, not something the
// sequence should learn to predict. It still joins the context.
inline std::vector<TrainingPair> training_pairs(const TokenSeq& seq) {
    std::vector<TrainingPair> out;
    std::string context;
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
        const Token& t = seq.tokens[i];
        if (i > 0) {
            bool gap_only = t.kind == Token::Kind::Word &&
                            text::normalize_words(t.text) ==
                                std::vector<std::string>{text::kGap};
            if (!gap_only) out.push_back({context, t.text});
        }
        if (!context.empty()) context += ' ';
        context += t.text;
    }
    return out;
}

} // namespace lexguard::tok
