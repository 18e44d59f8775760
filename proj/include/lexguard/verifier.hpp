#pragma once
// Quote-fidelity classifier. Given a ground-truth judgment quote and a
// generated candidate, assign one of four categories — verbatim,
// close-verbatim (contained with only subtle word-level noise), semantic
// intent (same idea, different words), unrelated — and produce a word-level
// edit script explaining any divergence. An evaluation harness replays a
// labelled JSONL corpus and aggregates the per-category tallies.
//
// Alignment is ellipsis-aware throughout: a gap marker in the reference
// (an elided stretch, "…"/"...") absorbs up to gap_max candidate words at
// zero cost, so a quote abridged by the reporter still counts as contained.

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include <lexguard/text.hpp>

namespace lexguard::verify {

enum class MatchCategory {
    VerbatimMatch,
    CloseVerbatim,
    SemanticIntent,
    UnrelatedIntent,
};

inline constexpr std::size_t kCategoryCount = 4;

// Wire labels used by the fixture corpus and report JSON.
inline std::string_view category_label(MatchCategory c) {
    switch (c) {
    case MatchCategory::VerbatimMatch: return "verbatim";
    case MatchCategory::CloseVerbatim: return "close_verbatim";
    case MatchCategory::SemanticIntent: return "semantic_intent";
    case MatchCategory::UnrelatedIntent: return "unrelated_intent";
    }
    return "unrelated_intent";
}

inline std::optional<MatchCategory> category_from_label(std::string_view s) {
    if (s == "verbatim") return MatchCategory::VerbatimMatch;
    if (s == "close_verbatim") return MatchCategory::CloseVerbatim;
    if (s == "semantic_intent") return MatchCategory::SemanticIntent;
    if (s == "unrelated_intent") return MatchCategory::UnrelatedIntent;
    return std::nullopt;
}

// Calibrated decision thresholds. s_max bounds the substitution/deletion
// rate tolerated by the containment check; j_min is the content-word
// Jaccard floor for semantic intent; gap_max is the elastic width of one
// ellipsis. The stopword default is deliberately empty: on short legal
// quotes the function-word scaffolding carries signal, and dropping it
// was measured to hurt corpus agreement.
struct Thresholds {
    double s_max = 0.05;
    double j_min = 0.18;
    std::size_t gap_max = 20;
    std::set<std::string> stopwords{};
};

enum class EditKind { Substitute, Insert, Delete };

// One hunk of the word-level edit script. `position` indexes the
// gap-stripped normalized reference: the index of the first reference word
// the hunk touches, or for a pure insertion the reference word the new
// material lands in front of (ref word count = append at the end).
// The *_words vectors hold normalized words; the *_display twins keep the
// original casing for rendering.
struct DiffEdit {
    EditKind kind = EditKind::Substitute;
    std::size_t position = 0;
    std::vector<std::string> ref_words;
    std::vector<std::string> cand_words;
    std::vector<std::string> ref_display;
    std::vector<std::string> cand_display;

    bool operator==(const DiffEdit&) const = default;
};

// Normalized words (see text::normalize_words) plus the same words with
// their original casing, index-aligned.
struct NormalizedText {
    std::vector<std::string> words;
    std::vector<std::string> display;
};

inline std::vector<std::string> normalize(std::string_view in) {
    return text::normalize_words(in);
}

inline NormalizedText normalize_with_display(std::string_view in) {
    std::string folded = text::detail::mark_gaps(text::detail::fold_typography(in));
    NormalizedText out;
    std::size_t i = 0;
    const std::size_t n = folded.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(folded[i]))) ++i;
        std::size_t j = i;
        while (j < n && !std::isspace(static_cast<unsigned char>(folded[j]))) ++j;
        if (j == i) break;
        std::string w = folded.substr(i, j - i);
        i = j;
        if (w == text::kGap) {
            out.words.push_back(text::kGap);
            out.display.push_back(text::kGap);
            continue;
        }
        std::size_t b = 0, e = w.size();
        while (b < e && text::detail::kEdgeChars.find(w[b]) != std::string_view::npos) ++b;
        while (e > b && text::detail::kEdgeChars.find(w[e - 1]) != std::string_view::npos) --e;
        if (b == e) continue;
        std::string display = w.substr(b, e - b);
        std::string lower = display;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out.words.push_back(std::move(lower));
        out.display.push_back(std::move(display));
    }
    return out;
}

namespace detail {

using Words = std::vector<std::string>;

// Longest common subsequence pairing between a gap-bearing reference and a
// candidate. Gap markers never match anything; they are alignment-neutral
// here and earn their elasticity in the containment/diff passes. Returns
// (ref index, cand index) pairs in increasing order.
inline std::vector<std::pair<std::size_t, std::size_t>>
lcs_align(const Words& ref, const Words& cand) {
    const std::size_t n = ref.size(), m = cand.size();
    std::vector<int> dp((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> int& { return dp[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            if (!text::is_gap(ref[i]) && ref[i] == cand[j])
                at(i, j) = 1 + at(i + 1, j + 1);
            else
                at(i, j) = std::max(at(i + 1, j), at(i, j + 1));
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (!text::is_gap(ref[i]) && ref[i] == cand[j] && at(i, j) == 1 + at(i + 1, j + 1)) {
            pairs.emplace_back(i, j);
            ++i;
            ++j;
        } else if (at(i + 1, j) >= at(i, j + 1)) {
            ++i;
        } else {
            ++j;
        }
    }
    return pairs;
}

struct Containment {
    bool ok = false;
    double sub_rate = 1.0;  // substitutions+deletions over real reference words
};

// Does the candidate contain the reference? Tolerates a small rate of
// word substitutions/losses (s_max) and, between the first and last
// matched candidate words, as many unmatched candidate words as the
// reference's ellipses allow (gap_max each; a gap-free reference still
// gets one allowance so noise words do not defeat an otherwise solid
// containment). Material before the first or after the last match is
// free: containment, not equality.
inline Containment contain(const Words& ref, const Words& cand,
                           double s_max, std::size_t gap_max) {
    Containment r;
    std::size_t real = 0, gaps = 0;
    for (const auto& w : ref) (text::is_gap(w) ? ++gaps : ++real);
    if (real == 0) return r;
    auto pairs = lcs_align(ref, cand);
    if (pairs.empty()) return r;
    const std::size_t matched = pairs.size();
    const std::size_t subs_dels = real - matched;
    r.sub_rate = static_cast<double>(subs_dels) / static_cast<double>(real);
    if (r.sub_rate > s_max) return r;
    const std::size_t span = pairs.back().second - pairs.front().second + 1;
    std::size_t internal_ins = span - matched;
    internal_ins -= std::min(internal_ins, subs_dels);
    const std::size_t allowance = gap_max * std::max<std::size_t>(1, gaps);
    r.ok = internal_ins <= allowance;
    return r;
}

// Alignment value: matched words first (the longest common subsequence
// wins), script cost — unit insert/delete, matches free, gap-absorbed
// candidate words free — to break ties. Maximizing matches before
// minimizing cost stops an ellipsis from greedily swallowing words that a
// cheaper-looking script would rather skip matching.
struct AlignValue {
    int matches = 0;
    int cost = 0;

    bool operator==(const AlignValue&) const = default;
};

inline bool align_better(const AlignValue& a, const AlignValue& b) {
    if (a.matches != b.matches) return a.matches > b.matches;
    return a.cost < b.cost;
}

// Suffix table of alignment values from (ref[i..], cand[j..]), so the
// traceback reads left to right. A reference gap swallows up to gap_max
// candidate words for nothing.
inline std::vector<AlignValue> align_table(const Words& ref, const Words& cand,
                                           std::size_t gap_max) {
    const std::size_t n = ref.size(), m = cand.size();
    std::vector<AlignValue> dp((n + 1) * (m + 1));
    auto at = [&](std::size_t i, std::size_t j) -> AlignValue& {
        return dp[i * (m + 1) + j];
    };
    for (std::size_t j = 0; j <= m; ++j) at(n, j) = {0, static_cast<int>(m - j)};
    for (std::size_t i = n; i-- > 0;) {
        const bool gap = text::is_gap(ref[i]);
        at(i, m) = at(i + 1, m);
        if (!gap) at(i, m).cost += 1;
        for (std::size_t j = m; j-- > 0;) {
            AlignValue best;
            if (gap) {
                best = at(i + 1, j);
                const std::size_t kmax = std::min(gap_max, m - j);
                for (std::size_t k = 1; k <= kmax; ++k)
                    if (align_better(at(i + 1, j + k), best)) best = at(i + 1, j + k);
            } else {
                best = at(i + 1, j);
                best.cost += 1; // delete ref[i]
                AlignValue ins = at(i, j + 1);
                ins.cost += 1; // insert cand[j]
                if (align_better(ins, best)) best = ins;
                if (ref[i] == cand[j]) {
                    AlignValue hit = at(i + 1, j + 1);
                    hit.matches += 1;
                    if (align_better(hit, best)) best = hit;
                }
            }
            at(i, j) = best;
        }
    }
    return dp;
}

} // namespace detail

// Total words touched by a script: reference words removed plus candidate
// words introduced (a substitution counts both sides).
inline std::size_t script_cost(const std::vector<DiffEdit>& edits) {
    std::size_t c = 0;
    for (const auto& e : edits) c += e.ref_words.size() + e.cand_words.size();
    return c;
}

// Word-level edit script turning the reference into the candidate, over
// normalized words, under a longest-common-subsequence alignment: matched
// words are maximized first, then the script is the cheapest one that
// alignment allows. Reference ellipses absorb candidate words silently:
// whatever a gap soaks up appears in no hunk (the script describes edits
// to the words actually quoted, not to the elision). Hunk positions index
// the gap-stripped reference.
inline std::vector<DiffEdit> diff_words(std::string_view reference,
                                        std::string_view candidate,
                                        std::size_t gap_max = Thresholds{}.gap_max) {
    const NormalizedText ref = normalize_with_display(reference);
    const NormalizedText cand = normalize_with_display(candidate);
    const std::size_t n = ref.words.size(), m = cand.words.size();
    const std::vector<detail::AlignValue> dp =
        detail::align_table(ref.words, cand.words, gap_max);
    auto at = [&](std::size_t i, std::size_t j) -> const detail::AlignValue& {
        return dp[i * (m + 1) + j];
    };

    std::vector<DiffEdit> edits;
    DiffEdit del;   // pending deleted run
    DiffEdit ins;   // pending inserted run
    bool have_del = false, have_ins = false;
    std::size_t r = 0;  // gap-stripped reference index

    auto flush = [&](std::size_t anchor) {
        if (have_del && have_ins) {
            DiffEdit e;
            e.kind = EditKind::Substitute;
            e.position = del.position;
            e.ref_words = std::move(del.ref_words);
            e.ref_display = std::move(del.ref_display);
            e.cand_words = std::move(ins.cand_words);
            e.cand_display = std::move(ins.cand_display);
            edits.push_back(std::move(e));
        } else if (have_del) {
            del.kind = EditKind::Delete;
            edits.push_back(std::move(del));
        } else if (have_ins) {
            ins.kind = EditKind::Insert;
            ins.position = anchor;
            edits.push_back(std::move(ins));
        }
        del = DiffEdit{};
        ins = DiffEdit{};
        have_del = have_ins = false;
    };

    std::size_t i = 0, j = 0;
    while (i < n || j < m) {
        if (i < n && text::is_gap(ref.words[i])) {
            // Re-derive the best absorption width (smallest on ties).
            const std::size_t kmax = std::min(gap_max, m - j);
            std::size_t bestk = 0;
            detail::AlignValue best = at(i + 1, j);
            for (std::size_t k = 1; k <= kmax; ++k) {
                if (detail::align_better(at(i + 1, j + k), best)) {
                    best = at(i + 1, j + k);
                    bestk = k;
                }
            }
            flush(r);
            ++i;
            j += bestk;
            continue;
        }
        if (i < n && j < m && ref.words[i] == cand.words[j]) {
            detail::AlignValue hit = at(i + 1, j + 1);
            hit.matches += 1;
            if (hit == at(i, j)) {
                flush(r);
                ++i;
                ++j;
                ++r;
                continue;
            }
        }
        if (i < n) {
            detail::AlignValue dele = at(i + 1, j);
            dele.cost += 1;
            if (j == m || dele == at(i, j)) {
                if (!have_del) {
                    del.position = r;
                    have_del = true;
                }
                del.ref_words.push_back(ref.words[i]);
                del.ref_display.push_back(ref.display[i]);
                ++i;
                ++r;
                continue;
            }
        }
        ins.cand_words.push_back(cand.words[j]);
        ins.cand_display.push_back(cand.display[j]);
        have_ins = true;
        ++j;
    }
    flush(r);
    return edits;
}

// Replay a script against the gap-stripped normalized reference. Round
// trips diff_words exactly when the reference has no ellipses (absorbed
// candidate words are unrecoverable by design).
inline std::vector<std::string> apply_edits(const std::vector<std::string>& ref_words,
                                            const std::vector<DiffEdit>& edits) {
    std::vector<std::string> out;
    std::size_t i = 0;
    for (const auto& e : edits) {
        if (e.position < i || e.position > ref_words.size())
            throw std::invalid_argument("apply_edits: hunk out of order");
        out.insert(out.end(), ref_words.begin() + static_cast<std::ptrdiff_t>(i),
                   ref_words.begin() + static_cast<std::ptrdiff_t>(e.position));
        i = e.position;
        out.insert(out.end(), e.cand_words.begin(), e.cand_words.end());
        if (e.kind != EditKind::Insert) {
            if (i + e.ref_words.size() > ref_words.size())
                throw std::invalid_argument("apply_edits: hunk exceeds reference");
            i += e.ref_words.size();
        }
    }
    out.insert(out.end(), ref_words.begin() + static_cast<std::ptrdiff_t>(i), ref_words.end());
    return out;
}

// Square-bracketed editorial insertions inside a quote (a judge glossing
// quoted legislation). Bracketed years — citation syntax — are exempt.
// Nested brackets are reported as one outermost span; an unclosed bracket
// runs to the end of the string.
struct BracketSpan {
    std::size_t begin = 0;  // byte offset of '['
    std::size_t end = 0;    // one past the matching ']'
    std::string inner;      // text between the brackets

    bool operator==(const BracketSpan&) const = default;
};

inline std::vector<BracketSpan> detect_editorial_brackets(std::string_view quote) {
    auto is_year = [](std::string_view s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        if (e - b != 4) return false;
        for (std::size_t k = b; k < e; ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        int y = (s[b] - '0') * 1000 + (s[b + 1] - '0') * 100 + (s[b + 2] - '0') * 10 +
                (s[b + 3] - '0');
        return (y >= 1200 && y <= 1999) || (y >= 2000 && y <= 2099);
    };
    std::vector<BracketSpan> spans;
    std::size_t i = 0;
    const std::size_t n = quote.size();
    while (i < n) {
        if (quote[i] != '[') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        int depth = 1;
        while (j < n && depth) {
            if (quote[j] == '[') ++depth;
            else if (quote[j] == ']') --depth;
            ++j;
        }
        std::string_view inner = quote.substr(i + 1, j >= i + 2 ? j - i - 2 : 0);
        if (depth > 0) inner = quote.substr(i + 1);  // ran off the end unclosed
        if (!is_year(inner)) {
            BracketSpan s;
            s.begin = i;
            s.end = j;
            s.inner = std::string(inner);
            spans.push_back(std::move(s));
        }
        i = j;
    }
    return spans;
}

// Audit record attached to every classification.
struct Scores {
    double substitution_rate = 1.0;  // best directional containment rate
    double jaccard = 0.0;            // content-word multiset Jaccard
    bool ref_in_cand = false;
    bool cand_in_ref = false;
};

struct ClassifyResult {
    MatchCategory category = MatchCategory::UnrelatedIntent;
    std::vector<DiffEdit> edits;
    Scores scores;
};

// Decision cascade, first hit wins:
//   1. gap-stripped normalized equality            -> VerbatimMatch
//   2. containment either way around (s_max-clean) -> CloseVerbatim
//   3. content-word Jaccard >= j_min               -> SemanticIntent
//   4. otherwise                                   -> UnrelatedIntent
// Editorial bracket spans in the reference are excluded before comparing:
// they are the quoting court's words, not the source's. The edit script is
// computed on the same bracket-stripped reference. Case-insensitive
// throughout; the script's display fields keep the original casing.
inline ClassifyResult classify_match(std::string_view reference,
                                     std::string_view candidate,
                                     const Thresholds& th = {}) {
    const std::string bare_ref = text::strip_editorial_brackets(reference);
    const std::vector<std::string> rw = normalize(bare_ref);
    const std::vector<std::string> cw = normalize(candidate);

    ClassifyResult res;
    res.edits = diff_words(bare_ref, candidate, th.gap_max);

    const auto fwd = detail::contain(rw, cw, th.s_max, th.gap_max);
    const auto bwd = detail::contain(cw, rw, th.s_max, th.gap_max);
    res.scores.ref_in_cand = fwd.ok;
    res.scores.cand_in_ref = bwd.ok;
    res.scores.substitution_rate = std::min(fwd.sub_rate, bwd.sub_rate);
    res.scores.jaccard = text::multiset_jaccard(text::feature_multiset(rw, th.stopwords),
                                                text::feature_multiset(cw, th.stopwords));

    if (text::without_gaps(rw) == text::without_gaps(cw))
        res.category = MatchCategory::VerbatimMatch;
    else if (fwd.ok || bwd.ok)
        res.category = MatchCategory::CloseVerbatim;
    else if (res.scores.jaccard >= th.j_min)
        res.category = MatchCategory::SemanticIntent;
    else
        res.category = MatchCategory::UnrelatedIntent;
    return res;
}

// ---------------------------------------------------------------------------
// Evaluation corpus

enum class EvalMode { Continuation, Insertion };

inline std::string_view mode_name(EvalMode m) {
    return m == EvalMode::Insertion ? "insertion" : "continuation";
}

struct EvalCase {
    std::string id;
    std::string case_title;
    EvalMode mode = EvalMode::Continuation;
    std::string sequence;         // prompt context fed to the generator
    std::string judgment_quote;   // ground truth
    std::string generative_quote; // what the model produced
    MatchCategory paper_label = MatchCategory::UnrelatedIntent;
};

struct CorpusFormatError : std::runtime_error {
    explicit CorpusFormatError(const std::string& what) : std::runtime_error(what) {}
};

// One JSON object per line, exactly the EvalCase fields. Unknown keys,
// missing keys, wrong types, empty quotes and bad labels all fail loudly
// with the offending line number.
inline std::vector<EvalCase> load_eval_cases(std::istream& in) {
    static const std::set<std::string> kKeys = {
        "id", "case_title", "mode", "sequence",
        "judgment_quote", "generative_quote", "paper_label",
    };
    std::vector<EvalCase> cases;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw CorpusFormatError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(e.what());
        }
        if (!j.is_object()) fail("not a JSON object");
        for (const auto& [k, v] : j.items()) {
            (void)v;
            if (!kKeys.count(k)) fail("unknown field '" + k + "'");
        }
        EvalCase c;
        try {
            c.id = j.at("id").get<std::string>();
            c.case_title = j.at("case_title").get<std::string>();
            c.sequence = j.at("sequence").get<std::string>();
            c.judgment_quote = j.at("judgment_quote").get<std::string>();
            c.generative_quote = j.at("generative_quote").get<std::string>();
            const std::string mode = j.at("mode").get<std::string>();
            if (mode == "continuation") c.mode = EvalMode::Continuation;
            else if (mode == "insertion") c.mode = EvalMode::Insertion;
            else fail("bad mode '" + mode + "'");
            const std::string label = j.at("paper_label").get<std::string>();
            auto cat = category_from_label(label);
            if (!cat) fail("bad paper_label '" + label + "'");
            c.paper_label = *cat;
        } catch (const nlohmann::json::exception& e) {
            fail(e.what());
        }
        if (c.judgment_quote.empty()) fail("empty judgment_quote");
        if (c.generative_quote.empty()) fail("empty generative_quote");
        if (c.id.empty()) fail("empty id");
        cases.push_back(std::move(c));
    }
    return cases;
}

struct CaseResult {
    std::string id;
    std::string case_title;
    EvalMode mode = EvalMode::Continuation;
    MatchCategory assigned = MatchCategory::UnrelatedIntent;
    MatchCategory paper_label = MatchCategory::UnrelatedIntent;
    bool agrees = false;
    Scores scores;
    std::size_t edit_count = 0;  // script hunks
    std::size_t edit_cost = 0;   // words touched
};

struct EvalReport {
    std::vector<CaseResult> rows;  // sorted by case id
    std::array<std::size_t, kCategoryCount> assigned_counts{};
    std::array<std::size_t, kCategoryCount> label_counts{};
    std::size_t agreement = 0;
    std::size_t total = 0;
};

// Classify every case and aggregate. Classification is pure, so the work
// parallelizes freely; the report is keyed and ordered by case id, making
// it independent of both input order and worker interleaving.
inline EvalReport evaluate_corpus(const std::vector<EvalCase>& cases,
                                  const Thresholds& th = {},
                                  std::size_t jobs = 1) {
    if (cases.empty()) throw std::invalid_argument("evaluate_corpus: empty corpus");
    EvalReport rep;
    rep.rows.resize(cases.size());
    rep.total = cases.size();

    auto run_one = [&](std::size_t idx) {
        const EvalCase& c = cases[idx];
        ClassifyResult r = classify_match(c.judgment_quote, c.generative_quote, th);
        CaseResult& row = rep.rows[idx];
        row.id = c.id;
        row.case_title = c.case_title;
        row.mode = c.mode;
        row.assigned = r.category;
        row.paper_label = c.paper_label;
        row.agrees = r.category == c.paper_label;
        row.scores = r.scores;
        row.edit_count = r.edits.size();
        row.edit_cost = script_cost(r.edits);
    };

    if (jobs <= 1 || cases.size() == 1) {
        for (std::size_t idx = 0; idx < cases.size(); ++idx) run_one(idx);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t idx = next.fetch_add(1); idx < cases.size();
                 idx = next.fetch_add(1))
                run_one(idx);
        };
        std::vector<std::thread> pool;
        const std::size_t width = std::min<std::size_t>(jobs, cases.size());
        pool.reserve(width);
        for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::stable_sort(rep.rows.begin(), rep.rows.end(),
                     [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    for (const auto& row : rep.rows) {
        ++rep.assigned_counts[static_cast<std::size_t>(row.assigned)];
        ++rep.label_counts[static_cast<std::size_t>(row.paper_label)];
        if (row.agrees) ++rep.agreement;
    }
    return rep;
}

} // namespace lexguard::verify
