#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "lexguard/factstore.hpp"

using namespace lexguard;
using facts::FactQuote;
using facts::FactStore;

static FactStore load_fixture() {
    std::ifstream in(LEXGUARD_DATA_DIR "/facts.jsonl");
    REQUIRE(in.good());
    return FactStore::load_jsonl(in);
}

TEST_CASE("bundled quote corpus loads") {
    FactStore store = load_fixture();
    CHECK(store.size() == 14);

    const FactQuote* spurling = store.lookup_by_id("spurling-red-ink");
    REQUIRE(spurling != nullptr);
    CHECK(spurling->key == "j-spurling-ltd-v-bradshaw-1956-wlr-461");
    CHECK(spurling->pin == 466);
    CHECK(spurling->text.starts_with("Some clauses which I have seen"));
    CHECK(spurling->text.ends_with("could be held to be sufficient."));

    auto hits = store.lookup_by_key("j-spurling-ltd-v-bradshaw-1956-wlr-461", 466);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0]->id == "spurling-red-ink");
    // a different pin on the same case finds nothing
    CHECK(store.lookup_by_key("j-spurling-ltd-v-bradshaw-1956-wlr-461", 9).empty());
    // no pin requested: same quote
    CHECK(store.lookup_by_key("j-spurling-ltd-v-bradshaw-1956-wlr-461").size() == 1);
    // unpinned quotes match any requested pin
    CHECK(store.lookup_by_key("donoghue-v-stevenson", 99).size() == 1);
}

TEST_CASE("save and load round-trip") {
    FactStore store = load_fixture();
    std::stringstream buf;
    store.save_jsonl(buf);
    FactStore again = FactStore::load_jsonl(buf);
    REQUIRE(again.size() == store.size());
    CHECK(again.all() == store.all());
}

TEST_CASE("insert validation") {
    FactStore store;
    store.insert({"a", "x-v-y", {}, "some words", "X v Y"});
    CHECK_THROWS_AS(store.insert(FactQuote{"a", "other-v-case", {}, "words", "Other"}),
                    facts::DuplicateQuote);
    CHECK_THROWS_AS(store.insert(FactQuote{"", "k", {}, "t", "s"}), facts::FormatError);
    CHECK_THROWS_AS(store.insert(FactQuote{"b", "", {}, "t", "s"}), facts::FormatError);
    CHECK_THROWS_AS(store.insert(FactQuote{"b", "k", {}, "", "s"}), facts::FormatError);
    CHECK_THROWS_AS(store.insert(FactQuote{"b", "k", 0, "t", "s"}), facts::FormatError);

    CHECK_THROWS_AS(store.longest_match({"some"}, 0), std::logic_error);
    store.freeze();
    CHECK(store.frozen());
    CHECK_THROWS_AS(store.insert(FactQuote{"c", "k", {}, "t", "s"}), std::logic_error);
}

TEST_CASE("malformed jsonl is rejected with a line number") {
    std::stringstream bad("{\"id\": \"a\", \"key\": \"k\", \"text\": \"t\", "
                          "\"source_case\": \"s\"}\nnot json\n");
    try {
        FactStore::load_jsonl(bad);
        FAIL("expected FormatError");
    } catch (const facts::FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::stringstream missing("{\"id\": \"a\", \"key\": \"k\"}\n");
    CHECK_THROWS_AS(FactStore::load_jsonl(missing), facts::FormatError);
}

static FactStore tiny_store() {
    FactStore s;
    s.insert({"qa", "k1", {}, "red ink rule", "A"});
    s.insert({"qb", "k1", {}, "red ink", "A"});
    s.insert({"qc", "k2", {}, "alpha ... omega", "B"});
    s.insert({"qd", "k3", {}, "solo", "C"});
    s.freeze();
    return s;
}

TEST_CASE("longest anchored match with prefix quotes") {
    FactStore s = tiny_store();
    auto words = text::normalize_words("say red ink rule now");
    auto m = s.longest_match(words, 1);
    REQUIRE(m);
    CHECK(m->quote->id == "qa");
    CHECK(m->length == 3);

    auto words2 = text::normalize_words("say red ink now");
    auto m2 = s.longest_match(words2, 1);
    REQUIRE(m2);
    CHECK(m2->quote->id == "qb");
    CHECK(m2->length == 2);

    CHECK(!s.longest_match(words, 0));
    CHECK(!s.longest_match(words, 4));
}

TEST_CASE("gaps absorb up to twenty tokens") {
    FactStore s = tiny_store();
    std::string mid;
    for (int i = 0; i < 20; ++i) mid += "w" + std::to_string(i) + " ";
    auto words = text::normalize_words("alpha " + mid + "omega");
    auto m = s.longest_match(words, 0);
    REQUIRE(m);
    CHECK(m->quote->id == "qc");
    CHECK(m->length == 22);

    auto words21 = text::normalize_words("alpha " + mid + "w20 omega");
    CHECK(!s.longest_match(words21, 0));

    // zero-width gap
    auto tight = text::normalize_words("alpha omega");
    auto mt = s.longest_match(tight, 0);
    REQUIRE(mt);
    CHECK(mt->length == 2);
}

TEST_CASE("equal-length ties go to the smallest id") {
    FactStore s;
    s.insert({"zz", "k", {}, "same words here", "A"});
    s.insert({"aa", "k2", {}, "same words here", "B"});
    s.freeze();
    auto words = text::normalize_words("same words here");
    auto m = s.longest_match(words, 0);
    REQUIRE(m);
    CHECK(m->quote->id == "aa");
}

// Brute-force oracle: try to match one normalized quote against words[wi..],
// returning the longest consumption; gaps try every width 0..20.
static std::optional<size_t> match_one(const std::vector<std::string>& q, size_t qi,
                                       const std::vector<std::string>& w, size_t wi) {
    if (qi == q.size()) return wi;
    if (text::is_gap(q[qi])) {
        std::optional<size_t> best;
        for (size_t skip = 0; skip <= facts::kGapMax && wi + skip <= w.size(); ++skip) {
            auto r = match_one(q, qi + 1, w, wi + skip);
            if (r && (!best || *r > *best)) best = r;
        }
        return best;
    }
    if (wi < w.size() && !text::is_gap(w[wi]) && w[wi] == q[qi])
        return match_one(q, qi + 1, w, wi + 1);
    return std::nullopt;
}

TEST_CASE("trie agrees with per-quote brute force on random corpora") {
    std::mt19937 rng(90210);
    const std::vector<std::string> vocab = {"aa", "bb", "cc", "dd"};
    std::uniform_int_distribution<int> qlen(1, 6), clen(0, 24), pickv(0, 3), percent(0, 99);

    for (int round = 0; round < 60; ++round) {
        FactStore store;
        int nq = 1 + round % 7;
        std::vector<std::vector<std::string>> normalized;
        for (int k = 0; k < nq; ++k) {
            std::string quote;
            int n = qlen(rng);
            for (int i = 0; i < n; ++i) {
                if (!quote.empty()) quote += ' ';
                quote += (percent(rng) < 25 && i > 0 && i + 1 < n) ? "..." : vocab[pickv(rng)];
            }
            char id[8];
            std::snprintf(id, sizeof id, "q%02d", k);
            store.insert({id, "k", {}, quote, "S"});
            auto words = text::normalize_words(quote);
            size_t b = 0, e = words.size();
            while (b < e && text::is_gap(words[b])) ++b;
            while (e > b && text::is_gap(words[e - 1])) --e;
            normalized.emplace_back(words.begin() + b, words.begin() + e);
        }
        store.freeze();

        std::string doc;
        int cn = clen(rng);
        for (int i = 0; i < cn; ++i) {
            if (!doc.empty()) doc += ' ';
            doc += percent(rng) < 10 ? "..." : vocab[pickv(rng)];
        }
        auto words = text::normalize_words(doc);
        for (size_t pos = 0; pos < words.size(); ++pos) {
            std::optional<size_t> best_len;
            std::string best_id;
            for (int k = 0; k < nq; ++k) {
                if (normalized[k].empty()) continue;
                auto r = match_one(normalized[k], 0, words, pos);
                if (!r) continue;
                size_t len = *r - pos;
                if (len == 0) continue;
                char id[8];
                std::snprintf(id, sizeof id, "q%02d", k);
                if (!best_len || len > *best_len || (len == *best_len && id < best_id)) {
                    best_len = len;
                    best_id = id;
                }
            }
            auto got = store.longest_match(words, pos);
            CAPTURE(round, pos, doc);
            if (best_len) {
                REQUIRE(got);
                CHECK(got->length == *best_len);
                CHECK(got->quote->id == best_id);
            } else {
                CHECK(!got);
            }
        }
    }
}
