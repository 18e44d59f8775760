#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "lexguard/tokenizer.hpp"

using namespace lexguard;
using tok::Token;
using tok::TokenSeq;

static const std::string kRedInk =
    "Some clauses which I have seen would need to be printed in red ink on the face of the "
    "document with a red hand pointing to it before the notice could be held to be "
    "sufficient.";

static facts::FactStore fixture_store() {
    std::ifstream in(LEXGUARD_DATA_DIR "/facts.jsonl");
    REQUIRE(in.good());
    auto s = facts::FactStore::load_jsonl(in);
    s.freeze();
    return s;
}

TEST_CASE("a stored quote tokenizes as one unit") {
    facts::FactStore store = fixture_store();
    std::string text = "When for instance one condition in a set is particularly onerous "
                       "... \"" +
                       kRedInk + "\"";
    TokenSeq seq = tok::tokenize(text, &store);
    REQUIRE(seq.tokens.size() == 13);
    for (size_t i = 0; i < 12; ++i) CHECK(seq.tokens[i].kind == Token::Kind::Word);
    const Token& q = seq.tokens.back();
    CHECK(q.kind == Token::Kind::Quote);
    CHECK(q.quote_id == "spurling-red-ink");
    CHECK(q.quote_words == 36);
    CHECK(q.text == "\"" + kRedInk + "\"");
    CHECK(tok::detokenize(seq) == text);
}

TEST_CASE("training pairs grow the context prefix and skip ellipsis targets") {
    facts::FactStore store = fixture_store();
    std::string text = "When for instance one condition in a set is particularly onerous "
                       "... \"" +
                       kRedInk + "\"";
    auto pairs = tok::training_pairs(tok::tokenize(text, &store));
    const tok::TrainingPair expected[] = {
        {"When", "for"},
        {"When for", "instance"},
        {"When for instance", "one"},
        {"When for instance one", "condition"},
        {"When for instance one condition", "in"},
        {"When for instance one condition in", "a"},
        {"When for instance one condition in a", "set"},
        {"When for instance one condition in a set", "is"},
        {"When for instance one condition in a set is", "particularly"},
        {"When for instance one condition in a set is particularly", "onerous"},
        {"When for instance one condition in a set is particularly onerous ...",
         "\"" + kRedInk + "\""},
    };
    REQUIRE(pairs.size() == 11);
    for (size_t i = 0; i < 11; ++i) {
        CAPTURE(i);
        CHECK(pairs[i] == expected[i]);
    }
}

TEST_CASE("sentinels split out even when glued") {
    TokenSeq seq = tok::tokenize("end.<EOP><SOC>Next words <EOC>");
    REQUIRE(seq.tokens.size() == 6);
    CHECK(seq.tokens[0].kind == Token::Kind::Word);
    CHECK(seq.tokens[0].text == "end.");
    CHECK(seq.tokens[1].kind == Token::Kind::Sentinel);
    CHECK(seq.tokens[1].sentinel == tok::Sentinel::EOP);
    CHECK(seq.tokens[1].pre.empty());
    CHECK(seq.tokens[2].sentinel == tok::Sentinel::SOC);
    CHECK(seq.tokens[3].text == "Next");
    CHECK(seq.tokens[5].sentinel == tok::Sentinel::EOC);
    CHECK(seq.tokens[5].pre == " ");
    CHECK(tok::detokenize(seq) == "end.<EOP><SOC>Next words <EOC>");
}

TEST_CASE("quote matches never cross a sentinel") {
    facts::FactStore s;
    s.insert({"qa", "k", {}, "red ink rule", "A"});
    s.insert({"qb", "k", {}, "red ink", "A"});
    s.freeze();
    TokenSeq seq = tok::tokenize("red ink<EOP>rule", &s);
    REQUIRE(seq.tokens.size() == 3);
    CHECK(seq.tokens[0].kind == Token::Kind::Quote);
    CHECK(seq.tokens[0].quote_id == "qb");
    CHECK(seq.tokens[1].kind == Token::Kind::Sentinel);
    CHECK(seq.tokens[2].text == "rule");
}

TEST_CASE("greedy leftmost-longest tiling") {
    facts::FactStore s;
    s.insert({"qa", "k", {}, "red ink rule", "A"});
    s.insert({"qb", "k", {}, "red ink", "A"});
    s.freeze();
    TokenSeq seq = tok::tokenize("red ink rule red ink now", &s);
    REQUIRE(seq.tokens.size() == 3);
    CHECK(seq.tokens[0].quote_id == "qa");
    CHECK(seq.tokens[0].quote_words == 3);
    CHECK(seq.tokens[1].quote_id == "qb");
    CHECK(seq.tokens[2].text == "now");
}

TEST_CASE("without a store everything is words or sentinels") {
    TokenSeq seq = tok::tokenize("red ink rule");
    REQUIRE(seq.tokens.size() == 3);
    for (const auto& t : seq.tokens) CHECK(t.kind == Token::Kind::Word);
}

TEST_CASE("detokenization is byte-exact on awkward whitespace") {
    facts::FactStore store = fixture_store();
    const std::string cases[] = {
        "",
        "   ",
        "a",
        "  leading and trailing  ",
        "tabs\tand\nnewlines\r\n mixed  runs",
        "quote: \"" + kRedInk + "\" end<EOF?>",
        "<EOP> <SOC>x<EOC><SOF>" + kRedInk,
        "\n\n" + kRedInk + "\t",
    };
    for (const auto& c : cases) {
        CAPTURE(c);
        CHECK(tok::detokenize(tok::tokenize(c, &store)) == c);
    }
}

TEST_CASE("detokenization is byte-exact on random documents") {
    facts::FactStore store = fixture_store();
    std::mt19937 rng(1956);
    const std::vector<std::string> vocab = {
        "the",   "clause", "notice.",   "red,",  "ink", "(held)", "...", "<EOP>",
        "<SOC>", "<EOC>",  "<SOF>",     "a\"b",  "-",   "12.",    "v",   "Spurling",
        "ink;",  "\"" + kRedInk + "\"", kRedInk,
    };
    const std::vector<std::string> ws = {" ", "  ", "\t", "\n", " \n ", ""};
    std::uniform_int_distribution<size_t> pickw(0, vocab.size() - 1), picks(0, ws.size() - 1);
    std::uniform_int_distribution<int> len(0, 40);
    for (int iter = 0; iter < 300; ++iter) {
        std::string doc;
        int n = len(rng);
        for (int i = 0; i < n; ++i) {
            doc += vocab[pickw(rng)];
            doc += ws[picks(rng)];
        }
        CAPTURE(iter);
        CHECK(tok::detokenize(tok::tokenize(doc, &store)) == doc);
        CHECK(tok::detokenize(tok::tokenize(doc, nullptr)) == doc);
    }
}
