#pragma once
// Pipeline controller for three-role drafting: a Problem statement is
// handed to a Commentary generator, and when the commentary signs off with
// a hand-over (reporting cue + citation + colon) the quote itself is
// fetched from the fact store and spliced in verbatim. Facts are never
// generated: a fact is either a byte-exact stored quote or an explicit
// FactUnknown record, so whole-quote fidelity holds by construction.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <lexguard/citation.hpp>
#include <lexguard/factstore.hpp>
#include <lexguard/segmenter.hpp>
#include <lexguard/text.hpp>
#include <lexguard/tokenizer.hpp>

namespace lexguard::ensemble {

enum class Role { Problem, Commentary, Fact };

inline std::string_view role_name(Role r) {
    switch (r) {
    case Role::Problem: return "problem";
    case Role::Commentary: return "commentary";
    case Role::Fact: return "fact";
    }
    return "problem";
}

struct GeneratorFailure : std::runtime_error {
    explicit GeneratorFailure(const std::string& what) : std::runtime_error(what) {}
};

// A text generator for the Problem and Commentary roles. Fact is not a
// generator role — fact text only ever comes from the store. Commentary
// output must end with <EOC> (a Problem generator's with <EOP>); the
// pipeline enforces this rather than patching the text up.
class GeneratorInterface {
public:
    virtual ~GeneratorInterface() = default;
    virtual std::string generate(Role role, const std::string& context) = 0;
};

// Plays back a fixed script regardless of context: the deterministic
// stand-in used by the tests and the CLI. Only the Commentary role is
// scripted.
class ScriptedGenerator : public GeneratorInterface {
public:
    explicit ScriptedGenerator(std::string commentary) : commentary_(std::move(commentary)) {}

    std::string generate(Role role, const std::string&) override {
        if (role != Role::Commentary)
            throw std::logic_error("scripted generator only plays the commentary role");
        return commentary_;
    }

private:
    std::string commentary_;
};

struct Event {
    enum class Kind {
        ProblemEmitted,
        HandOff,
        CommentaryEmitted,
        HandOverDetected,
        FactFetched,
        FactUnknown,
    };

    Kind kind = Kind::ProblemEmitted;
    std::string text;     // exact bytes this event contributes to the output
    std::string key;      // HandOverDetected / FactUnknown: canonical citation key
    std::string quote_id; // FactFetched
    Role from = Role::Problem; // HandOff endpoints
    Role to = Role::Problem;

    bool operator==(const Event&) const = default;
};

inline std::string_view event_kind_name(Event::Kind k) {
    switch (k) {
    case Event::Kind::ProblemEmitted: return "problem_emitted";
    case Event::Kind::HandOff: return "hand_off";
    case Event::Kind::CommentaryEmitted: return "commentary_emitted";
    case Event::Kind::HandOverDetected: return "hand_over_detected";
    case Event::Kind::FactFetched: return "fact_fetched";
    case Event::Kind::FactUnknown: return "fact_unknown";
    }
    return "problem_emitted";
}

// Ordered run record. `output` is exactly the concatenation of the events'
// text fields, so every output byte is attributable to one event.
struct EnsembleTrace {
    std::vector<Event> events;
    std::string output;
};

struct PipelineOptions {
    // Default: only a hand-over the commentary actually stops on (nothing
    // but whitespace after it) triggers the fact fetch — the generator
    // handing over mid-thought is not a request for a quote. The switch
    // scans the whole commentary and takes the last hand-over anywhere.
    bool scan_full_commentary = false;
};

// Feature extraction for commentary→fact binding experiments: lowercased
// content words counted with multiplicity.
inline text::Multiset extract_features(std::string_view input,
                                       const std::set<std::string>& stopwords = {}) {
    return text::feature_multiset(text::normalize_words(input), stopwords);
}

inline EnsembleTrace run_pipeline(const std::string& problem_text,
                                  GeneratorInterface& commentary_gen,
                                  const facts::FactStore& store,
                                  const PipelineOptions& opts = {}) {
    if (!store.frozen())
        throw std::invalid_argument("run_pipeline: fact store must be frozen");

    EnsembleTrace tr;
    auto push = [&](Event e) {
        tr.output += e.text;
        tr.events.push_back(std::move(e));
    };

    {
        Event e;
        e.kind = Event::Kind::ProblemEmitted;
        e.text = problem_text;
        push(std::move(e));
    }
    {
        Event e;
        e.kind = Event::Kind::HandOff;
        e.from = Role::Problem;
        e.to = Role::Commentary;
        e.text = std::string(tok::sentinel_text(tok::Sentinel::EOP)) +
                 std::string(tok::sentinel_text(tok::Sentinel::SOC));
        push(std::move(e));
    }

    std::string commentary;
    try {
        commentary = commentary_gen.generate(Role::Commentary, problem_text);
    } catch (const std::exception& e) {
        throw GeneratorFailure(std::string("commentary generator: ") + e.what());
    }
    const std::string_view eoc = tok::sentinel_text(tok::Sentinel::EOC);
    if (commentary.size() < eoc.size() ||
        std::string_view(commentary).substr(commentary.size() - eoc.size()) != eoc)
        throw GeneratorFailure("commentary does not end with <EOC>");
    {
        Event e;
        e.kind = Event::Kind::CommentaryEmitted;
        e.text = commentary;
        push(std::move(e));
    }

    // Scan for the hand-over on the commentary body, sentinel excluded.
    const std::string body = commentary.substr(0, commentary.size() - eoc.size());
    const seg::HandOver* chosen = nullptr;
    const auto handovers = seg::detect_handover(body);
    for (const auto& h : handovers) {
        if (!opts.scan_full_commentary &&
            body.find_first_not_of(" \t\r\n", h.end) != std::string::npos)
            continue;
        chosen = &h; // the last qualifying one wins
    }
    if (!chosen) return tr;

    const std::string key = cite::canonical_key(chosen->citation);
    {
        Event e;
        e.kind = Event::Kind::HandOverDetected;
        e.key = key;
        push(std::move(e));
    }

    std::optional<int> pin;
    if (chosen->citation.pinpoint) pin = chosen->citation.pinpoint->value;
    const auto quotes = store.lookup_by_key(key, pin);
    if (quotes.empty()) {
        Event e;
        e.kind = Event::Kind::FactUnknown;
        e.key = key;
        push(std::move(e)); // and not a word of invented quote text
        return tr;
    }

    {
        Event e;
        e.kind = Event::Kind::HandOff;
        e.from = Role::Commentary;
        e.to = Role::Fact;
        e.text = std::string(tok::sentinel_text(tok::Sentinel::SOF));
        push(std::move(e));
    }
    {
        Event e;
        e.kind = Event::Kind::FactFetched;
        e.quote_id = quotes.front()->id;
        e.text = quotes.front()->text; // byte-for-byte from the store
        push(std::move(e));
    }
    return tr;
}

} // namespace lexguard::ensemble
