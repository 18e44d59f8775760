#pragma once
// Verbatim quote store. Quotes are inserted once, the store is frozen, and
// from then on lookups are read-only: by id, by canonical citation key
// (optionally narrowed by pinpoint), or by longest token match through the
// quote trie. An ellipsis inside a stored quote becomes an elastic gap that
// matches up to kGapMax arbitrary document tokens.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lexguard/text.hpp"

namespace lexguard::facts {

inline constexpr int kGapMax = 20;

struct FactQuote {
    std::string id;
    std::string key;          // canonical citation key, see cite::canonical_key
    std::optional<int> pin;   // page or paragraph number
    std::string text;         // quote, byte-for-byte as it appears in the source
    std::string source_case;

    friend bool operator==(const FactQuote&, const FactQuote&) = default;
};

struct DuplicateQuote : std::runtime_error {
    explicit DuplicateQuote(const std::string& what) : std::runtime_error(what) {}
};

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class FactStore {
public:
    struct Match {
        const FactQuote* quote = nullptr;
        size_t length = 0; // candidate tokens consumed
    };

    void insert(FactQuote q) {
        if (frozen_) throw std::logic_error("fact store is frozen");
        if (q.id.empty() || q.key.empty() || q.text.empty())
            throw FormatError("quote needs id, key and text");
        if (q.pin && *q.pin < 1) throw FormatError("pinpoint must be positive");
        if (by_id_.count(q.id)) throw DuplicateQuote("duplicate quote id '" + q.id + "'");
        by_id_.emplace(q.id, quotes_.size());
        quotes_.push_back(std::move(q));
    }

    void freeze() {
        if (frozen_) return;
        build_trie();
        frozen_ = true;
    }

    bool frozen() const { return frozen_; }
    size_t size() const { return quotes_.size(); }
    const std::vector<FactQuote>& all() const { return quotes_; }

    const FactQuote* lookup_by_id(std::string_view id) const {
        auto it = by_id_.find(std::string(id));
        return it == by_id_.end() ? nullptr : &quotes_[it->second];
    }

    // All quotes under a key, sorted by id. With a pin, quotes pinned
    // elsewhere are excluded; unpinned quotes still match.
    std::vector<const FactQuote*> lookup_by_key(std::string_view key,
                                                std::optional<int> pin = {}) const {
        std::vector<const FactQuote*> out;
        for (const auto& q : quotes_) {
            if (q.key != key) continue;
            if (pin && q.pin && *q.pin != *pin) continue;
            out.push_back(&q);
        }
        std::sort(out.begin(), out.end(),
                  [](const FactQuote* a, const FactQuote* b) { return a->id < b->id; });
        return out;
    }

    // Longest stored quote matching `words` starting exactly at `pos`.
    // Gap nodes absorb 0..kGapMax tokens. Ties on length resolve to the
    // lexicographically smallest quote id.
    std::optional<Match> longest_match(const std::vector<std::string>& words,
                                       size_t pos) const {
        if (!frozen_) throw std::logic_error("fact store must be frozen before matching");
        if (nodes_.empty() || pos >= words.size()) return std::nullopt;
        Match best;
        bool found = false;
        walk(0, pos, pos, words, best, found);
        if (!found || best.length == 0) return std::nullopt;
        return best;
    }

    static FactStore load_jsonl(std::istream& in) {
        FactStore store;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
            }
            FactQuote q;
            try {
                q.id = j.at("id").get<std::string>();
                q.key = j.at("key").get<std::string>();
                q.text = j.at("text").get<std::string>();
                q.source_case = j.at("source_case").get<std::string>();
                if (j.contains("pin") && !j["pin"].is_null()) q.pin = j["pin"].get<int>();
            } catch (const nlohmann::json::exception& e) {
                throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
            }
            try {
                store.insert(std::move(q));
            } catch (const FormatError& e) {
                throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return store;
    }

    void save_jsonl(std::ostream& out) const {
        for (const auto& q : quotes_) {
            nlohmann::json j;
            j["id"] = q.id;
            j["key"] = q.key;
            if (q.pin) j["pin"] = *q.pin;
            else j["pin"] = nullptr;
            j["text"] = q.text;
            j["source_case"] = q.source_case;
            out << j.dump() << '\n';
        }
    }

private:
    struct Node {
        std::map<std::string, int, std::less<>> next;
        int gap = -1;                // child reached through an elastic gap
        std::vector<size_t> ends;    // quotes whose last real word lands here
    };

    std::vector<FactQuote> quotes_;
    std::map<std::string, size_t> by_id_;
    std::vector<Node> nodes_;
    bool frozen_ = false;

    void build_trie() {
        nodes_.assign(1, {});
        for (size_t qi = 0; qi < quotes_.size(); ++qi) {
            auto words = text::normalize_words(quotes_[qi].text);
            // leading/trailing gaps would make the anchor or the match end
            // arbitrary; the matchable core is the real-word span
            size_t b = 0, e = words.size();
            while (b < e && text::is_gap(words[b])) ++b;
            while (e > b && text::is_gap(words[e - 1])) --e;
            if (b == e) continue;
            int cur = 0;
            for (size_t k = b; k < e; ++k) {
                if (text::is_gap(words[k])) {
                    if (nodes_[cur].gap < 0) {
                        nodes_[cur].gap = static_cast<int>(nodes_.size());
                        nodes_.emplace_back();
                    }
                    cur = nodes_[cur].gap;
                } else {
                    auto it = nodes_[cur].next.find(words[k]);
                    if (it == nodes_[cur].next.end()) {
                        int id = static_cast<int>(nodes_.size());
                        nodes_[cur].next.emplace(words[k], id);
                        nodes_.emplace_back();
                        cur = id;
                    } else {
                        cur = it->second;
                    }
                }
            }
            nodes_[cur].ends.push_back(qi);
        }
    }

    void walk(int node, size_t pos, size_t i, const std::vector<std::string>& words,
              Match& best, bool& found) const {
        const Node& nd = nodes_[node];
        for (size_t qi : nd.ends) {
            size_t len = i - pos;
            const FactQuote* q = &quotes_[qi];
            if (!found || len > best.length ||
                (len == best.length && q->id < best.quote->id)) {
                best = {q, len};
                found = true;
            }
        }
        if (i < words.size() && !text::is_gap(words[i])) {
            auto it = nd.next.find(words[i]);
            if (it != nd.next.end()) walk(it->second, pos, i + 1, words, best, found);
        }
        if (nd.gap >= 0) {
            size_t limit = std::min(words.size() - i, static_cast<size_t>(kGapMax));
            for (size_t skip = 0; skip <= limit; ++skip)
                walk(nd.gap, pos, i + skip, words, best, found);
        }
    }
};

} // namespace lexguard::facts
