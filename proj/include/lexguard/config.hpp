// Runtime configuration: embedded defaults, a flat key = value file format,
// and range checks applied the moment a value is set from any source.
#pragma once

#include <charconv>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include <lexguard/text.hpp>
#include <lexguard/verifier.hpp>

namespace lexguard::config {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Config {
    verify::Thresholds thresholds; // s_max 0.05, j_min 0.18, gap_max 20 by default
    std::string stopwords_path;    // empty = use no stopword list
    std::string store_path;        // empty = no fact store wired in
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_fraction(std::string_view key, std::string_view raw, double lo, double hi) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        throw ConfigError(std::string(key) + ": not a number: '" + std::string(raw) + "'");
    if (v < lo || v > hi)
        throw ConfigError(std::string(key) + ": " + std::string(raw) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

inline std::size_t parse_words(std::string_view key, std::string_view raw, std::size_t hi) {
    unsigned long v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        throw ConfigError(std::string(key) + ": not a whole number of words: '" +
                          std::string(raw) + "'");
    if (v > hi)
        throw ConfigError(std::string(key) + ": " + std::string(raw) + " outside [0, " +
                          std::to_string(hi) + "]");
    return v;
}

} // namespace detail

// Set one field by name, with the same range enforcement no matter whether
// the value came from a file line or a command-line flag.
inline void set_value(Config& cfg, std::string_view key, std::string_view value) {
    key = detail::trim(key);
    value = detail::trim(value);
    if (key == "s_max")
        cfg.thresholds.s_max = detail::parse_fraction(key, value, 0.0, 0.5);
    else if (key == "j_min")
        cfg.thresholds.j_min = detail::parse_fraction(key, value, 0.0, 1.0);
    else if (key == "gap_max")
        cfg.thresholds.gap_max = detail::parse_words(key, value, 50);
    else if (key == "stopwords")
        cfg.stopwords_path = std::string(value);
    else if (key == "store")
        cfg.store_path = std::string(value);
    else
        throw ConfigError("unknown key '" + std::string(key) + "'");
}

// Flat UTF-8 "key = value" lines; '#' starts a comment; blank lines are
// fine; later lines win. Values land on top of `base`, so callers layer
// defaults < file < flags.
inline Config load_file(std::istream& in, Config base = {}) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        try {
            set_value(base, s.substr(0, eq), s.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

// One stopword list entry per line; entries are normalized the same way the
// verifier normalizes text, so case and stray punctuation cannot cause a
// silent mismatch. Multi-word lines contribute each word.
inline std::set<std::string> load_stopwords(std::istream& in) {
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        for (auto& w : text::normalize_words(std::string(s)))
            if (w != text::kGap) out.insert(std::move(w));
    }
    return out;
}

} // namespace lexguard::config
