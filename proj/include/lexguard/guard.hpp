// Output gate: scan a generated message for case law and decide whether the
// copy/paste affordance must be disabled for it.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <lexguard/citation.hpp>

namespace lexguard::guard {

enum class Verdict { Allow, BlockCopy };

inline std::string_view verdict_name(Verdict v) {
    return v == Verdict::BlockCopy ? "block_copy" : "allow";
}

// The user-facing string shown where the copy button would be.
inline constexpr std::string_view kBlockMessage =
    "This message cannot be copied as it contains case law";

struct GuardDecision {
    Verdict verdict = Verdict::Allow;
    std::vector<cite::CitationSpan> reasons; // every citation span found, in text order
    std::string message;                     // empty unless blocking
};

// Conservative gate: any citation span — bare party pairs included — blocks
// the whole message. Sports-fixture strings ("Arsenal v Spurs") block too;
// that trade-off is deliberate, the gate exists to keep quoted law from being
// pasted onward as advice.
inline GuardDecision scan_output(std::string_view message) {
    GuardDecision d;
    d.reasons = cite::detect_citations(message);
    if (!d.reasons.empty()) {
        d.verdict = Verdict::BlockCopy;
        d.message = std::string(kBlockMessage);
    }
    return d;
}

} // namespace lexguard::guard
