// pulse_sequence.hpp — π-pulse sequence families as normalized timing lists

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "dd/errors.hpp"

namespace dd {

enum class Family { udd, cpmg, bb, cdd, iudd, custom };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::udd:    return "udd";
        case Family::cpmg:   return "cpmg";
        case Family::bb:     return "bb";
        case Family::cdd:    return "cdd";
        case Family::iudd:   return "iudd";
        case Family::custom: return "custom";
    }
    return "?";
}

// A cycle of n ideal π pulses applied at the instants δ_j·t, stored as the
// normalized fractions δ_j with 0 < δ_1 < … < δ_n < 1.  The interval
// endpoints δ_0 = 0 and δ_{n+1} = 1 are implicit sentinels and are never
// stored.  An empty list is the pulse-free evolution.
struct PulseSequence {
    std::vector<double> deltas;
    Family family{Family::custom};

    int n() const { return static_cast<int>(deltas.size()); }
    bool empty() const { return deltas.empty(); }
};

// Throws unless the list is strictly increasing with every entry in (0,1).
inline void validate_instants(const std::vector<double>& deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        if (!(d > 0.0 && d < 1.0)) {
            throw ValidationError("pulse instant at index " + std::to_string(i) +
                                  " is outside the open interval (0,1): " + std::to_string(d));
        }
        if (i > 0 && !(deltas[i - 1] < d)) {
            throw ValidationError("pulse instants not strictly increasing at index " +
                                  std::to_string(i) + ": " + std::to_string(deltas[i - 1]) +
                                  " >= " + std::to_string(d));
        }
    }
}

// ------------------------------- generators ---------------------------------

namespace detail {

// cos(π j/q) for integers 0 ≤ j ≤ q.  The argument is reduced by symmetry and
// the rational-valued cases (cos ∈ {0, ±1/2, ±1}, the only ones possible for
// rational j/q) are returned exactly.
inline double cos_pi_fraction(int j, int q) {
    bool negate = false;
    if (2 * j > q) {
        j = q - j;
        negate = true;
    }
    double c;
    if (j == 0) {
        c = 1.0;
    } else if (2 * j == q) {
        c = 0.0;
    } else if (3 * j == q) {
        c = 0.5;
    } else {
        c = std::cos(std::numbers::pi * j / q);
    }
    return negate ? -c : c;
}

} // namespace detail

// Optimized sequence: δ_j = sin²(πj/(2n+2)) = (1 − cos(πj/(n+1)))/2, computed
// in the half-angle form so the rational instants (e.g. n ≤ 2, midpoints) come
// out exact and the reflection symmetry δ_j + δ_{n+1−j} = 1 holds identically.
inline PulseSequence make_udd(int n) {
    if (n < 1) {
        throw ValidationError("make_udd: n must be >= 1 "
                              "(the pulse-free evolution is the empty sequence)");
    }
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        d[static_cast<std::size_t>(j - 1)] = 0.5 - 0.5 * detail::cos_pi_fraction(j, n + 1);
    }
    validate_instants(d);
    return {std::move(d), Family::udd};
}

// Iterated two-pulse echo cycle: δ_j = (j − 1/2)/n.
inline PulseSequence make_cpmg(int n) {
    if (n < 1) throw ValidationError("make_cpmg: n must be >= 1");
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        d[static_cast<std::size_t>(j - 1)] = (2.0 * j - 1.0) / (2.0 * n);
    }
    validate_instants(d);
    return {std::move(d), Family::cpmg};
}

// Periodic (bang-bang) sequence: δ_j = j/(n+1).
inline PulseSequence make_bb(int n) {
    if (n < 1) throw ValidationError("make_bb: n must be >= 1");
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        d[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (n + 1.0);
    }
    validate_instants(d);
    return {std::move(d), Family::bb};
}

namespace detail {

// Unfold the concatenation recursion.  Level 0 is pulse-free.  Moving from
// level l to l+1 compresses two copies of level l into the two halves of the
// interval and, when l is even, inserts one pulse at the midpoint.  Instants
// are dyadic fractions, so doubles are exact here.
inline std::vector<double> cdd_instants_double(int level) {
    std::vector<double> cur;
    for (int l = 0; l < level; ++l) {
        std::vector<double> next;
        next.reserve(2 * cur.size() + 1);
        for (double x : cur) next.push_back(0.5 * x);
        if (l % 2 == 0) next.push_back(0.5);
        for (double x : cur) next.push_back(0.5 + 0.5 * x);
        cur = std::move(next);
    }
    return cur;
}

} // namespace detail

// Concatenated sequence at the given level.  Odd levels carry a global frame
// flip in the underlying composition; it has no timing effect and is ignored
// here.  The recursion never places pulses at the interval boundaries.
inline PulseSequence make_cdd(int level) {
    if (level < 0) throw ValidationError("make_cdd: level must be >= 0");
    if (level > 24) throw ValidationError("make_cdd: level > 24 not supported");
    std::vector<double> d = detail::cdd_instants_double(level);
    validate_instants(d);
    return {std::move(d), Family::cdd};
}

// c back-to-back copies of the m-pulse optimized cycle, each compressed to a
// window of width 1/c.  The inner windows have no boundary pulses, so cycles
// never collide at the seams.
inline PulseSequence make_iudd(int m, int c) {
    if (m < 1) throw ValidationError("make_iudd: m must be >= 1");
    if (c < 1) throw ValidationError("make_iudd: c must be >= 1");
    const PulseSequence base = make_udd(m);
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(c));
    for (int k = 0; k < c; ++k) {
        for (double s : base.deltas) d.push_back((k + s) / c);
    }
    validate_instants(d);
    return {std::move(d), Family::iudd};
}

// Wraps a user-supplied list unchanged after validation.
inline PulseSequence make_custom(std::vector<double> deltas) {
    validate_instants(deltas);
    return {std::move(deltas), Family::custom};
}

// The pulse-free evolution.
inline PulseSequence no_pulse() {
    return {{}, Family::custom};
}

// ------------------------------ spec strings --------------------------------

// Parsed form of the textual sequence specs "udd:N", "cpmg:N", "bb:N",
// "cdd:L", "iudd:MxC", "custom:d1,d2,…".
struct SequenceSpec {
    Family family{Family::custom};
    int a{0};                     // n, level, or m
    int b{0};                     // cycle count (iudd only)
    std::vector<double> custom;
    std::string label;            // original text
};

namespace detail {

inline int parse_int_at(std::string_view text, std::size_t pos, std::size_t end,
                        std::string_view what) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError("sequence spec '" + std::string(text) + "': expected " +
                              std::string(what) + " at position " + std::to_string(pos));
    }
    return value;
}

inline double parse_double_at(std::string_view text, std::size_t pos, std::size_t end) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc{} || ptr != text.data() + end) {
        throw ValidationError("sequence spec '" + std::string(text) +
                              "': expected a decimal fraction at position " + std::to_string(pos));
    }
    return value;
}

} // namespace detail

inline SequenceSpec parse_sequence_spec(std::string_view text) {
    SequenceSpec spec;
    spec.label = std::string(text);
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ValidationError("sequence spec '" + spec.label +
                              "': missing ':' separator (expected e.g. \"udd:10\")");
    }
    const std::string_view head = text.substr(0, colon);
    const std::size_t body = colon + 1;
    if (body >= text.size()) {
        throw ValidationError("sequence spec '" + spec.label + "': empty parameter at position " +
                              std::to_string(body));
    }
    if (head == "udd" || head == "cpmg" || head == "bb" || head == "cdd") {
        spec.family = head == "udd"  ? Family::udd
                    : head == "cpmg" ? Family::cpmg
                    : head == "bb"   ? Family::bb
                                     : Family::cdd;
        spec.a = detail::parse_int_at(text, body, text.size(), "an integer");
    } else if (head == "iudd") {
        const std::size_t x = text.find('x', body);
        if (x == std::string_view::npos || x + 1 >= text.size()) {
            throw ValidationError("sequence spec '" + spec.label +
                                  "': expected \"iudd:MxC\" with 'x' after position " +
                                  std::to_string(body));
        }
        spec.family = Family::iudd;
        spec.a = detail::parse_int_at(text, body, x, "an integer");
        spec.b = detail::parse_int_at(text, x + 1, text.size(), "an integer");
    } else if (head == "custom") {
        spec.family = Family::custom;
        std::size_t pos = body;
        while (true) {
            std::size_t comma = text.find(',', pos);
            const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
            spec.custom.push_back(detail::parse_double_at(text, pos, end));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
            if (pos >= text.size()) {
                throw ValidationError("sequence spec '" + spec.label +
                                      "': trailing comma at position " + std::to_string(comma));
            }
        }
    } else {
        throw ValidationError("sequence spec '" + spec.label + "': unknown family '" +
                              std::string(head) + "' at position 0");
    }
    return spec;
}

inline PulseSequence make_sequence(const SequenceSpec& spec) {
    switch (spec.family) {
        case Family::udd:    return make_udd(spec.a);
        case Family::cpmg:   return make_cpmg(spec.a);
        case Family::bb:     return make_bb(spec.a);
        case Family::cdd:    return make_cdd(spec.a);
        case Family::iudd:   return make_iudd(spec.a, spec.b);
        case Family::custom: return make_custom(spec.custom);
    }
    throw ValidationError("make_sequence: unknown family");
}

inline PulseSequence make_sequence(std::string_view spec_text) {
    return make_sequence(parse_sequence_spec(spec_text));
}

} // namespace dd
