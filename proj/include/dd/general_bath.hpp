// general_bath.hpp — binary-word coefficient recursion for the single-axis
// decoherence model.
//
// The stage-p evolution operator expands as a sum over binary words w (leading
// zeros significant) with scalar coefficients C^w_p.  The words only index
// operator products; the operators themselves never appear.  Decoupling at
// order n requires every coefficient with odd checksum and length ≤ n to
// vanish at stage n.  Coefficients are carried either as exact rationals
// (when every instant is rational) or as decimal floats of configurable
// precision.

#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "dd/errors.hpp"
#include "dd/pulse_sequence.hpp"

namespace dd {

namespace mp = boost::multiprecision;
using Rational = mp::cpp_rational;

// Binary word over {0,1}: bit i of `bits` (least significant first) is the
// (i+1)-th letter.  Leading zeros count, hence the explicit length.
struct BinaryWord {
    int length{0};
    std::uint32_t bits{0};

    int checksum() const { return std::popcount(bits); }
};

namespace gb_detail {

inline std::size_t level_offset(int length) {
    return (std::size_t{1} << length) - 1;
}

} // namespace gb_detail

// All coefficients C^w_p for words up to the length bound, laid out densely:
// entry for (length ℓ, bits b) sits at (2^ℓ − 1) + b, 2^{L+1} − 1 entries in
// total.
template <class Scalar>
struct CoefficientTable {
    int stage{0};
    int max_len{0};
    std::vector<Scalar> values;

    const Scalar& at(BinaryWord w) const {
        return values[gb_detail::level_offset(w.length) + w.bits];
    }
};

// C^w_0 = δ_1^{||w||} / ||w||!  — depends only on the word length.
template <class Scalar>
CoefficientTable<Scalar> seed_table(const std::vector<Scalar>& deltas, int max_len) {
    if (max_len < 0) throw ValidationError("seed_table: max_len must be >= 0");
    if (max_len > 20) {
        throw ValidationError("seed_table: max_len > 20 not supported (the table holds "
                              "2^{L+1}-1 coefficients; 20 already means two million)");
    }
    CoefficientTable<Scalar> table;
    table.stage = 0;
    table.max_len = max_len;
    table.values.resize((std::size_t{2} << max_len) - 1);

    const Scalar delta1 = deltas.empty() ? Scalar(1) : deltas.front();
    Scalar by_length(1);
    for (int len = 0; len <= max_len; ++len) {
        if (len > 0) by_length = by_length * delta1 / len;
        const std::size_t off = gb_detail::level_offset(len);
        for (std::size_t b = 0; b < (std::size_t{1} << len); ++b) {
            table.values[off + b] = by_length;
        }
    }
    return table;
}

// One recursion step p → p+1:
//   C^v_{p+1} = Σ over splittings v = (w, m) of
//               (−1)^{(p+1)|w|} (δ_{p+2} − δ_{p+1})^{||w||} / ||w||! · C^m_p,
// where m is the early part of the word (low bits) and w the part contributed
// by the newly applied interval (high bits).  δ_{n+1} = 1 closes the cycle.
template <class Scalar>
void advance(CoefficientTable<Scalar>& table, const std::vector<Scalar>& deltas) {
    const int n = static_cast<int>(deltas.size());
    const int p = table.stage;
    if (p + 1 > n) {
        throw NumericalError("advance: stage " + std::to_string(p + 1) + " exceeds pulse count " +
                             std::to_string(n));
    }
    const Scalar upper = (p + 2 <= n) ? deltas[static_cast<std::size_t>(p + 1)] : Scalar(1);
    const Scalar gap = upper - deltas[static_cast<std::size_t>(p)];

    // gap^i / i!
    std::vector<Scalar> gap_term(static_cast<std::size_t>(table.max_len) + 1);
    gap_term[0] = Scalar(1);
    for (int i = 1; i <= table.max_len; ++i) {
        gap_term[static_cast<std::size_t>(i)] = gap_term[static_cast<std::size_t>(i - 1)] * gap / i;
    }

    const bool signs_matter = (p + 1) % 2 != 0;
    std::vector<Scalar> next(table.values.size());
    for (int len = 0; len <= table.max_len; ++len) {
        const std::size_t off = gb_detail::level_offset(len);
        for (std::uint32_t v = 0; v < (std::uint32_t{1} << len); ++v) {
            Scalar acc(0);
            for (int k = 0; k <= len; ++k) {
                const std::uint32_t early = v & ((std::uint32_t{1} << k) - 1);
                const Scalar& old = table.values[gb_detail::level_offset(k) + early];
                Scalar term = gap_term[static_cast<std::size_t>(len - k)] * old;
                if (signs_matter && (std::popcount(v >> k) % 2 != 0)) {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            next[off + v] = std::move(acc);
        }
    }
    table.values = std::move(next);
    table.stage = p + 1;
}

// --------------------------- high-precision instants -------------------------

namespace gb_detail {

template <class Scalar>
std::vector<Scalar> udd_instants(int n) {
    if (n < 1) throw ValidationError("udd instants: n must be >= 1");
    const Scalar pi = atan(Scalar(1)) * 4;
    std::vector<Scalar> d(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        const Scalar s = sin(pi * j / (2 * n + 2));
        d[static_cast<std::size_t>(j - 1)] = s * s;
    }
    return d;
}

template <class Scalar>
std::vector<Scalar> cdd_instants(int level) {
    std::vector<Scalar> cur;
    for (int l = 0; l < level; ++l) {
        std::vector<Scalar> next;
        next.reserve(2 * cur.size() + 1);
        for (const Scalar& x : cur) next.push_back(x / 2);
        if (l % 2 == 0) next.push_back(Scalar(1) / 2);
        for (const Scalar& x : cur) next.push_back((x + 1) / 2);
        cur = std::move(next);
    }
    return cur;
}

} // namespace gb_detail

// Instants of a sequence spec evaluated directly at the precision of Scalar.
// Rational scalars are exact for every family except the optimized sequence,
// whose instants are algebraic irrationals beyond n = 2.
template <class Scalar>
std::vector<Scalar> instants_as(const SequenceSpec& spec) {
    constexpr bool rational = std::is_same_v<Scalar, Rational>;
    switch (spec.family) {
        case Family::udd: {
            if constexpr (rational) {
                if (spec.a == 1) return {Rational(1, 2)};
                if (spec.a == 2) return {Rational(1, 4), Rational(3, 4)};
                throw ValidationError("instants_as: optimized-sequence instants are irrational "
                                      "for n >= 3; use a high-precision float mode");
            } else {
                return gb_detail::udd_instants<Scalar>(spec.a);
            }
        }
        case Family::cpmg: {
            std::vector<Scalar> d;
            for (int j = 1; j <= spec.a; ++j) d.push_back(Scalar(2 * j - 1) / (2 * spec.a));
            return d;
        }
        case Family::bb: {
            std::vector<Scalar> d;
            for (int j = 1; j <= spec.a; ++j) d.push_back(Scalar(j) / (spec.a + 1));
            return d;
        }
        case Family::cdd:
            return gb_detail::cdd_instants<Scalar>(spec.a);
        case Family::iudd: {
            SequenceSpec inner;
            inner.family = Family::udd;
            inner.a = spec.a;
            const std::vector<Scalar> base = instants_as<Scalar>(inner);
            std::vector<Scalar> d;
            for (int k = 0; k < spec.b; ++k) {
                for (const Scalar& s : base) d.push_back((s + k) / spec.b);
            }
            return d;
        }
        case Family::custom: {
            // doubles are dyadic rationals, so this conversion is exact
            std::vector<Scalar> d;
            for (double x : spec.custom) d.push_back(Scalar(x));
            return d;
        }
    }
    throw ValidationError("instants_as: unknown family");
}

// ------------------------------- verification --------------------------------

struct VanishingReport {
    int n{0};
    int max_len{0};
    bool exact_mode{false};
    int precision_digits{0};       // effective decimal digits (float mode)
    bool odd_all_zero{false};
    double odd_max_log10{-std::numeric_limits<double>::infinity()};
    double even_max_log10{-std::numeric_limits<double>::infinity()};
    double separation_orders{std::numeric_limits<double>::infinity()};
    bool pass{false};
    std::string mode_note;
};

namespace gb_detail {

template <class Scalar>
double log10_magnitude(const Scalar& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    if constexpr (std::is_same_v<Scalar, Rational>) {
        const Rational a = x < 0 ? Rational(-x) : x;
        return static_cast<double>(log10(mp::cpp_bin_float_50(a)));
    } else {
        return static_cast<double>(log10(abs(x)));
    }
}

template <class Scalar>
VanishingReport run_recursion(const std::vector<Scalar>& deltas, int max_len) {
    const int n = static_cast<int>(deltas.size());
    auto table = seed_table(deltas, max_len);
    for (int p = 0; p < n; ++p) advance(table, deltas);

    VanishingReport report;
    report.n = n;
    report.max_len = max_len;
    report.odd_all_zero = true;
    for (int len = 0; len <= max_len; ++len) {
        const std::size_t off = level_offset(len);
        for (std::uint32_t b = 0; b < (std::uint32_t{1} << len); ++b) {
            const double lg = log10_magnitude(table.values[off + b]);
            if (std::popcount(b) % 2 != 0) {
                report.odd_max_log10 = std::max(report.odd_max_log10, lg);
                if (table.values[off + b] != 0) report.odd_all_zero = false;
            } else {
                report.even_max_log10 = std::max(report.even_max_log10, lg);
            }
        }
    }
    report.separation_orders = report.even_max_log10 - report.odd_max_log10;
    return report;
}

using float20 = mp::number<mp::cpp_bin_float<20>>;
using float30 = mp::number<mp::cpp_bin_float<30>>;
using float40 = mp::number<mp::cpp_bin_float<40>>;
using float60 = mp::number<mp::cpp_bin_float<60>>;
using float80 = mp::number<mp::cpp_bin_float<80>>;
using float120 = mp::number<mp::cpp_bin_float<120>>;

template <class Scalar>
VanishingReport run_float(const SequenceSpec& spec, int max_len) {
    const auto deltas = instants_as<Scalar>(spec);
    VanishingReport report = run_recursion(deltas, max_len);
    report.precision_digits = std::numeric_limits<Scalar>::digits10;
    return report;
}

inline VanishingReport run_with_digits(const SequenceSpec& spec, int max_len, int digits) {
    if (digits <= 20) return run_float<float20>(spec, max_len);
    if (digits <= 30) return run_float<float30>(spec, max_len);
    if (digits <= 40) return run_float<float40>(spec, max_len);
    if (digits <= 60) return run_float<float60>(spec, max_len);
    if (digits <= 80) return run_float<float80>(spec, max_len);
    if (digits <= 120) return run_float<float120>(spec, max_len);
    throw ValidationError("vanishing report: precision above 120 digits not supported");
}

} // namespace gb_detail

// Stage-n coefficient statistics for an arbitrary sequence spec, in exact
// rational arithmetic (digits = 0) or at the requested decimal precision.
// Pass means: odd-checksum coefficients exactly zero (rational mode) or below
// 10^{-(digits-10)} (float mode).
inline VanishingReport vanishing_report_for(const SequenceSpec& spec, int max_len, int digits) {
    const int n = make_sequence(spec).n();
    if (max_len < 0) max_len = n;
    if (max_len > n) {
        throw ValidationError("vanishing report: max_len must be <= pulse count (vanishing is "
                              "only claimed for orders up to n)");
    }
    if (digits == 0) {
        const auto deltas = instants_as<Rational>(spec);
        VanishingReport report = gb_detail::run_recursion(deltas, max_len);
        report.exact_mode = true;
        report.pass = report.odd_all_zero;
        report.mode_note = report.odd_all_zero ? "exact zeros" : "exact nonzero coefficients";
        return report;
    }
    VanishingReport report = gb_detail::run_with_digits(spec, max_len, digits);
    report.pass = report.odd_max_log10 <= -(report.precision_digits - 10);
    return report;
}

// Verifies odd-checksum vanishing for the optimized sequence.  digits = 0
// selects exact rational mode (n ≤ 2 only); negative digits pick the default
// working precision.  Float mode must separate even from odd maxima by at
// least 10 orders of magnitude, otherwise the precision cannot support the
// conclusion and a PrecisionError is raised.
inline VanishingReport verify_udd_order(int n, int max_len = -1, int digits = -1) {
    if (n < 1) throw ValidationError("verify_udd_order: n must be >= 1");
    SequenceSpec spec;
    spec.family = Family::udd;
    spec.a = n;
    spec.label = "udd:" + std::to_string(n);
    if (digits < 0) digits = n <= 10 ? 60 : 80;
    VanishingReport report = vanishing_report_for(spec, max_len, digits);
    if (!report.exact_mode && report.separation_orders < 10.0) {
        throw PrecisionError(
            "verify_udd_order: even/odd separation is only " +
            std::to_string(report.separation_orders) + " orders of magnitude at " +
            std::to_string(report.precision_digits) + " digits; increase the working precision");
    }
    return report;
}

} // namespace dd
