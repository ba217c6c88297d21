// filter.hpp — the sequence filter function y_n(z), its companions, and the
// Taylor-order machinery used to characterize decoupling order.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "dd/errors.hpp"
#include "dd/pulse_sequence.hpp"

namespace dd {

// y_n(z) written as a phasor sum Σ_a coeff[a]·exp(i z instant[a]); the list
// always starts with (0, 1) and ends with (1, ±1).
struct FilterTerms {
    std::vector<double> instant;
    std::vector<double> coeff;
};

inline FilterTerms filter_terms(const PulseSequence& seq) {
    const int n = seq.n();
    FilterTerms ft;
    ft.instant.reserve(static_cast<std::size_t>(n) + 2);
    ft.coeff.reserve(static_cast<std::size_t>(n) + 2);
    ft.instant.push_back(0.0);
    ft.coeff.push_back(1.0);
    for (int j = 1; j <= n; ++j) {
        ft.instant.push_back(seq.deltas[static_cast<std::size_t>(j - 1)]);
        ft.coeff.push_back(j % 2 ? -2.0 : 2.0);
    }
    ft.instant.push_back(1.0);
    ft.coeff.push_back(n % 2 ? 1.0 : -1.0);   // (−1)^{n+1}
    return ft;
}

// y_n(z) = 1 + (−1)^{n+1} e^{iz} + 2 Σ_{j=1}^n (−1)^j e^{iz δ_j}, by direct
// summation.  y_n(0) = 0 for every sequence.
inline std::complex<double> eval_y(const PulseSequence& seq, double z) {
    const int n = seq.n();
    std::complex<double> acc(1.0, 0.0);
    double sign = -2.0;
    for (int j = 1; j <= n; ++j) {
        const double a = z * seq.deltas[static_cast<std::size_t>(j - 1)];
        acc += std::complex<double>(sign * std::cos(a), sign * std::sin(a));
        sign = -sign;
    }
    const double end = n % 2 ? 1.0 : -1.0;
    acc += std::complex<double>(end * std::cos(z), end * std::sin(z));
    return acc;
}

// x_n(z) = −Im y_n(z) = (−1)^n sin z + 2 Σ_{j=1}^n (−1)^{j+1} sin(z δ_j).
inline double eval_x(const PulseSequence& seq, double z) {
    const int n = seq.n();
    double acc = 0.0;
    double sign = 2.0;
    for (int j = 1; j <= n; ++j) {
        acc += sign * std::sin(z * seq.deltas[static_cast<std::size_t>(j - 1)]);
        sign = -sign;
    }
    acc += (n % 2 ? -1.0 : 1.0) * std::sin(z);
    return acc;
}

struct FilterEvaluation {
    double z;
    std::complex<double> value;
    double abs2;
};

inline FilterEvaluation evaluate_filter(const PulseSequence& seq, double z) {
    const std::complex<double> y = eval_y(seq, z);
    return {z, y, std::norm(y)};
}

// ------------------------------ closed forms --------------------------------
//
// Family-specific closed expressions for y_n(z).  They are stated for the
// parameter ranges below; anything else must go through the generic sum.

// Optimized sequence, even n:
//   y = −2i e^{iz/2} [ sin(z/2) + 2 Σ_{j=1}^{n/2} (−1)^j sin((z/2) cos(jπ/(n+1))) ]
inline std::complex<double> y_udd_closed(int n, double z) {
    if (n < 2 || n % 2 != 0) {
        throw ValidationError("y_udd_closed: requires an even pulse count n >= 2");
    }
    double bracket = std::sin(0.5 * z);
    double sign = -2.0;
    for (int j = 1; j <= n / 2; ++j) {
        bracket += sign * std::sin(0.5 * z * std::cos(std::numbers::pi * j / (n + 1.0)));
        sign = -sign;
    }
    const std::complex<double> phase(std::cos(0.5 * z), std::sin(0.5 * z));
    return std::complex<double>(0.0, -2.0) * phase * bracket;
}

// Concatenated sequence, any level l >= 0:
//   y = (−2i)^{l+1} e^{iz/2} sin(2^{−l−1} z) Π_{k=1}^{l} sin(2^{−k−1} z)
inline std::complex<double> y_cdd_closed(int level, double z) {
    if (level < 0) throw ValidationError("y_cdd_closed: level must be >= 0");
    std::complex<double> prefactor(1.0, 0.0);
    for (int k = 0; k <= level; ++k) prefactor *= std::complex<double>(0.0, -2.0);
    double product = std::sin(std::ldexp(z, -level - 1));
    for (int k = 1; k <= level; ++k) product *= std::sin(std::ldexp(z, -k - 1));
    const std::complex<double> phase(std::cos(0.5 * z), std::sin(0.5 * z));
    return prefactor * phase * product;
}

// Periodic sequence, even n:  y = −2i e^{iz/2} cos(z/2) tan(z/(2n+2))
inline std::complex<double> y_bb_closed(int n, double z) {
    if (n < 2 || n % 2 != 0) {
        throw ValidationError("y_bb_closed: requires an even pulse count n >= 2");
    }
    const std::complex<double> phase(std::cos(0.5 * z), std::sin(0.5 * z));
    return std::complex<double>(0.0, -2.0) * phase * std::cos(0.5 * z) *
           std::tan(z / (2.0 * n + 2.0));
}

// Echo train, even n:  y = 4i e^{iz/2} sin²(z/(4n)) sin(z/2) / cos(z/(2n)).
// The quotient has removable singularities at the zeros of cos(z/(2n)); very
// close to them the generic sum is used instead.
inline std::complex<double> y_cpmg_closed(int n, double z) {
    if (n < 2 || n % 2 != 0) {
        throw ValidationError("y_cpmg_closed: requires an even pulse count n >= 2");
    }
    const double c = std::cos(z / (2.0 * n));
    if (std::abs(c) < 1e-8) return eval_y(make_cpmg(n), z);
    const double s = std::sin(z / (4.0 * n));
    const std::complex<double> phase(std::cos(0.5 * z), std::sin(0.5 * z));
    return std::complex<double>(0.0, 4.0) * phase * (s * s) * std::sin(0.5 * z) / c;
}

// Dispatch on family; rejects unsupported families and parities.
inline std::complex<double> eval_y_closed(Family family, int param, double z) {
    switch (family) {
        case Family::udd:  return y_udd_closed(param, z);
        case Family::cdd:  return y_cdd_closed(param, z);
        case Family::bb:   return y_bb_closed(param, z);
        case Family::cpmg: return y_cpmg_closed(param, z);
        default:
            throw ValidationError(std::string("eval_y_closed: no closed form for family '") +
                                  family_name(family) + "'");
    }
}

// ----------------------------- Taylor orders ---------------------------------

// Residual of the m-th order condition at z = 0:
//   r_m = (−1)^{n+1} + 2 Σ_{j=1}^n (−1)^j δ_j^m.
// The m-th derivative of y_n at 0 equals i^m r_m, so r_m = 0 iff that
// derivative vanishes.  Generic over the scalar type so that exact rational
// instants stay exact.
template <class Scalar>
Scalar derivative_residual(const std::vector<Scalar>& deltas, int m) {
    if (m < 1) throw ValidationError("derivative_residual: m must be >= 1");
    const int n = static_cast<int>(deltas.size());
    Scalar acc = n % 2 ? Scalar(1) : Scalar(-1);
    for (int j = 1; j <= n; ++j) {
        const Scalar& d = deltas[static_cast<std::size_t>(j - 1)];
        Scalar p(1);
        for (int k = 0; k < m; ++k) p *= d;
        acc += (j % 2 ? Scalar(-2) : Scalar(2)) * p;
    }
    return acc;
}

inline double derivative_residual(const PulseSequence& seq, int m) {
    return derivative_residual<double>(seq.deltas, m);
}

// Smallest m in [1, max_m] with |r_m| > tol, i.e. the leading non-vanishing
// derivative order of y_n at 0; max_m+1 if all residuals up to max_m pass.
inline int taylor_order(const PulseSequence& seq, int max_m, double tol = 1e-10) {
    if (max_m < 1) throw ValidationError("taylor_order: max_m must be >= 1");
    if (!(tol > 0)) throw ValidationError("taylor_order: tol must be > 0");
    for (int m = 1; m <= max_m; ++m) {
        if (std::abs(derivative_residual(seq, m)) > tol) return m;
    }
    return max_m + 1;
}

} // namespace dd
