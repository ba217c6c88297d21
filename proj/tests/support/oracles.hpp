// oracles.hpp — test-only reference implementations kept independent of the
// library code paths they check: brute-force quadrature, series-based sine and
// cosine integrals, and a log-log slope fit.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr long double euler_gamma = 0.577215664901532860606512090082402431042L;

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: recursion depth exhausted");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Plain adaptive Simpson integration; deliberately a different scheme from the
// library's Gauss–Kronrod machinery.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int depth = 60) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Adaptive Simpson over a uniform pre-split, so oscillatory integrands cannot
// alias through the first few stencils.
template <class F>
double panelized_simpson(const F& f, double a, double b, int pieces, double tol) {
    double acc = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double lo = a + (b - a) * i / pieces;
        const double hi = a + (b - a) * (i + 1) / pieces;
        acc += adaptive_simpson(f, lo, hi, tol / pieces);
    }
    return acc;
}

namespace detail {

// E1(z) by the standard continued fraction (modified Lentz), long double.
inline std::complex<long double> expint_e1_cf(std::complex<long double> z) {
    constexpr long double tiny = 1e-300L;
    constexpr long double eps = 1e-20L;
    std::complex<long double> b = z + 1.0L;
    std::complex<long double> c = 1.0L / tiny;
    std::complex<long double> d = 1.0L / b;
    std::complex<long double> h = d;
    for (int i = 1; i < 20000; ++i) {
        const long double an = -static_cast<long double>(i) * static_cast<long double>(i);
        b += 2.0L;
        d = 1.0L / (an * d + b);
        c = b + an / c;
        const std::complex<long double> del = c * d;
        h *= del;
        if (std::abs(del - std::complex<long double>(1.0L)) < eps) {
            return h * std::exp(-z);
        }
    }
    throw std::runtime_error("expint_e1_cf: no convergence");
}

} // namespace detail

struct SiCi {
    double si;
    double ci;
};

// Sine and cosine integrals.  Maclaurin series below x = 8, continued
// fraction for E1(ix) above, both in long double.
inline SiCi sici(double x) {
    if (!(x > 0)) throw std::runtime_error("sici: x must be > 0");
    const long double lx = static_cast<long double>(x);
    if (x < 8.0) {
        // Si: sum (−1)^k x^{2k+1} / ((2k+1)(2k+1)!)
        // Cin: sum (−1)^{k+1} x^{2k} / ((2k)(2k)!); Ci = γ + ln x − Cin
        long double si_sum = 0.0L;
        long double cin_sum = 0.0L;
        long double term = lx;   // x^{2k+1}/(2k+1)! at k=0
        for (int k = 0; k < 200; ++k) {
            const int m = 2 * k + 1;
            const long double si_piece = term / m;
            si_sum += (k % 2 == 0) ? si_piece : -si_piece;
            const long double even_term = term * lx / (m + 1);   // x^{2k+2}/(2k+2)!
            const long double cin_piece = even_term / (m + 1);
            cin_sum += (k % 2 == 0) ? cin_piece : -cin_piece;
            term = even_term * lx / (m + 2);
            if (term < 1e-24L * (1.0L + std::abs(si_sum))) break;
        }
        return {static_cast<double>(si_sum),
                static_cast<double>(euler_gamma + std::log(lx) - cin_sum)};
    }
    const std::complex<long double> e1 = detail::expint_e1_cf({0.0L, lx});
    const long double pi_half = 1.570796326794896619231321691639751442L;
    return {static_cast<double>(pi_half + e1.imag()), static_cast<double>(-e1.real())};
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::runtime_error("loglog_slope: need at least two points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        t[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    }
    return t;
}

} // namespace oracle
