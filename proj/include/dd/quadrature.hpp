// quadrature.hpp — globally adaptive Gauss–Kronrod (7,15) integration over a
// prepartitioned interval list, for real- or complex-valued integrands.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "dd/errors.hpp"

namespace dd {

struct QuadratureOptions {
    double abs_tol{1e-14};
    double rel_tol{1e-10};
    int max_panels{400000};
};

template <class Value>
struct Integral {
    Value value{};
    double error{0.0};
    int panels{0};
};

namespace quad_detail {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double mag(double v) { return std::abs(v); }
inline double mag(const std::complex<double>& v) { return std::abs(v); }

template <class Value>
struct Panel {
    double a, b;
    Value value;
    double error;
    double resabs;   // ∫|f| estimate, sets the attainable roundoff floor
};

// One G7/K15 application on [a,b] with the QUADPACK error estimate.
template <class F>
auto gk15(F& f, double a, double b) {
    using Value = std::decay_t<decltype(f(0.0))>;
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    Value fv1[7], fv2[7];
    const Value fc = f(centr);
    Value resg = fc * wg[3];
    Value resk = fc * wgk[7];
    double resabs = mag(fc) * wgk[7];
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * xgk[j];
        fv1[j] = f(centr - absc);
        fv2[j] = f(centr + absc);
        const Value fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += fsum * wg[j / 2];
        resk += fsum * wgk[j];
        resabs += wgk[j] * (mag(fv1[j]) + mag(fv2[j]));
    }
    const Value reskh = resk * 0.5;
    double resasc = wgk[7] * mag(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += wgk[j] * (mag(fv1[j] - reskh) + mag(fv2[j] - reskh));
    }
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double err = mag(resk - resg) * std::abs(hlgth);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(err, 50.0 * eps * resabs);
    }
    return Panel<Value>{a, b, resk * hlgth, err, resabs};
}

} // namespace quad_detail

// Integrates f over the union of [breaks[i], breaks[i+1]], refining the panel
// with the largest error estimate until the accumulated estimate drops below
// max(abs_tol, rel_tol·|value|).  Throws NumericalError if the panel budget
// is exhausted first.
template <class F>
auto integrate_segments(F&& f, const std::vector<double>& breaks,
                        const QuadratureOptions& opts = {}) {
    using Value = std::decay_t<decltype(f(0.0))>;
    if (breaks.size() < 2) return Integral<Value>{};

    auto cmp = [](const quad_detail::Panel<Value>& x, const quad_detail::Panel<Value>& y) {
        return x.error < y.error;
    };
    std::priority_queue<quad_detail::Panel<Value>, std::vector<quad_detail::Panel<Value>>,
                        decltype(cmp)> queue(cmp);

    Value total{};
    double total_err = 0.0;
    double total_resabs = 0.0;
    int panels = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1])) {
            throw ValidationError("integrate_segments: breakpoints must be strictly increasing");
        }
        auto p = quad_detail::gk15(f, breaks[i], breaks[i + 1]);
        total += p.value;
        total_err += p.error;
        total_resabs += p.resabs;
        ++panels;
        queue.push(std::move(p));
    }

    // An oscillatory integrand with strong cancellation cannot be resolved
    // below the rounding of its absolute-value mass, so the attainable floor
    // is ~50 eps ∫|f|; give up refining once the estimate reaches it.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({opts.abs_tol, opts.rel_tol * quad_detail::mag(total),
                         100.0 * eps * total_resabs});
    };

    while (total_err > target()) {
        if (panels >= opts.max_panels) {
            throw NumericalError("integrate_segments: panel budget exhausted (" +
                                 std::to_string(opts.max_panels) + " panels, error " +
                                 std::to_string(total_err) + ")");
        }
        const auto worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;
        total_resabs -= worst.resabs;
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // interval no longer splittable in double precision; keep its estimate
            total += worst.value;
            total_err += worst.error;
            total_resabs += worst.resabs;
            break;
        }
        auto left = quad_detail::gk15(f, worst.a, mid);
        auto right = quad_detail::gk15(f, mid, worst.b);
        total += left.value + right.value;
        total_err += left.error + right.error;
        total_resabs += left.resabs + right.resabs;
        ++panels;
        queue.push(std::move(left));
        queue.push(std::move(right));
    }
    return Integral<Value>{total, total_err, panels};
}

// Uniform prepartition of [a,b] into panels of width at most initial_width
// (one panel if initial_width <= 0), then adaptive refinement as above.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureOptions& opts = {},
               double initial_width = 0.0) {
    std::vector<double> breaks;
    if (initial_width > 0.0 && b - a > initial_width) {
        const auto count = static_cast<std::size_t>(std::ceil((b - a) / initial_width));
        if (count > 3000000) {
            throw NumericalError("integrate: initial partition too fine (" +
                                 std::to_string(count) + " panels)");
        }
        breaks.reserve(count + 1);
        for (std::size_t i = 0; i < count; ++i) {
            breaks.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count));
        }
        breaks.push_back(b);
    } else {
        breaks = {a, b};
    }
    return integrate_segments(std::forward<F>(f), breaks, opts);
}

} // namespace dd
