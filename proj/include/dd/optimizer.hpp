// optimizer.hpp — Newton solution of the order-condition system for the pulse
// instants, and the residual check of the closed-form solution.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dd/errors.hpp"
#include "dd/filter.hpp"
#include "dd/pulse_sequence.hpp"

namespace dd {

struct OptimizationResult {
    std::vector<double> deltas;
    double residual_norm{0.0};   // max_m |r_m|
    int iterations{0};
    bool converged{false};
    int restarts{0};
};

struct SolveOptions {
    double ftol{1e-12};
    int max_iterations{200};
    int max_restarts{20};
    unsigned seed{0};
};

namespace opt_detail {

using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// r_m(δ) = (−1)^{n+1} + 2 Σ_j (−1)^j δ_j^m for m = 1..n
inline Vec residual_vector(const Vec& d) {
    const auto n = d.size();
    Vec r(n);
    Vec power = Vec::Ones(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        power = power.cwiseProduct(d);
        long double acc = (n % 2 == 0) ? -1.0L : 1.0L;
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += (j % 2 == 0 ? -2.0L : 2.0L) * power(j);   // j index is 0-based
        }
        r(m) = acc;
    }
    return r;
}

// ∂r_m/∂δ_j = 2 (−1)^j m δ_j^{m−1}
inline Mat jacobian(const Vec& d) {
    const auto n = d.size();
    Mat jac(n, n);
    Vec power = Vec::Ones(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index j = 0; j < n; ++j) {
            jac(m, j) = (j % 2 == 0 ? -2.0L : 2.0L) * (m + 1.0L) * power(j);
        }
        power = power.cwiseProduct(d);
    }
    return jac;
}

inline bool ordered_in_unit_interval(const Vec& d) {
    for (Eigen::Index j = 0; j < d.size(); ++j) {
        if (!(d(j) > 0.0L && d(j) < 1.0L)) return false;
        if (j > 0 && !(d(j - 1) < d(j))) return false;
    }
    return true;
}

inline Vec cpmg_start(int n) {
    Vec d(n);
    for (int j = 1; j <= n; ++j) d(j - 1) = (2.0L * j - 1.0L) / (2.0L * n);
    return d;
}

// CPMG grid plus uniform noise of the given amplitude, clipped back to a
// strictly increasing sequence in (0,1).
inline Vec perturbed_start(int n, std::mt19937& rng, double amplitude) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    Vec d = cpmg_start(n);
    for (int j = 0; j < n; ++j) d(j) += u(rng);
    std::sort(d.data(), d.data() + n);
    const long double gap = 1e-6L;
    for (int j = 0; j < n; ++j) {
        const long double lo = (j == 0 ? gap : d(j - 1) + gap);
        d(j) = std::max(d(j), lo);
        d(j) = std::min(d(j), 1.0L - gap * (n - j));
    }
    return d;
}

} // namespace opt_detail

// Damped Newton iteration on the n×n order-condition system, starting from
// the echo-train grid (j−1/2)/n unless an initial guess is supplied.  A step
// is halved until the residual norm decreases; leaving the ordered (0,1)
// region triggers a restart from a freshly perturbed grid.
inline OptimizationResult solve_order_conditions(
    int n, const std::optional<std::vector<double>>& initial = std::nullopt,
    const SolveOptions& opts = {}) {
    using namespace opt_detail;
    if (n < 1) throw ValidationError("solve_order_conditions: n must be >= 1");
    if (initial) {
        if (static_cast<int>(initial->size()) != n) {
            throw ValidationError("solve_order_conditions: initial guess must have n entries");
        }
        validate_instants(*initial);
    }

    std::mt19937 rng(opts.seed);
    OptimizationResult out;
    Vec d(n);
    if (initial) {
        for (int j = 0; j < n; ++j) d(j) = (*initial)[static_cast<std::size_t>(j)];
    } else {
        d = cpmg_start(n);
    }

    int total_iterations = 0;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        out.restarts = restart;
        Vec r = residual_vector(d);
        long double rnorm = r.cwiseAbs().maxCoeff();
        for (int it = 0; it < opts.max_iterations; ++it) {
            if (rnorm <= opts.ftol) break;
            Mat jac = jacobian(d);
            Eigen::PartialPivLU<Mat> lu(jac);
            const Vec step = lu.solve(-r);
            if (!step.allFinite()) {
                throw NumericalError("solve_order_conditions: singular Jacobian at iteration " +
                                     std::to_string(total_iterations));
            }
            long double lambda = 1.0L;
            bool accepted = false;
            for (int halving = 0; halving < 30; ++halving) {
                Vec trial = d + lambda * step;
                if (ordered_in_unit_interval(trial)) {
                    Vec rt = residual_vector(trial);
                    const long double tnorm = rt.cwiseAbs().maxCoeff();
                    if (tnorm < rnorm) {
                        d = std::move(trial);
                        r = std::move(rt);
                        rnorm = tnorm;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5L;
            }
            ++total_iterations;
            if (!accepted) break;
        }
        if (rnorm <= opts.ftol && ordered_in_unit_interval(d)) {
            out.converged = true;
            break;
        }
        // either a rejected step or an exhausted iteration budget: restart
        if (restart == opts.max_restarts) break;
        d = perturbed_start(n, rng, 0.02);
    }

    out.iterations = total_iterations;
    Vec r = residual_vector(d);
    out.residual_norm = static_cast<double>(r.cwiseAbs().maxCoeff());
    out.deltas.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out.deltas[static_cast<std::size_t>(j)] = static_cast<double>(d(j));
    return out;
}

// Condition number of the Jacobian at a solution (diagnostic).
inline double jacobian_condition(const std::vector<double>& deltas) {
    using namespace opt_detail;
    Vec d(static_cast<Eigen::Index>(deltas.size()));
    for (std::size_t j = 0; j < deltas.size(); ++j) d(static_cast<Eigen::Index>(j)) = deltas[j];
    Eigen::MatrixXd jac = jacobian(d).cast<double>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
}

struct ClosedFormReport {
    int n{0};
    double tol{0.0};
    double max_residual{0.0};
    std::vector<double> residuals;
    bool pass{false};
};

// Evaluates the order-condition residuals m = 1..n at the closed-form
// instants sin²(πj/(2n+2)); passes iff the largest magnitude is below tol.
inline ClosedFormReport verify_closed_form(int n, double tol = 1e-10) {
    if (n < 1) throw ValidationError("verify_closed_form: n must be >= 1");
    const PulseSequence seq = make_udd(n);
    ClosedFormReport report;
    report.n = n;
    report.tol = tol;
    report.residuals.reserve(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        report.residuals.push_back(derivative_residual(seq, m));
        report.max_residual = std::max(report.max_residual, std::abs(report.residuals.back()));
    }
    report.pass = report.max_residual <= tol;
    return report;
}

} // namespace dd
