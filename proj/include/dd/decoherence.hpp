// decoherence.hpp — suppression exponent χ_n(t), phase φ_n(t), and the signal
// s(t) = cos(2φ_n) exp(−2χ_n) under a dephasing bath.
//
// Quantum mode integrates
//   χ_n(t) = ∫ J(ω) |y_n(ωt)|² / (4ω²) · coth(βω/2) dω
//   φ_n(t) = ∫ J(ω) x_n(ωt)  / (2ω²) dω
// over ω ∈ [0, ∞); classical mode replaces J·coth by (4/π)p(ω) in χ and has
// no phase.  The pulse-free evolution is the empty sequence (|y_0|²/4 equals
// sin²(ωt/2)), so one code path serves both.
//
// Hard-cutoff spectra are integrated directly on [0, ω_D].  Power-law spectra
// split at Ω well above ω_D: [0, Ω] is handled by adaptive panels sized to
// resolve the oscillation of y_n(ωt), and [Ω, ∞) analytically per Fourier
// component of |y_n|²: the non-oscillatory part of the tail integrates in
// closed form, each oscillatory component is rotated onto a ray in the upper
// half plane where the integrand decays monotonically, and finite-β thermal
// weights enter through the expansion coth(x) = 1 + 2Σ_k exp(−2kx).  All the
// implemented spectra are infrared-benign at any β and ultraviolet-convergent
// for every γ > 0, so no runtime divergence rejection is needed beyond the
// constructor checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dd/bath.hpp"
#include "dd/errors.hpp"
#include "dd/filter.hpp"
#include "dd/pulse_sequence.hpp"
#include "dd/quadrature.hpp"

namespace dd {

struct DecoherencePoint {
    double t{0.0};
    double chi{0.0};
    double phi{0.0};
    double s{1.0};
    double deviation{0.0};
};

struct DecoherenceCurve {
    std::vector<DecoherencePoint> points;
    std::string sequence_label;
    SpectralDensity bath;
    Environment env;
};

struct IntegralEstimate {
    double value{0.0};
    double error{0.0};
};

namespace deco_detail {

// |y_n(z)|² = flat + Σ_m weight[m]·cos(diff[m]·z); flat = Σ_a c_a².
struct CosineSpectrum {
    double flat{0.0};
    std::vector<double> diff;
    std::vector<double> weight;
};

inline CosineSpectrum cosine_spectrum(const FilterTerms& ft) {
    CosineSpectrum cs;
    const std::size_t m = ft.instant.size();
    std::vector<std::pair<double, double>> raw;
    raw.reserve(m * (m - 1) / 2);
    for (std::size_t a = 0; a < m; ++a) {
        cs.flat += ft.coeff[a] * ft.coeff[a];
        for (std::size_t b = a + 1; b < m; ++b) {
            raw.emplace_back(ft.instant[b] - ft.instant[a], 2.0 * ft.coeff[a] * ft.coeff[b]);
        }
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [d, w] : raw) {
        if (!cs.diff.empty() && d - cs.diff.back() < 1e-12) {
            cs.weight.back() += w;
        } else {
            cs.diff.push_back(d);
            cs.weight.push_back(w);
        }
    }
    return cs;
}

// x_n(z) = Σ_a weight[a]·sin(arg[a]·z) over the instants with d_a > 0.
struct SineSpectrum {
    std::vector<double> arg;
    std::vector<double> weight;
};

inline SineSpectrum sine_spectrum(const FilterTerms& ft) {
    SineSpectrum ss;
    for (std::size_t a = 1; a < ft.instant.size(); ++a) {
        ss.arg.push_back(ft.instant[a]);
        ss.weight.push_back(-ft.coeff[a]);
    }
    return ss;
}

// h(ω) = 1 / (ω (1 + (ω/ω_D)^γ)) on the complex continuation used by the
// tail; zero once the power overflows.
inline std::complex<double> h_powerlaw(std::complex<double> w, double omega_d, double gamma) {
    const double scale = gamma * std::log(std::abs(w) / omega_d);
    if (scale > 700.0) return {0.0, 0.0};
    return 1.0 / (w * (1.0 + std::pow(w / omega_d, gamma)));
}

// ∫_Ω^∞ h(ω) dω in closed form.
inline double tail_flat(double omega_d, double gamma, double Omega) {
    return std::log1p(std::pow(omega_d / Omega, gamma)) / gamma;
}

// T(τ, κ) = ∫_Ω^∞ e^{(iτ−κ)ω} h(ω) dω for τ ≥ 0, κ ≥ 0, not both zero.
// The contour is rotated onto the ray ω = Ω + ρ e^{iθ} with θ = atan2(τ, κ),
// along which the exponential decays like e^{−μρ}, μ = |iτ−κ|; h has no
// singularities in the swept sector because its poles sit on |ω| = ω_D < Ω.
inline std::complex<double> tail_component(double omega_d, double gamma, double Omega,
                                           double tau, double kappa, double eps_abs) {
    const double mu = std::hypot(tau, kappa);
    const std::complex<double> dir(kappa / mu, tau / mu);

    auto bound_from = [&](double r) {
        const double reach = std::max(r, Omega);
        const double decay = std::exp(-mu * r);
        const double algebraic = std::pow(omega_d / reach, gamma) *
                                 ((r >= Omega ? 1.0 / gamma : 1.0 / gamma + 1.0));
        const double exponential = std::pow(omega_d / reach, gamma) * decay / (mu * reach);
        return 2.0 * std::min(algebraic, exponential);
    };

    const double ell = std::min(Omega, 1.0 / mu);
    std::vector<double> breaks{0.0, ell};
    double reach = ell;
    double trunc = bound_from(reach);
    while (trunc > eps_abs && reach < 1e300) {
        reach *= 2.0;
        breaks.push_back(reach);
        trunc = bound_from(reach);
    }

    auto g = [&](double rho) {
        return std::exp(-mu * rho) * h_powerlaw(Omega + rho * dir, omega_d, gamma);
    };
    QuadratureOptions ray_opts;
    ray_opts.abs_tol = eps_abs;
    ray_opts.rel_tol = 1e-13;
    ray_opts.max_panels = 40000;
    const auto ray = integrate_segments(g, breaks, ray_opts);

    const std::complex<double> front =
        dir * std::exp(-kappa * Omega) *
        std::complex<double>(std::cos(tau * Omega), std::sin(tau * Omega));
    return front * ray.value;
}

enum class Kernel { suppression, phase };

// ω→0 limit of the integrand; the leading behaviour of |y|² and x is set by
// the first order-condition residual r₁.
inline double origin_limit(Kernel kernel, const SpectralDensity& sd, const Environment& env,
                           double t, double r1) {
    if (kernel == Kernel::phase) return -sd.alpha * r1 * t;
    if (env.zero_temperature()) return 0.0;
    return sd.alpha * r1 * r1 * t * t / env.beta;
}

// Start of the analytic tail region for power-law cutoffs.  Far enough above
// ω_D that |1 + (ω/ω_D)^γ| ≥ (1/2)(ω/ω_D)^γ holds on the rotated contour, and
// pushed out at finite β so the thermal series needs few terms.
inline double tail_start(const SpectralDensity& sd, const Environment& env) {
    double Omega = sd.omega_d * std::max(8.0, 2.0 * std::pow(2.0, 1.0 / sd.gamma));
    if (!env.zero_temperature()) {
        Omega = std::max(Omega, std::min(4.0 / env.beta, 1e4 * sd.omega_d));
    }
    return Omega;
}

} // namespace deco_detail

// Exponential suppression exponent χ_n(t), with its quadrature error estimate.
inline IntegralEstimate chi_detail(const PulseSequence& seq, const SpectralDensity& sd,
                                   const Environment& env, double t,
                                   const QuadratureOptions& opts = {}) {
    if (t < 0) throw ValidationError("chi: t must be >= 0");
    if (t == 0) return {0.0, 0.0};

    const double r1 = derivative_residual<double>(seq.deltas, 1);
    const double omega_eps = 1e-12 * sd.omega_d;
    const bool classical = env.mode == Environment::Mode::classical;

    auto integrand = [&](double w) -> double {
        if (w < omega_eps) {
            return deco_detail::origin_limit(deco_detail::Kernel::suppression, sd, env, t, r1);
        }
        const double k = std::norm(eval_y(seq, w * t)) / (4.0 * w * w);
        if (classical) {
            return (4.0 / std::numbers::pi) * power_spectrum_from_quantum(sd, env, w) * k;
        }
        return eval_j(sd, w) * thermal_factor(env, w) * k;
    };

    const double head_width = std::min(sd.omega_d, std::numbers::pi / t) / 4.0;
    QuadratureOptions head_opts = opts;
    head_opts.abs_tol = 0.5 * opts.abs_tol;
    head_opts.rel_tol = 0.5 * opts.rel_tol;

    if (sd.kind == SpectralDensity::Kind::hard_cutoff) {
        const auto head = integrate(integrand, 0.0, sd.omega_d, head_opts, head_width);
        return {head.value, head.error};
    }

    const double Omega = deco_detail::tail_start(sd, env);
    const auto head = integrate(integrand, 0.0, Omega, head_opts, head_width);

    const auto cs = deco_detail::cosine_spectrum(filter_terms(seq));
    double weight_abs = cs.flat;
    for (double w : cs.weight) weight_abs += std::abs(w);

    const double prefactor = 0.5 * sd.alpha;   // J(ω)/(4ω²)·|y|² = (α/2)·|y|²·h(ω)
    const double eps_tail = std::max(0.5 * opts.abs_tol, 0.5 * opts.rel_tol * std::abs(head.value));
    const double eps_ray = eps_tail / (prefactor * std::max(weight_abs, 1.0) * 8.0);
    const double flat0 = deco_detail::tail_flat(sd.omega_d, sd.gamma, Omega);

    double tail = cs.flat * flat0;
    double tail_err = 0.0;
    for (std::size_t m = 0; m < cs.diff.size(); ++m) {
        const auto T = deco_detail::tail_component(sd.omega_d, sd.gamma, Omega,
                                                   cs.diff[m] * t, 0.0, eps_ray);
        tail += cs.weight[m] * T.real();
        tail_err += std::abs(cs.weight[m]) * eps_ray;
    }

    if (!env.zero_temperature()) {
        const double bOmega = env.beta * Omega;
        for (int k = 1;; ++k) {
            const double series_bound =
                2.0 * weight_abs * flat0 * std::exp(-k * bOmega) / -std::expm1(-bOmega);
            if (series_bound * prefactor <= eps_tail || k > 100000) {
                tail_err += series_bound;
                break;
            }
            const double kappa = k * env.beta;
            const auto Tflat = deco_detail::tail_component(sd.omega_d, sd.gamma, Omega,
                                                           0.0, kappa, eps_ray);
            tail += 2.0 * cs.flat * Tflat.real();
            tail_err += 2.0 * cs.flat * eps_ray;
            for (std::size_t m = 0; m < cs.diff.size(); ++m) {
                const auto T = deco_detail::tail_component(sd.omega_d, sd.gamma, Omega,
                                                           cs.diff[m] * t, kappa, eps_ray);
                tail += 2.0 * cs.weight[m] * T.real();
                tail_err += 2.0 * std::abs(cs.weight[m]) * eps_ray;
            }
        }
    }

    return {head.value + prefactor * tail, head.error + prefactor * tail_err};
}

inline double chi(const PulseSequence& seq, const SpectralDensity& sd, const Environment& env,
                  double t, const QuadratureOptions& opts = {}) {
    return chi_detail(seq, sd, env, t, opts).value;
}

// Quantum phase φ_n(t); classical noise has no phase (handled by signal()).
inline IntegralEstimate phi_detail(const PulseSequence& seq, const SpectralDensity& sd, double t,
                                   const QuadratureOptions& opts = {}) {
    if (t < 0) throw ValidationError("phi: t must be >= 0");
    if (t == 0) return {0.0, 0.0};

    const double r1 = derivative_residual<double>(seq.deltas, 1);
    const double omega_eps = 1e-12 * sd.omega_d;
    const Environment env = Environment::quantum();

    auto integrand = [&](double w) -> double {
        if (w < omega_eps) {
            return deco_detail::origin_limit(deco_detail::Kernel::phase, sd, env, t, r1);
        }
        return eval_j(sd, w) * eval_x(seq, w * t) / (2.0 * w * w);
    };

    const double head_width = std::min(sd.omega_d, std::numbers::pi / t) / 4.0;
    QuadratureOptions head_opts = opts;
    head_opts.abs_tol = 0.5 * opts.abs_tol;
    head_opts.rel_tol = 0.5 * opts.rel_tol;

    if (sd.kind == SpectralDensity::Kind::hard_cutoff) {
        const auto head = integrate(integrand, 0.0, sd.omega_d, head_opts, head_width);
        return {head.value, head.error};
    }

    const double Omega = deco_detail::tail_start(sd, env);
    const auto head = integrate(integrand, 0.0, Omega, head_opts, head_width);

    const auto ss = deco_detail::sine_spectrum(filter_terms(seq));
    double weight_abs = 0.0;
    for (double w : ss.weight) weight_abs += std::abs(w);

    const double prefactor = sd.alpha;   // J(ω)/(2ω²)·x = α·x·h(ω)
    const double eps_tail = std::max(0.5 * opts.abs_tol, 0.5 * opts.rel_tol * std::abs(head.value));
    const double eps_ray = eps_tail / (prefactor * std::max(weight_abs, 1.0) * 8.0);

    double tail = 0.0;
    double tail_err = 0.0;
    for (std::size_t a = 0; a < ss.arg.size(); ++a) {
        const auto T = deco_detail::tail_component(sd.omega_d, sd.gamma, Omega,
                                                   ss.arg[a] * t, 0.0, eps_ray);
        tail += ss.weight[a] * T.imag();
        tail_err += std::abs(ss.weight[a]) * eps_ray;
    }

    return {head.value + prefactor * tail, head.error + prefactor * tail_err};
}

inline double phi(const PulseSequence& seq, const SpectralDensity& sd, double t,
                  const QuadratureOptions& opts = {}) {
    return phi_detail(seq, sd, t, opts).value;
}

// s = cos(2φ) e^{−2χ} and the deviation 1 − s, assembled so the deviation
// stays accurate far below double rounding of 1: 1 − s = −expm1(−2χ) +
// exp(−2χ)·2sin²(φ).
inline DecoherencePoint assemble_point(double t, double chi_value, double phi_value) {
    DecoherencePoint p;
    p.t = t;
    p.chi = chi_value;
    p.phi = phi_value;
    p.s = std::cos(2.0 * phi_value) * std::exp(-2.0 * chi_value);
    const double sp = std::sin(phi_value);
    p.deviation = -std::expm1(-2.0 * chi_value) + std::exp(-2.0 * chi_value) * 2.0 * sp * sp;
    return p;
}

inline DecoherencePoint signal(const PulseSequence& seq, const SpectralDensity& sd,
                               const Environment& env, double t,
                               const QuadratureOptions& opts = {}) {
    const double c = chi(seq, sd, env, t, opts);
    const double p = env.mode == Environment::Mode::quantum ? phi(seq, sd, t, opts) : 0.0;
    return assemble_point(t, c, p);
}

// One point per grid value; points are independent of each other and of the
// evaluation order.
inline DecoherenceCurve curve(const PulseSequence& seq, const SpectralDensity& sd,
                              const Environment& env, const std::vector<double>& t_grid,
                              std::string label = {}, const QuadratureOptions& opts = {}) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0) throw ValidationError("curve: grid values must be >= 0");
        if (i > 0 && !(t_grid[i - 1] < t_grid[i])) {
            throw ValidationError("curve: grid must be strictly increasing");
        }
    }
    DecoherenceCurve out{{}, std::move(label), sd, env};
    out.points.reserve(t_grid.size());
    for (double t : t_grid) out.points.push_back(signal(seq, sd, env, t, opts));
    return out;
}

} // namespace dd
