// bath.hpp — bath spectral densities, the thermal occupation factor, and the
// classical power-spectrum correspondence.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dd/errors.hpp"

namespace dd {

// Ohmic spectral density with either a hard ultraviolet cutoff,
//   J(ω) = 2αω          for ω < ω_D,  0 otherwise,
// or a power-law cutoff of hardness γ,
//   J(ω) = 2αω / (1 + (ω/ω_D)^γ).
struct SpectralDensity {
    enum class Kind { hard_cutoff, power_law };

    Kind kind{Kind::hard_cutoff};
    double alpha{0.25};
    double omega_d{1.0};
    double gamma{0.0};   // power_law only

    static SpectralDensity hard(double alpha, double omega_d) {
        if (!(alpha > 0)) throw ValidationError("SpectralDensity: alpha must be > 0");
        if (!(omega_d > 0)) throw ValidationError("SpectralDensity: omega_d must be > 0");
        return {Kind::hard_cutoff, alpha, omega_d, 0.0};
    }

    static SpectralDensity power_law(double alpha, double omega_d, double gamma) {
        if (!(alpha > 0)) throw ValidationError("SpectralDensity: alpha must be > 0");
        if (!(omega_d > 0)) throw ValidationError("SpectralDensity: omega_d must be > 0");
        if (!(gamma > 0)) throw ValidationError("SpectralDensity: gamma must be > 0");
        if (std::isinf(gamma)) return hard(alpha, omega_d);
        return {Kind::power_law, alpha, omega_d, gamma};
    }
};

// Inverse temperature β ∈ (0, ∞] (∞ means zero temperature) plus the choice
// between the quantum bath and the equivalent classical Gaussian noise.
struct Environment {
    enum class Mode { quantum, classical };

    double beta{std::numeric_limits<double>::infinity()};
    Mode mode{Mode::quantum};

    static Environment quantum(double beta = std::numeric_limits<double>::infinity()) {
        if (!(beta > 0)) throw ValidationError("Environment: beta must be > 0 (inf allowed)");
        return {beta, Mode::quantum};
    }
    static Environment classical(double beta = std::numeric_limits<double>::infinity()) {
        if (!(beta > 0)) throw ValidationError("Environment: beta must be > 0 (inf allowed)");
        return {beta, Mode::classical};
    }

    bool zero_temperature() const { return std::isinf(beta); }
};

inline double eval_j(const SpectralDensity& sd, double omega) {
    if (omega < 0) throw ValidationError("eval_j: omega must be >= 0");
    if (sd.kind == SpectralDensity::Kind::hard_cutoff) {
        return omega < sd.omega_d ? 2.0 * sd.alpha * omega : 0.0;
    }
    return 2.0 * sd.alpha * omega / (1.0 + std::pow(omega / sd.omega_d, sd.gamma));
}

// coth(βω/2); exactly 1 at zero temperature.  Small arguments use the Laurent
// form 2/(βω) + βω/6 to avoid overflow, large ones saturate at 1.
inline double thermal_factor(const Environment& env, double omega) {
    if (!(omega > 0)) throw ValidationError("thermal_factor: omega must be > 0");
    if (env.zero_temperature()) return 1.0;
    const double x = 0.5 * env.beta * omega;
    if (x < 1e-8) return 1.0 / x + x / 3.0;
    if (x > 20.0) return 1.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

// Classical power spectrum reproducing the quantum suppression exponent:
//   p(ω) = (π/4) J(ω) coth(βω/2).
inline double power_spectrum_from_quantum(const SpectralDensity& sd, const Environment& env,
                                          double omega) {
    return 0.25 * std::numbers::pi * eval_j(sd, omega) * thermal_factor(env, omega);
}

} // namespace dd
