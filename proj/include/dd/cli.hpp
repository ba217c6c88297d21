// cli.hpp — command implementations behind the ddsim front end.  They write
// to caller-supplied streams and return process exit status: 0 success,
// 1 verification failure, 2 usage error, 3 numerical error.

#pragma once

#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dd/bath.hpp"
#include "dd/decoherence.hpp"
#include "dd/errors.hpp"
#include "dd/filter.hpp"
#include "dd/general_bath.hpp"
#include "dd/optimizer.hpp"
#include "dd/pulse_sequence.hpp"
#include "dd/quadrature.hpp"

namespace dd {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_usage_error = 2;
inline constexpr int exit_numerical_error = 3;

struct BathConfig {
    double alpha{0.25};
    double omega_d{1.0};
    double gamma{std::numeric_limits<double>::infinity()};
    double beta{std::numeric_limits<double>::infinity()};
    Environment::Mode mode{Environment::Mode::quantum};
};

struct GridConfig {
    double tmin{1e-2};
    double tmax{1e2};
    int points{300};
    bool log_spacing{true};
};

struct SignalConfig {
    std::vector<std::string> specs;
    BathConfig bath;
    GridConfig grid;
    QuadratureOptions quad;
};

namespace cli_detail {

// Shortest decimal that round-trips the value.
inline std::string format_value(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string format_real_or_inf(double v) {
    return std::isinf(v) ? "inf" : format_value(v);
}

inline std::string format_sig15(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

inline std::vector<double> build_grid(const GridConfig& grid) {
    if (grid.points < 2) throw ValidationError("grid: points must be >= 2");
    if (!(grid.tmin < grid.tmax)) throw ValidationError("grid: tmin must be < tmax");
    if (grid.log_spacing && !(grid.tmin > 0)) {
        throw ValidationError("grid: tmin must be > 0 for log spacing");
    }
    std::vector<double> t(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        const double f = static_cast<double>(i) / (grid.points - 1);
        t[static_cast<std::size_t>(i)] =
            grid.log_spacing ? grid.tmin * std::pow(grid.tmax / grid.tmin, f)
                             : grid.tmin + f * (grid.tmax - grid.tmin);
    }
    return t;
}

inline SpectralDensity make_bath(const BathConfig& bath) {
    if (std::isinf(bath.gamma)) return SpectralDensity::hard(bath.alpha, bath.omega_d);
    return SpectralDensity::power_law(bath.alpha, bath.omega_d, bath.gamma);
}

inline Environment make_env(const BathConfig& bath) {
    return bath.mode == Environment::Mode::quantum ? Environment::quantum(bath.beta)
                                                   : Environment::classical(bath.beta);
}

inline std::string bath_comment(const BathConfig& bath) {
    std::string s = "alpha=" + format_value(bath.alpha) + " omega_d=" + format_value(bath.omega_d) +
                    " gamma=" + format_real_or_inf(bath.gamma) +
                    " beta=" + format_real_or_inf(bath.beta) + " mode=";
    s += bath.mode == Environment::Mode::quantum ? "quantum" : "classical";
    return s;
}

} // namespace cli_detail

// `sequence SPEC` — pulse count and instants at 15 significant digits.
inline int run_sequence(std::ostream& out, const std::string& spec_text) {
    const PulseSequence seq = make_sequence(spec_text);
    out << "# command=sequence spec=" << spec_text << "\n";
    out << "n=" << seq.n() << "\n";
    for (int j = 0; j < seq.n(); ++j) {
        out << (j ? " " : "") << cli_detail::format_sig15(seq.deltas[static_cast<std::size_t>(j)]);
    }
    out << "\n";
    return exit_ok;
}

// `signal SPECS…` — CSV of the deviation 1−s(t) per sequence over the grid.
inline int run_signal(std::ostream& out, const SignalConfig& config) {
    if (config.specs.empty()) throw ValidationError("signal: at least one sequence spec required");
    const SpectralDensity sd = cli_detail::make_bath(config.bath);
    const Environment env = cli_detail::make_env(config.bath);
    const std::vector<double> grid = cli_detail::build_grid(config.grid);

    std::vector<PulseSequence> sequences;
    std::string labels;
    for (const auto& spec : config.specs) {
        sequences.push_back(make_sequence(spec));
        labels += (labels.empty() ? "" : ",") + spec;
    }

    out << "# command=signal " << cli_detail::bath_comment(config.bath)
        << " tmin=" << cli_detail::format_value(config.grid.tmin)
        << " tmax=" << cli_detail::format_value(config.grid.tmax)
        << " points=" << config.grid.points
        << " spacing=" << (config.grid.log_spacing ? "log" : "linear")
        << " abs_tol=" << cli_detail::format_value(config.quad.abs_tol)
        << " rel_tol=" << cli_detail::format_value(config.quad.rel_tol)
        << " sequences=" << labels << "\n";

    out << "omega_d_t";
    for (const auto& spec : config.specs) out << ",deviation:" << spec;
    out << "\n";

    std::vector<DecoherenceCurve> curves;
    curves.reserve(sequences.size());
    for (std::size_t s = 0; s < sequences.size(); ++s) {
        curves.push_back(curve(sequences[s], sd, env, grid, config.specs[s], config.quad));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << cli_detail::format_value(grid[i]);
        for (const auto& c : curves) out << "," << cli_detail::format_value(c.points[i].deviation);
        out << "\n";
    }
    return exit_ok;
}

// `optimize --n N` — Newton solution of the order conditions and the
// element-wise difference to the closed form.
inline int run_optimize(std::ostream& out, int n, unsigned seed, double ftol) {
    SolveOptions opts;
    opts.seed = seed;
    opts.ftol = ftol;
    out << "# command=optimize n=" << n << " seed=" << seed
        << " ftol=" << cli_detail::format_value(ftol) << "\n";
    const OptimizationResult result = solve_order_conditions(n, std::nullopt, opts);
    out << "converged=" << (result.converged ? "true" : "false")
        << " iterations=" << result.iterations
        << " residual_norm=" << cli_detail::format_value(result.residual_norm) << "\n";
    if (!result.converged) {
        out << "FAIL: no convergence after " << result.iterations << " iterations and "
            << result.restarts << " restarts\n";
        return exit_numerical_error;
    }
    const PulseSequence reference = make_udd(n);
    const PulseSequence solved{result.deltas, Family::custom};
    out << "residuals:";
    for (int m = 1; m <= n; ++m) {
        out << " " << cli_detail::format_value(derivative_residual(solved, m));
    }
    out << "\n";
    double max_diff = 0.0;
    out << "j delta_j closed_form_j diff\n";
    for (int j = 0; j < n; ++j) {
        const double diff = result.deltas[static_cast<std::size_t>(j)] -
                            reference.deltas[static_cast<std::size_t>(j)];
        max_diff = std::max(max_diff, std::abs(diff));
        out << (j + 1) << " " << cli_detail::format_sig15(result.deltas[static_cast<std::size_t>(j)])
            << " " << cli_detail::format_sig15(reference.deltas[static_cast<std::size_t>(j)]) << " "
            << cli_detail::format_value(diff) << "\n";
    }
    out << "max|delta-closed_form|=" << cli_detail::format_value(max_diff) << "\n";
    return exit_ok;
}

namespace cli_detail {

inline void print_vanishing_line(std::ostream& out, const VanishingReport& report) {
    out << "general-bath: n=" << report.n << " len<=" << report.max_len;
    if (report.exact_mode) {
        out << " exact rationals: " << report.mode_note;
    } else {
        out << " precision=" << report.precision_digits
            << " odd_max_log10=" << format_value(report.odd_max_log10)
            << " even_max_log10=" << format_value(report.even_max_log10)
            << " separation=" << format_value(report.separation_orders) << " orders";
    }
    out << " -> " << (report.pass ? "PASS" : "FAIL") << "\n";
}

} // namespace cli_detail

// `verify --n N` — closed-form residual check plus general-bath vanishing.
inline int run_verify(std::ostream& out, int n, bool exact, int digits, double tol) {
    out << "# command=verify n=" << n << " exact=" << (exact ? "true" : "false")
        << " precision=" << (digits < 0 ? "auto" : std::to_string(digits))
        << " tol=" << cli_detail::format_value(tol) << "\n";
    int passed = 0;
    constexpr int total = 2;

    const ClosedFormReport cf = verify_closed_form(n, tol);
    out << "closed-form: n=" << n
        << " max_residual=" << cli_detail::format_value(cf.max_residual)
        << " tol=" << cli_detail::format_value(tol) << " -> " << (cf.pass ? "PASS" : "FAIL")
        << "\n";
    if (cf.pass) ++passed;

    const VanishingReport gb =
        exact ? vanishing_report_for(SequenceSpec{Family::udd, n, 0, {}, "udd:" + std::to_string(n)},
                                     -1, 0)
              : verify_udd_order(n, -1, digits);
    cli_detail::print_vanishing_line(out, gb);
    if (gb.pass) ++passed;

    if (passed == total) {
        out << "PASS " << passed << "/" << total << "\n";
        return exit_ok;
    }
    out << "FAIL " << (total - passed) << "/" << total << "\n";
    return exit_verification_failure;
}

// `verify-general` — vanishing report for an arbitrary sequence spec.
inline int run_verify_general(std::ostream& out, const std::string& spec_text, int max_len,
                              int digits, bool exact) {
    const SequenceSpec spec = parse_sequence_spec(spec_text);
    out << "# command=verify-general sequence=" << spec_text << " max_len=" << max_len
        << " precision=" << (exact ? 0 : digits) << "\n";
    VanishingReport report;
    if (spec.family == Family::udd && !exact) {
        report = verify_udd_order(spec.a, max_len, digits);
    } else {
        const int effective_digits = exact ? 0 : (digits < 0 ? 60 : digits);
        report = vanishing_report_for(spec, max_len, effective_digits);
    }
    cli_detail::print_vanishing_line(out, report);
    if (report.pass) {
        out << "PASS 1/1\n";
        return exit_ok;
    }
    out << "FAIL 1/1\n";
    return exit_verification_failure;
}

} // namespace dd
