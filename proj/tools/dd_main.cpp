// ddsim — sequence listings, deviation sweeps, order-condition solving, and
// coefficient-recursion verification for π-pulse dephasing control.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "dd/cli.hpp"

namespace {

double parse_real_or_inf(const std::string& text, const std::string& flag) {
    if (text == "inf" || text == "Inf" || text == "INF") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw dd::ValidationError(flag + ": expected a number or \"inf\", got '" + text + "'");
    }
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream{&std::cout};

    void open(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw dd::ValidationError("cannot open output file '" + path + "'");
        stream = &file;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-sequence dephasing toolkit"};
    app.require_subcommand(1);

    // sequence
    std::string seq_spec;
    auto* cmd_sequence = app.add_subcommand("sequence", "List the pulse instants of a sequence");
    cmd_sequence->add_option("spec", seq_spec, "sequence spec, e.g. udd:10 or custom:0.1,0.5")
        ->required();

    // signal
    dd::SignalConfig signal_config;
    std::string signal_gamma = "inf";
    std::string signal_beta = "inf";
    std::string signal_mode = "quantum";
    std::string signal_out;
    bool signal_linear = false;
    auto* cmd_signal = app.add_subcommand("signal", "Deviation curves 1−s(t) as CSV");
    cmd_signal->add_option("specs", signal_config.specs, "sequence specs")->required();
    cmd_signal->add_option("--alpha", signal_config.bath.alpha, "coupling strength");
    cmd_signal->add_option("--omega-d", signal_config.bath.omega_d, "cutoff frequency");
    cmd_signal->add_option("--gamma", signal_gamma, "cutoff exponent or \"inf\"");
    cmd_signal->add_option("--beta", signal_beta, "inverse temperature or \"inf\"");
    cmd_signal->add_option("--mode", signal_mode, "quantum|classical");
    cmd_signal->add_option("--tmin", signal_config.grid.tmin, "grid start (omega_d*t)");
    cmd_signal->add_option("--tmax", signal_config.grid.tmax, "grid end (omega_d*t)");
    cmd_signal->add_option("--points", signal_config.grid.points, "grid size");
    cmd_signal->add_flag("--linear", signal_linear, "linear instead of log spacing");
    cmd_signal->add_option("--abs-tol", signal_config.quad.abs_tol, "quadrature absolute tolerance");
    cmd_signal->add_option("--rel-tol", signal_config.quad.rel_tol, "quadrature relative tolerance");
    cmd_signal->add_option("--out", signal_out, "output file (default: stdout)");

    // optimize
    int opt_n = 1;
    unsigned opt_seed = 0;
    double opt_ftol = 1e-12;
    auto* cmd_optimize = app.add_subcommand("optimize", "Solve the order conditions numerically");
    cmd_optimize->add_option("--n", opt_n, "pulse count")->required();
    cmd_optimize->add_option("--seed", opt_seed, "seed for restart perturbations");
    cmd_optimize->add_option("--ftol", opt_ftol, "residual tolerance");

    // verify
    int verify_n = 1;
    bool verify_exact = false;
    int verify_digits = -1;
    double verify_tol = 1e-10;
    auto* cmd_verify = app.add_subcommand(
        "verify", "Check the closed form against the order conditions and the coefficient recursion");
    cmd_verify->add_option("--n", verify_n, "pulse count")->required();
    cmd_verify->add_flag("--exact", verify_exact, "exact rational mode (n <= 2)");
    cmd_verify->add_option("--precision", verify_digits, "working precision in decimal digits");
    cmd_verify->add_option("--tol", verify_tol, "closed-form residual tolerance");

    // verify-general
    int vg_n = 0;
    std::string vg_spec;
    int vg_max_len = -1;
    int vg_digits = -1;
    bool vg_exact = false;
    auto* cmd_vg = app.add_subcommand("verify-general",
                                      "Coefficient-recursion vanishing report for a sequence");
    cmd_vg->add_option("--n", vg_n, "pulse count of the optimized sequence (unless --sequence)");
    cmd_vg->add_option("--sequence", vg_spec, "explicit sequence spec");
    cmd_vg->add_option("--max-len", vg_max_len, "word length bound (default: pulse count)");
    cmd_vg->add_option("--precision", vg_digits, "working precision in decimal digits");
    cmd_vg->add_flag("--exact", vg_exact, "exact rational mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return dd::exit_usage_error;
    }

    try {
        if (app.got_subcommand(cmd_sequence)) {
            return dd::run_sequence(std::cout, seq_spec);
        }
        if (app.got_subcommand(cmd_signal)) {
            signal_config.bath.gamma = parse_real_or_inf(signal_gamma, "--gamma");
            signal_config.bath.beta = parse_real_or_inf(signal_beta, "--beta");
            if (signal_mode == "quantum") {
                signal_config.bath.mode = dd::Environment::Mode::quantum;
            } else if (signal_mode == "classical") {
                signal_config.bath.mode = dd::Environment::Mode::classical;
            } else {
                throw dd::ValidationError("--mode: expected quantum or classical, got '" +
                                          signal_mode + "'");
            }
            signal_config.grid.log_spacing = !signal_linear;
            OutputTarget target;
            target.open(signal_out);
            return dd::run_signal(*target.stream, signal_config);
        }
        if (app.got_subcommand(cmd_optimize)) {
            return dd::run_optimize(std::cout, opt_n, opt_seed, opt_ftol);
        }
        if (app.got_subcommand(cmd_verify)) {
            return dd::run_verify(std::cout, verify_n, verify_exact, verify_digits, verify_tol);
        }
        if (app.got_subcommand(cmd_vg)) {
            std::string spec = vg_spec;
            if (spec.empty()) {
                if (vg_n < 1) {
                    throw dd::ValidationError("verify-general: provide --n or --sequence");
                }
                spec = "udd:" + std::to_string(vg_n);
            }
            return dd::run_verify_general(std::cout, spec, vg_max_len, vg_digits, vg_exact);
        }
    } catch (const dd::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dd::exit_usage_error;
    } catch (const dd::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dd::exit_numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dd::exit_numerical_error;
    }
    return dd::exit_usage_error;
}
