#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dd/filter.hpp"
#include "dd/pulse_sequence.hpp"

using namespace dd;
using Catch::Matchers::WithinAbs;
namespace mp = boost::multiprecision;

namespace {

std::complex<double> phase(double a) { return {std::cos(a), std::sin(a)}; }

PulseSequence random_sequence(std::mt19937& rng) {
    std::uniform_int_distribution<int> pick_n(0, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = pick_n(rng);
    std::vector<double> d;
    while (static_cast<int>(d.size()) < n) {
        const double x = u(rng);
        if (x > 1e-6 && x < 1.0 - 1e-6) d.push_back(x);
    }
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return make_custom(std::move(d));
}

} // namespace

TEST_CASE("y vanishes at z=0 for every sequence", "[filter]") {
    std::mt19937 rng(7u);
    for (int trial = 0; trial < 50; ++trial) {
        const auto seq = random_sequence(rng);
        CHECK(eval_y(seq, 0.0) == std::complex<double>(0.0, 0.0));
    }
    CHECK(eval_y(no_pulse(), 0.0) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("direct sum agrees with the closed forms at spot values", "[filter]") {
    SECTION("optimized sequence n=2 at z=2pi") {
        const double z = 2.0 * std::numbers::pi;
        const auto direct = eval_y(make_udd(2), z);
        const auto closed = y_udd_closed(2, z);
        CHECK(std::abs(direct - closed) <= 1e-12);
    }
    SECTION("single-pulse periodic sequence: odd-count variant of the closed form") {
        // For odd pulse counts the periodic-sequence expression picks up
        // sin(z/2) in place of −i cos(z/2):  y = −2 e^{iz/2} sin(z/2) tan(z/(2n+2)).
        const auto seq = make_bb(1);
        for (double z : {0.3, 1.1, 2.7, 4.9, 5.7, 9.2}) {
            const std::complex<double> expected =
                -2.0 * phase(0.5 * z) * std::sin(0.5 * z) * std::tan(0.25 * z);
            CHECK(std::abs(eval_y(seq, z) - expected) <= 1e-13 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("x equals minus the imaginary part of y", "[filter]") {
    CHECK(eval_x(make_udd(3), 0.0) == 0.0);

    const auto seq = make_udd(2);
    const double x = eval_x(seq, 1.0);
    const double ref = -eval_y(seq, 1.0).imag();
    CHECK_THAT(x, WithinAbs(ref, 4.0 * std::numeric_limits<double>::epsilon()));

    // single pulse at 1/2 and z = π: (−1)·sin(π) + 2 sin(π/2) = 2
    CHECK_THAT(eval_x(make_custom({0.5}), std::numbers::pi), WithinAbs(2.0, 1e-15));

    std::mt19937 rng(11u);
    std::uniform_real_distribution<double> zdist(0.0, 60.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_sequence(rng);
        const double z = zdist(rng);
        const double scale = std::max(1.0, std::abs(eval_y(s, z).imag()));
        CHECK_THAT(eval_x(s, z), WithinAbs(-eval_y(s, z).imag(),
                                           4.0 * std::numeric_limits<double>::epsilon() * scale));
    }
}

TEST_CASE("filter evaluation bundles |y|^2", "[filter]") {
    const auto fe = evaluate_filter(make_udd(4), 2.3);
    CHECK_THAT(fe.abs2, WithinAbs(std::norm(fe.value), 4.0 * std::numeric_limits<double>::epsilon() *
                                                           std::max(1.0, fe.abs2)));
}

TEST_CASE("closed forms", "[filter]") {
    SECTION("concatenated level 2 written out") {
        for (double z : {0.4, 1.7, 3.1, 12.5, 47.0}) {
            const std::complex<double> minus_2i(0.0, -2.0);
            const std::complex<double> expected = minus_2i * minus_2i * minus_2i * phase(0.5 * z) *
                                                  std::sin(z / 8) * std::sin(z / 4) *
                                                  std::sin(z / 8);
            CHECK(std::abs(y_cdd_closed(2, z) - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
        }
    }
    SECTION("echo train n=2 vanishes at z=0") {
        CHECK(std::abs(y_cpmg_closed(2, 0.0)) == 0.0);
    }
    SECTION("optimized n=10 matches the direct sum") {
        CHECK(std::abs(y_udd_closed(10, 0.5) - eval_y(make_udd(10), 0.5)) <= 1e-12);
    }
    SECTION("unsupported parity and family are rejected") {
        CHECK_THROWS_AS(y_udd_closed(3, 1.0), ValidationError);
        CHECK_THROWS_AS(y_bb_closed(5, 1.0), ValidationError);
        CHECK_THROWS_AS(y_cpmg_closed(1, 1.0), ValidationError);
        CHECK_THROWS_AS(eval_y_closed(Family::custom, 2, 1.0), ValidationError);
    }
}

TEST_CASE("closed forms agree with the direct sum on a dense grid", "[filter][property]") {
    struct Case {
        Family family;
        int param;
        PulseSequence seq;
    };
    std::vector<Case> cases;
    cases.push_back({Family::udd, 10, make_udd(10)});
    cases.push_back({Family::bb, 10, make_bb(10)});
    cases.push_back({Family::cpmg, 10, make_cpmg(10)});
    for (int l = 0; l <= 4; ++l) cases.push_back({Family::cdd, l, make_cdd(l)});

    for (const auto& c : cases) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = 0.1 * i;
            const auto direct = eval_y(c.seq, z);
            const auto closed = eval_y_closed(c.family, c.param, z);
            const double err = std::abs(direct - closed) / std::max(1.0, std::abs(direct));
            worst = std::max(worst, err);
        }
        INFO(family_name(c.family) << " param=" << c.param);
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("magnitude bound |y| <= 2n+2", "[filter][property]") {
    std::mt19937 rng(23u);
    std::uniform_real_distribution<double> zdist(-200.0, 200.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto seq = random_sequence(rng);
        const double z = zdist(rng);
        CHECK(std::abs(eval_y(seq, z)) <= 2.0 * seq.n() + 2.0 + 1e-12);
    }
}

TEST_CASE("reflection symmetry of |y| for the optimized sequence", "[filter][property]") {
    const auto seq = make_udd(7);
    std::vector<double> reversed(seq.deltas.rbegin(), seq.deltas.rend());
    for (double& d : reversed) d = 1.0 - d;
    const auto mirrored = make_custom(std::move(reversed));
    for (double z : {0.2, 0.9, 3.3, 8.8, 21.0, 55.5}) {
        CHECK_THAT(std::abs(eval_y(seq, z)), WithinAbs(std::abs(eval_y(mirrored, z)), 1e-12));
    }
}

TEST_CASE("order-condition residuals", "[filter]") {
    CHECK_THAT(derivative_residual(make_udd(2), 1), WithinAbs(0.0, 1e-15));
    CHECK_THAT(derivative_residual(make_udd(2), 2), WithinAbs(0.0, 1e-15));
    CHECK_THAT(derivative_residual(make_bb(2), 2), WithinAbs(-1.0 / 3.0, 1e-15));

    SECTION("exact rational arithmetic") {
        using R = mp::cpp_rational;
        const std::vector<R> udd2{R(1, 4), R(3, 4)};
        CHECK(derivative_residual(udd2, 1) == 0);
        CHECK(derivative_residual(udd2, 2) == 0);
        const std::vector<R> bb2{R(1, 3), R(2, 3)};
        CHECK(derivative_residual(bb2, 2) == R(-1, 3));
    }
}

TEST_CASE("order machinery rejects bad parameters", "[filter]") {
    CHECK_THROWS_AS(derivative_residual(make_udd(2), 0), ValidationError);
    CHECK_THROWS_AS(taylor_order(make_udd(2), 0), ValidationError);
    CHECK_THROWS_AS(taylor_order(make_udd(2), 5, 0.0), ValidationError);
}

TEST_CASE("leading non-vanishing order", "[filter]") {
    for (int n = 1; n <= 14; ++n) {
        CAPTURE(n);
        CHECK(taylor_order(make_udd(n), n + 2, 1e-10) == n + 1);
    }
    CHECK(taylor_order(make_cpmg(4), 10, 1e-10) == 3);
    CHECK(taylor_order(make_bb(4), 10, 1e-10) == 1);
    for (int l = 1; l <= 4; ++l) {
        CAPTURE(l);
        CHECK(taylor_order(make_cdd(l), 12, 1e-10) == l + 1);
    }
}
