#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "dd/quadrature.hpp"

using namespace dd;
using Catch::Matchers::WithinAbs;

TEST_CASE("smooth integrands", "[quadrature]") {
    const auto cube = integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK_THAT(cube.value, WithinAbs(1.0 / 3.0, 1e-15));
    CHECK(std::abs(cube.value - 1.0 / 3.0) <= std::max(cube.error, 1e-15));

    const auto sine = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK_THAT(sine.value, WithinAbs(2.0, 1e-13));
}

TEST_CASE("oscillatory integrand with initial partition", "[quadrature]") {
    QuadratureOptions opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-12;
    const auto r = integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 1.0, opts,
                             std::numbers::pi / 50.0 / 4.0);
    const double exact = std::sin(50.0) / 50.0;
    CHECK_THAT(r.value, WithinAbs(exact, 1e-13));
    CHECK(std::abs(r.value - exact) <= std::max(r.error, 1e-15));
}

TEST_CASE("peaked integrand needs refinement", "[quadrature]") {
    // Lorentzian of width 1e-3 centered off the panel grid
    const double w = 1e-3;
    const double c = 0.37;
    auto f = [&](double x) { return w / ((x - c) * (x - c) + w * w); };
    const auto r = integrate(f, 0.0, 1.0);
    const double exact = std::atan((1.0 - c) / w) + std::atan(c / w);
    CHECK_THAT(r.value, WithinAbs(exact, 1e-9));
    CHECK(std::abs(r.value - exact) <= std::max(r.error, 1e-12));
}

TEST_CASE("complex-valued integrand", "[quadrature]") {
    auto f = [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); };
    const auto r = integrate(f, 0.0, 1.0);
    CHECK_THAT(r.value.real(), WithinAbs(std::sin(1.0), 1e-14));
    CHECK_THAT(r.value.imag(), WithinAbs(1.0 - std::cos(1.0), 1e-14));
}

TEST_CASE("segment list integration", "[quadrature]") {
    const std::vector<double> breaks{0.0, 0.5, 2.0, 7.0};
    const auto r = integrate_segments([](double x) { return std::exp(-x); }, breaks);
    CHECK_THAT(r.value, WithinAbs(1.0 - std::exp(-7.0), 1e-13));

    CHECK_THROWS_AS(integrate_segments([](double x) { return x; }, std::vector<double>{1.0, 1.0}),
                    ValidationError);
}

TEST_CASE("panel budget exhaustion reported", "[quadrature]") {
    QuadratureOptions opts;
    opts.abs_tol = 1e-16;
    opts.rel_tol = 1e-16;
    opts.max_panels = 8;
    auto nasty = [](double x) { return x < std::numbers::inv_sqrt3 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, opts), NumericalError);
}
