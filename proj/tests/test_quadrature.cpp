#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cylchan/quadrature.hpp"

using namespace cylchan;

TEST_CASE("fixed rule integrates polynomials exactly") {
    // order-n Gauss-Legendre is exact through degree 2n-1
    auto poly = [](double x) { return ((3.0 * x - 1.0) * x + 2.0) * x * x * x; };
    const double exact = [] {
        // int_0^2 (3x^5 - x^4 + 2x^3) dx
        return 3.0 * 64.0 / 6.0 - 32.0 / 5.0 + 2.0 * 16.0 / 4.0;
    }();
    CHECK(gl_integrate(poly, 0.0, 2.0, 4) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive doubling reaches tight tolerance on oscillatory integrands") {
    const double val = integrate_adaptive([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0,
                                          1e-12, 1e-14);
    const double exact = (1.0 - std::cos(40.0)) / 40.0;
    CHECK(val == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("complex integrands are supported") {
    auto f = [](double x) { return std::complex<double>(std::cos(3 * x), std::sin(3 * x)); };
    const std::complex<double> val = integrate_adaptive(f, 0.0, 1.0, 1e-12, 1e-14);
    const std::complex<double> exact =
        (std::exp(std::complex<double>(0.0, 3.0)) - 1.0) / std::complex<double>(0.0, 3.0);
    CHECK(std::abs(val - exact) < 1e-11);
}

TEST_CASE("exact-zero integrals converge through the absolute floor") {
    const double val =
        integrate_adaptive([](double x) { return x; }, -1.0, 1.0, 1e-12, 1e-13);
    CHECK(std::fabs(val) < 1e-13);
}

TEST_CASE("non-smooth integrand with a tiny budget reports failure") {
    auto step = [](double x) { return x < 0.123456 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(integrate_adaptive(step, 0.0, 1.0, 1e-13, 0.0, 8, 32), QuadratureError);
}
