#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cylchan/bessel.hpp"
#include "test_helpers.hpp"

using cylchan::bessel_j;
using cylchan::bessel_j_deriv;

TEST_CASE("values at zero argument") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(7, 0.0) == 0.0);
    CHECK(bessel_j_deriv(1, 0.0) == 0.5);
    CHECK(bessel_j_deriv(3, 0.0) == 0.0);
}

TEST_CASE("derivative vanishes at a Neumann root") {
    CHECK(std::fabs(bessel_j_deriv(0, 3.8317059702)) < 1e-9);
}

TEST_CASE("agrees with the integral-representation oracle over the working range") {
    const int orders[] = {0, 1, 2, 3, 5, 8, 13, 20, 25};
    for (int n : orders) {
        for (double x = 0.05; x <= 200.0; x *= 1.17) {
            const double ref = testutil::bessel_oracle(n, x);
            const double got = bessel_j(n, x);
            // relative 1e-12 with an absolute floor at the oracle's own
            // rounding noise (matters only next to zeros of J)
            CHECK(std::fabs(got - ref) <= 1e-12 * std::fabs(ref) + 5e-16);
        }
    }
}

TEST_CASE("derivative matches the centered recurrence oracle") {
    const int orders[] = {0, 1, 4, 9, 17};
    for (int n : orders) {
        for (double x : {0.3, 1.7, 6.2, 9.01, 24.5, 88.0, 151.2}) {
            const double ref = testutil::bessel_deriv_oracle(n, x);
            CHECK(std::fabs(bessel_j_deriv(n, x) - ref) <=
                  1e-12 * std::max(1.0, std::fabs(ref)));
        }
    }
}

TEST_CASE("series and recurrence branches agree at the switchover") {
    for (int n : {0, 1, 3, 8}) {
        const double below = bessel_j(n, 9.0);            // series branch
        const double above = bessel_j(n, 9.0000000001);   // recurrence branch
        CHECK(std::fabs(below - above) < 1e-10);
    }
}

TEST_CASE("rejects invalid input") {
    CHECK_THROWS(bessel_j(-1, 1.0));
    CHECK_THROWS(bessel_j(0, std::numeric_limits<double>::quiet_NaN()));
    CHECK_THROWS(bessel_j(0, std::numeric_limits<double>::infinity()));
    CHECK_THROWS(bessel_j(0, -1.0));
    CHECK_THROWS(bessel_j_deriv(-2, 1.0));
}
