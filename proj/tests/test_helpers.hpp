#pragma once

// Shared oracles for the test suite. Everything here is an independent
// evaluation path: integral representations and brute-force quadrature, never
// the closed forms under test.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace testutil {

// J_n(x) from the integral representation (1/pi) int_0^pi cos(n t - x sin t) dt.
// The integrand extends to an even 2*pi-periodic analytic function, so the
// trapezoidal rule converges geometrically in the node count.
inline double bessel_oracle(int n, double x) {
    const int nodes = 64 + 2 * static_cast<int>(std::ceil(n + x));
    const double h = M_PI / nodes;
    double sum = 0.5 * (std::cos(0.0) + std::cos(n * M_PI));
    for (int i = 1; i < nodes; ++i) {
        const double t = i * h;
        sum += std::cos(n * t - x * std::sin(t));
    }
    return sum * h / M_PI;
}

inline double bessel_deriv_oracle(int n, double x) {
    if (n == 0) return -bessel_oracle(1, x);
    if (x == 0.0) return n == 1 ? 0.5 : 0.0;
    return 0.5 * (bessel_oracle(n - 1, x) - bessel_oracle(n + 1, x));
}

// Composite Simpson on a callable; panels must be even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Angular overlap int_{-pi}^{pi} e^{i(n - np) phi} dphi by plain trapezoid
// (exact for integer frequencies up to rounding).
inline std::complex<double> angular_overlap_oracle(int n, int np) {
    const int nodes = 512;
    const double h = 2.0 * M_PI / nodes;
    std::complex<double> sum{0.0, 0.0};
    for (int i = 0; i < nodes; ++i) {
        const double phi = -M_PI + i * h;
        sum += std::exp(std::complex<double>(0.0, (n - np) * phi));
    }
    return sum * h;
}

} // namespace testutil
