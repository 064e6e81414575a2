#include "cylchan/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cylchan {

namespace {

constexpr double kSeriesLimit = 9.0;

// Ascending series J_n(x) = sum_k (-1)^k (x/2)^{n+2k} / (k! (n+k)!).
// Alternating-term cancellation stays below ~1e-13 relative for x <= 9.
double jn_series(int n, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    double sum = term;
    const double mx2 = -half * half;
    for (int k = 1; k < 256; ++k) {
        term *= mx2 / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum) + 1e-300) break;
    }
    return sum;
}

// Downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1} started well above
// max(n, x), normalized with J_0 + 2 sum_{k>=1} J_{2k} = 1.
double jn_miller(int n, double x) {
    const int base = static_cast<int>(std::ceil(std::max(static_cast<double>(n), x)));
    const int start = base + 30 + static_cast<int>(3.0 * std::sqrt(static_cast<double>(base)));
    std::vector<double> j(static_cast<size_t>(start) + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / x) * j[k] - j[k + 1];
        if (std::fabs(j[k - 1]) > 1e280) {
            for (int i = k - 1; i <= start + 1; ++i) j[i] *= 1e-280;
        }
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    return j[n] / norm;
}

} // namespace

double bessel_j(int n, double x) {
    if (n < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: argument must be finite");
    if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return x <= kSeriesLimit ? jn_series(n, x) : jn_miller(n, x);
}

double bessel_j_deriv(int n, double x) {
    if (n < 0) throw std::invalid_argument("bessel_j_deriv: order must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j_deriv: argument must be finite");
    if (n == 0) return -bessel_j(1, x);
    if (x == 0.0) return n == 1 ? 0.5 : 0.0;
    return bessel_j(n - 1, x) - (n / x) * bessel_j(n, x);
}

} // namespace cylchan
