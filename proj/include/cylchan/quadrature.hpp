#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cylchan {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule lookup; rules are computed once per order.
const GaussLegendreRule& gauss_legendre(int order);

/// Fixed-order integral of f over [a, b]. The value type follows f and may be
/// double or complex<double>.
template <class F>
auto gl_integrate(F&& f, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    using T = decltype(f(mid));
    T sum{};
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + hw * rule.nodes[i]);
    return T(hw * sum);
}

struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// Node-doubling integration: the order is doubled until two successive
/// results agree to rel_tol relative to the result magnitude, or to abs_tol
/// absolutely. abs_tol should be rel_tol times a characteristic scale of the
/// problem so that integrals which are exactly zero (orthogonality) converge.
/// Throws QuadratureError when max_order is reached first.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                        int start_order = 16, int max_order = 16384,
                        const char* context = "integral") {
    using T = decltype(f(0.5 * (a + b)));
    if (a == b) return T{};
    T prev = gl_integrate(f, a, b, start_order);
    double scale = std::abs(prev);
    for (int order = 2 * start_order; order <= max_order; order *= 2) {
        T cur = gl_integrate(f, a, b, order);
        scale = std::max(scale, std::abs(cur));
        if (std::abs(cur - prev) <= rel_tol * scale + abs_tol) return cur;
        prev = cur;
    }
    throw QuadratureError(std::string("quadrature did not converge for ") + context);
}

} // namespace cylchan
