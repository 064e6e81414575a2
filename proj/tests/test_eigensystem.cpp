#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cylchan/bessel.hpp"
#include "cylchan/eigensystem.hpp"
#include "cylchan/quadrature.hpp"
#include "test_helpers.hpp"

using namespace cylchan;

namespace {

EigenSystem make(int N, int M, int L, double R0 = 1.0, double Z0 = 10.0) {
    return build_eigensystem(CylinderGeometry{R0, Z0}, ModeTable{N, M, L});
}

} // namespace

TEST_CASE("roots: zero root kept for order 0, first positive roots match") {
    const auto r = compute_roots(0, 2, 1.0);
    REQUIRE(r[0].size() == 2);
    CHECK(r[0][0] == 0.0);
    CHECK(r[0][1] == doctest::Approx(3.8317059702075123).epsilon(1e-12));

    const auto r1 = compute_roots(1, 1, 1.0);
    CHECK(r1[1][0] == doctest::Approx(1.8411837813406593).epsilon(1e-12));

    const auto r2 = compute_roots(0, 1, 2.0);
    CHECK(r2[0][0] == 0.0);
}

TEST_CASE("roots scale inversely with the radius") {
    const auto r = compute_roots(0, 3, 2.5);
    CHECK(r[0][1] == doctest::Approx(3.8317059702075123 / 2.5).epsilon(1e-12));
    CHECK(r[0][2] == doctest::Approx(7.0155866698156188 / 2.5).epsilon(1e-12));
}

TEST_CASE("Neumann residual below 1e-10 for all stored positive roots") {
    for (double R0 : {1.0, 2.7}) {
        const auto es = make(3, 6, 2, R0);
        for (int n = 0; n <= 3; ++n)
            for (double k : es.roots[n])
                if (k > 0.0) CHECK(std::fabs(bessel_j_deriv(n, k * R0)) < 1e-10);
    }
}

TEST_CASE("roots are strictly increasing and separated by more than 1/R0") {
    for (double R0 : {1.0, 3.0}) {
        const auto es = make(2, 8, 1, R0);
        for (int n = 0; n <= 2; ++n)
            for (size_t m = 1; m < es.roots[n].size(); ++m)
                CHECK(es.roots[n][m] - es.roots[n][m - 1] > 1.0 / R0);
    }
}

TEST_CASE("wavenumbers are the axial sine frequencies, nu starting at 1") {
    const auto lam = compute_wavenumbers(3, 10.0);
    CHECK(lam[0] == doctest::Approx(M_PI / 10.0).epsilon(1e-15));
    CHECK(lam[1] == doctest::Approx(2.0 * M_PI / 10.0).epsilon(1e-15));
    CHECK(lam[2] == doctest::Approx(3.0 * M_PI / 10.0).epsilon(1e-15));
    CHECK(compute_wavenumbers(1, M_PI)[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eigenvalues follow -D (k^2 + lambda^2)") {
    const auto es = make(0, 2, 1);
    const auto s = compute_eigenvalues(2.5e-2, es);
    CHECK(s[es.table.index(0, 0, 1)] ==
          doctest::Approx(-2.5e-2 * std::pow(M_PI / 10.0, 2)).epsilon(1e-12));
    CHECK(s[es.table.index(0, 0, 1)] == doctest::Approx(-2.4674e-3).epsilon(1e-4));

    const auto s1 = compute_eigenvalues(1.0, es);
    CHECK(s1[es.table.index(0, 1, 1)] == doctest::Approx(-14.780667).epsilon(1e-6));

    const auto s0 = compute_eigenvalues(0.0, es);
    for (double v : s0) CHECK(v == 0.0);

    for (double v : s) CHECK(v <= 0.0);
}

TEST_CASE("scaling factors separate into radial, angular, and axial parts") {
    const auto es = make(0, 2, 2);
    // N_r = R0^2/2 at k = 0, N_phi = 2 pi, N_z = Z0/2
    CHECK(es.radial_norm[0][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(es.scaling[es.table.index(0, 0, 1)] ==
          doctest::Approx(0.5 * 2.0 * M_PI * 5.0).epsilon(1e-14));

    const auto es2 = make(1, 2, 1, 2.0, 8.0);
    CHECK(es2.radial_norm[0][0] == doctest::Approx(2.0).epsilon(1e-15)); // R0^2/2
    for (double nmu : es2.scaling) CHECK(nmu > 0.0);
}

TEST_CASE("radial norm closed form matches quadrature for positive roots") {
    for (double R0 : {1.0, 1.8}) {
        const auto es = make(2, 4, 1, R0);
        for (int n = 0; n <= 2; ++n) {
            for (int m = 0; m < 4; ++m) {
                const double k = es.roots[n][m];
                const double ref = integrate_adaptive(
                    [&](double r) {
                        const double j = bessel_j(n, k * r);
                        return j * j * r;
                    },
                    0.0, R0, 1e-12, 1e-14);
                CHECK(es.radial_norm[n][m] == doctest::Approx(ref).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("eigenfunction entries: boundary values and closed-form samples") {
    const auto es = make(1, 2, 2);
    // K1 vanishes on the axial ends
    for (int mu = 0; mu < es.table.size(); ++mu) {
        CHECK(std::abs(eval_eigvec_K1(es, {0.3, 1.0, 0.0}, mu)) < 1e-12);
        CHECK(std::abs(eval_eigvec_K1(es, {0.3, 1.0, 10.0}, mu)) < 1e-12);
    }
    // K3t at z = 0 for the constant radial mode equals lambda_nu
    for (int nu = 1; nu <= 2; ++nu) {
        const auto v = eval_adjoint_K3(es, {0.0, 0.0, 0.0}, es.table.index(0, 0, nu));
        CHECK(v.real() == doctest::Approx(es.wavenumbers[nu - 1]).epsilon(1e-14));
        CHECK(v.imag() == 0.0);
    }
    // sample with the first positive root at the wall
    const auto v = eval_eigvec_K1(es, {1.0, 0.0, 5.0}, es.table.index(0, 1, 1));
    CHECK(v.real() == doctest::Approx(-0.402759395703).epsilon(1e-10));
    // K4t has the same first-row structure as K1
    const auto a = eval_adjoint_K4(es, {0.6, 0.7, 3.3}, es.table.index(1, 1, 2));
    const auto b = eval_eigvec_K1(es, {0.6, 0.7, 3.3}, es.table.index(1, 1, 2));
    CHECK(a == b);
}

TEST_CASE("points outside the cylinder are rejected") {
    const auto es = make(0, 1, 1);
    CHECK_THROWS(eval_eigvec_K1(es, {1.5, 0.0, 5.0}, 0));
    CHECK_THROWS(eval_adjoint_K3(es, {0.5, 0.0, -0.1}, 0));
    CHECK_THROWS(eval_adjoint_K4(es, {0.5, 0.0, 10.4}, 0));
}

TEST_CASE("bi-orthogonality: quadrature inner products reproduce the scalings") {
    for (double R0 : {1.0, 1.7}) {
        const double Z0 = R0 == 1.0 ? 10.0 : 6.0;
        const auto es = make(2, 3, 4, R0, Z0);
        const ModeTable& t = es.table;

        // per-axis quadrature factors, independent of the closed forms
        auto radial = [&](int n, double ka, double kb) {
            return integrate_adaptive(
                [&](double r) { return bessel_j(n, ka * r) * bessel_j(n, kb * r) * r; }, 0.0, R0,
                1e-12, 1e-13);
        };
        auto axial = [&](double la, double lb) {
            return integrate_adaptive(
                [&](double z) { return std::sin(la * z) * std::sin(lb * z); }, 0.0, Z0, 1e-12,
                1e-13);
        };

        for (int mu = 0; mu < t.size(); ++mu) {
            const Mode a = t.mode(mu);
            for (int mup = 0; mup < t.size(); ++mup) {
                const Mode b = t.mode(mup);
                const std::complex<double> ang = testutil::angular_overlap_oracle(a.n, b.n);
                const double ip = std::abs(ang) < 1e-9
                                      ? 0.0
                                      : ang.real() * radial(a.n, es.root(a), es.root(b)) *
                                            axial(es.wavenumber(a), es.wavenumber(b));
                if (mu == mup) {
                    CHECK(ip == doctest::Approx(es.scaling[mu]).epsilon(1e-8));
                } else {
                    CHECK(std::fabs(ip) < 1e-8 * es.scaling[mu]);
                }
            }
        }
    }
}
