#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstring>

#include "cylchan/bessel.hpp"
#include "cylchan/flow_coupling.hpp"
#include "cylchan/quadrature.hpp"
#include "test_helpers.hpp"

using namespace cylchan;

namespace {

EigenSystem make(int N, int M, int L, double R0 = 1.0, double Z0 = 10.0) {
    return build_eigensystem(CylinderGeometry{R0, Z0}, ModeTable{N, M, L});
}

// Brute-force feedback entries from the defining volume integral, assembled
// from per-axis quadratures (radial weight r^{1+extra_r}).
Eigen::MatrixXd brute_block(const EigenSystem& es, int n, int extra_r) {
    const ModeTable& t = es.table;
    const int ml = t.block_size();
    Eigen::MatrixXd blk(ml, ml);
    for (int mp = 0; mp < t.M; ++mp)
        for (int nup = 1; nup <= t.L; ++nup)
            for (int m = 0; m < t.M; ++m)
                for (int nu = 1; nu <= t.L; ++nu) {
                    const double kp = es.roots[n][mp];
                    const double km = es.roots[n][m];
                    const double lp = es.wavenumbers[nup - 1];
                    const double lm = es.wavenumbers[nu - 1];
                    const double rad = integrate_adaptive(
                        [&](double r) {
                            double w = bessel_j(n, kp * r) * bessel_j(n, km * r) * r;
                            for (int e = 0; e < extra_r; ++e) w *= r;
                            return w;
                        },
                        0.0, es.geom.R0, 1e-12, 1e-14);
                    const double ax = integrate_adaptive(
                        [&](double z) { return std::cos(lp * z) * std::sin(lm * z); }, 0.0,
                        es.geom.Z0, 1e-12, 1e-14);
                    const int mu = m * t.L + (nu - 1);
                    const int mup = mp * t.L + (nup - 1);
                    blk(mup, mu) =
                        2.0 * M_PI * lp * rad * ax / es.scaling[t.index(n, m, nu)];
                }
    return blk;
}

} // namespace

TEST_CASE("axial coupling closed form") {
    CHECK(axial_coupling(3, 3, 10.0) == 0.0);
    CHECK(axial_coupling(2, 4, 10.0) == 0.0); // even sum
    CHECK(axial_coupling(1, 2, 10.0) == doctest::Approx(-20.0 / (3.0 * M_PI)).epsilon(1e-12));
    CHECK(axial_coupling(1, 2, 10.0) == doctest::Approx(-2.1221).epsilon(1e-4));
    CHECK_THROWS(axial_coupling(0, 1, 10.0));

    // quadrature oracle over a grid of index pairs
    for (int nu = 1; nu <= 5; ++nu)
        for (int nup = 1; nup <= 5; ++nup) {
            const double Z0 = 7.3;
            const double ref = testutil::simpson(
                [&](double z) {
                    return std::cos(nup * M_PI / Z0 * z) * std::sin(nu * M_PI / Z0 * z);
                },
                0.0, Z0, 20000);
            CHECK(axial_coupling(nu, nup, Z0) == doctest::Approx(ref).epsilon(1e-9));
        }
}

TEST_CASE("uniform feedback: exact sparsity pattern") {
    const auto es = make(1, 3, 4);
    const BlockDiagMatrix k = build_K_uni(es);
    const ModeTable& t = es.table;
    for (int n = 0; n <= t.N; ++n) {
        for (int mp = 0; mp < t.M; ++mp)
            for (int nup = 1; nup <= t.L; ++nup)
                for (int m = 0; m < t.M; ++m)
                    for (int nu = 1; nu <= t.L; ++nu) {
                        const double v = k.blocks[n](mp * t.L + nup - 1, m * t.L + nu - 1);
                        if (mp != m || (nu + nup) % 2 == 0 || nu == nup) {
                            CHECK(v == 0.0);
                        } else {
                            CHECK(v != 0.0);
                        }
                    }
    }
}

TEST_CASE("uniform feedback matches the volume-integral quadrature (small table)") {
    const auto es = make(1, 2, 4);
    const BlockDiagMatrix k = build_K_uni(es);
    for (int n = 0; n <= 1; ++n) {
        const Eigen::MatrixXd ref = brute_block(es, n, 0);
        CHECK((k.blocks[n] - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("parabolic feedback matches the volume-integral quadrature (small table)") {
    const auto es = make(1, 2, 4);
    const BlockDiagMatrix k = build_K_par(es);
    for (int n = 0; n <= 1; ++n) {
        const Eigen::MatrixXd ref = brute_block(es, n, 2);
        CHECK((k.blocks[n] - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("parabolic radial factor for the constant modes is R0^4/4") {
    const auto es = make(0, 2, 2);
    const BlockDiagMatrix k = build_K_par(es);
    // entry ((0,0,nu'),(0,0,nu)) = (r^3 integral) / (N_r N_z) * lambda' * I(nu,nu')
    const double expect = 0.25 / (0.5 * 5.0) * es.wavenumbers[1] * axial_coupling(1, 2, 10.0);
    CHECK(k.blocks[0](1, 0) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("parabolic quadrature agrees with an independent high-order rule") {
    const auto es = make(2, 3, 2);
    const BlockDiagMatrix k = build_K_par(es);
    const ModeTable& t = es.table;
    for (int n = 0; n <= 2; ++n)
        for (int mp = 0; mp < t.M; ++mp)
            for (int m = 0; m < t.M; ++m) {
                const double fixed_rule = gl_integrate(
                    [&](double r) {
                        return bessel_j(n, es.roots[n][mp] * r) *
                               bessel_j(n, es.roots[n][m] * r) * r * r * r;
                    },
                    0.0, 1.0, 2048);
                // recover the radial factor from an entry with nonzero axial part
                const double w = es.wavenumbers[1] * axial_coupling(1, 2, 10.0);
                const double entry = k.blocks[n](mp * t.L + 1, m * t.L + 0);
                const double rad = entry * es.scaling[t.index(n, m, 1)] / (2.0 * M_PI * w);
                CHECK(rad == doctest::Approx(fixed_rule).epsilon(1e-8));
            }
}

TEST_CASE("feedback matrices are purely geometric and bit-reproducible") {
    const auto es = make(1, 3, 3);
    const BlockDiagMatrix a = build_K_par(es);
    const BlockDiagMatrix b = build_K_par(es);
    for (int n = 0; n <= 1; ++n)
        CHECK(std::memcmp(a.blocks[n].data(), b.blocks[n].data(),
                          sizeof(double) * a.blocks[n].size()) == 0);
}

TEST_CASE("closed-loop assembly: zero flow is exactly the eigenvalue diagonal") {
    const auto es = make(1, 2, 3);
    const auto ku = build_K_uni(es);
    const auto kp = build_K_par(es);
    const ClosedLoopMatrix ac = assemble_A_c(es, 2.5, ku, kp, 0.0);
    const auto s = compute_eigenvalues(2.5, es);
    const int ml = es.table.block_size();
    for (int n = 0; n <= 1; ++n)
        for (int i = 0; i < ml; ++i)
            for (int j = 0; j < ml; ++j)
                CHECK(ac.blocks[n](i, j) == (i == j ? s[n * ml + i] : 0.0));
}

TEST_CASE("closed-loop assembly is linear in the flow speed") {
    const auto es = make(0, 2, 4);
    const auto ku = build_K_uni(es);
    const auto kp = build_K_par(es);
    const double v0 = 50.0;
    const ClosedLoopMatrix a1 = assemble_A_c(es, 2.5, ku, kp, v0);
    const ClosedLoopMatrix a2 = assemble_A_c(es, 2.5, ku, kp, 2.0 * v0);
    const Eigen::MatrixXd fb = v0 * (ku.blocks[0] - kp.blocks[0]); // R0 = 1
    const Eigen::MatrixXd diff = a2.blocks[0] - a1.blocks[0];
    const int ml = es.table.block_size();
    for (int i = 0; i < ml; ++i)
        for (int j = 0; j < ml; ++j) {
            if (i == j) {
                CHECK(diff(i, j) ==
                      doctest::Approx(fb(i, j)).epsilon(1e-13).scale(std::fabs(a1.blocks[0](i, j)) + 1.0));
            } else {
                CHECK(diff(i, j) == fb(i, j)); // off-diagonal entries are exact
            }
        }
    // canonical scaling: the feedback term at v0 = 50 is 50 (K_uni - K_par)
    const ClosedLoopMatrix a0 = assemble_A_c(es, 2.5, ku, kp, 0.0);
    const Eigen::MatrixXd fb50 = a1.blocks[0] - a0.blocks[0];
    CHECK((fb50 - fb).cwiseAbs().maxCoeff() < 1e-12 * fb.cwiseAbs().maxCoeff() + 1e-13);
}

TEST_CASE("closed-loop spectra stay in the left half plane for the standard duct") {
    const auto es = make(2, 5, 8);
    const auto ku = build_K_uni(es);
    const auto kp = build_K_par(es);
    for (double D : {2.5e-2, 2.5, 50.0}) {
        const ClosedLoopMatrix ac = assemble_A_c(es, D, ku, kp, 50.0);
        for (const auto& blk : ac.blocks) {
            Eigen::EigenSolver<Eigen::MatrixXd> eig(blk, false);
            const double scale = 1.0 + blk.cwiseAbs().rowwise().sum().maxCoeff();
            CHECK(eig.eigenvalues().real().maxCoeff() <= 1e-8 * scale);
        }
    }
}
