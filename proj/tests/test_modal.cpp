#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cylchan/bessel.hpp"
#include "cylchan/modal.hpp"
#include "test_helpers.hpp"

using namespace cylchan;

namespace {

EigenSystem make(int N, int M, int L, double R0 = 1.0, double Z0 = 10.0) {
    return build_eigensystem(CylinderGeometry{R0, Z0}, ModeTable{N, M, L});
}

ReleaseProfile uniform_profile() { return ReleaseProfile{}; }

ReleaseProfile point_profile(double re = 0.5) {
    ReleaseProfile p;
    p.kind = ReleaseProfile::Kind::Point;
    p.re = re;
    return p;
}

} // namespace

TEST_CASE("raised cosine: peak, half-support edge, and outside") {
    CHECK(raised_cosine(1.0, 0.3, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(raised_cosine(1.15, 0.3, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(raised_cosine(1.3, 0.3, 1.0) == 0.0);
    for (double chi = 0.5; chi < 1.5; chi += 0.01) {
        const double v = raised_cosine(chi, 0.3, 1.0);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK_THROWS(raised_cosine(0.0, -1.0, 0.0));
}

TEST_CASE("release evaluation") {
    const CylinderGeometry g{1.0, 10.0};
    CHECK(eval_release(uniform_profile(), {0.5, 0.0, 1.0}, g) == doctest::Approx(1.0));
    CHECK(eval_release(point_profile(), {0.5, 0.5 * M_PI, 1.0}, g) == doctest::Approx(1.0));
    CHECK(eval_release(uniform_profile(), {0.2, 1.0, 0.0}, g) == 0.0);
    CHECK(eval_release(point_profile(), {0.2, 1.0, 0.0}, g) == 0.0);
    // angular factor wraps across +-pi
    ReleaseProfile wrap = point_profile();
    wrap.phie = M_PI;
    CHECK(eval_release(wrap, {0.5, -M_PI + 0.01, 1.0}, g) > 0.9);
}

TEST_CASE("release mass closed forms") {
    const CylinderGeometry g{1.0, 10.0};
    CHECK(release_mass(uniform_profile(), g) == doctest::Approx(M_PI * 0.15).epsilon(1e-14));
    // point: (re r0 / 2)(phi0 / 2)(z0 / 2) cross-checked by brute quadrature
    const ReleaseProfile p = point_profile();
    const double closed = release_mass(p, g);
    const double radial = testutil::simpson(
        [&](double r) { return raised_cosine(r, p.r0, p.re) * r; }, 0.3, 0.7, 4000);
    const double angular = testutil::simpson(
        [&](double phi) { return raised_cosine(phi, p.phi0, p.phie); }, p.phie - p.phi0 / 2,
        p.phie + p.phi0 / 2, 4000);
    const double axial = testutil::simpson(
        [&](double z) { return raised_cosine(z, p.z0, p.ze); }, 0.8, 1.2, 4000);
    CHECK(closed == doctest::Approx(radial * angular * axial).epsilon(1e-10));
}

TEST_CASE("profile validation rejects supports leaving the domain") {
    const CylinderGeometry g{1.0, 10.0};
    ReleaseProfile p = uniform_profile();
    p.ze = 0.1; // support would cross z = 0
    CHECK_THROWS(p.validate(g));
    ReleaseProfile q = point_profile();
    q.re = 0.9; // r support would cross the wall
    CHECK_THROWS(q.validate(g));
}

TEST_CASE("uniform release transform: exact sparsity and frozen axial factor") {
    const auto es = make(2, 4, 6);
    const StateVector y = transform_initial(uniform_profile(), es);
    for (int mu = 0; mu < es.table.size(); ++mu) {
        const Mode md = es.table.mode(mu);
        if (md.n != 0 || md.m != 0) {
            CHECK(y[mu] == std::complex<double>(0.0, 0.0));
        }
    }
    // independent Simpson oracle for the nu = 1 axial factor
    const double axial = testutil::simpson(
        [&](double z) { return std::sin(M_PI * z / 10.0) * raised_cosine(z, 0.3, 1.0); }, 0.85,
        1.15, 20000);
    CHECK(axial == doctest::Approx(0.0463458233).epsilon(1e-7));
    const std::complex<double> e1 = y[es.table.index(0, 0, 1)];
    CHECK(e1.real() == doctest::Approx(2.0 * M_PI * 0.5 * axial).epsilon(1e-9));
    CHECK(e1.imag() == 0.0);
}

TEST_CASE("point release transform matches brute-force mode integrals") {
    const auto es = make(2, 3, 3);
    const ReleaseProfile p = point_profile();
    const StateVector y = transform_initial(p, es);
    const CylinderGeometry g = es.geom;
    for (int mu : {es.table.index(0, 0, 1), es.table.index(1, 1, 2), es.table.index(2, 2, 3)}) {
        const Mode md = es.table.mode(mu);
        const double k = es.root(md);
        const double lam = es.wavenumber(md);
        // separable brute force with Simpson panels
        const double rad = testutil::simpson(
            [&](double r) { return bessel_j(md.n, k * r) * raised_cosine(r, p.r0, p.re) * r; },
            p.re - p.r0 / 2, p.re + p.r0 / 2, 2000);
        const double axial = testutil::simpson(
            [&](double z) { return std::sin(lam * z) * raised_cosine(z, p.z0, p.ze); },
            p.ze - p.z0 / 2, p.ze + p.z0 / 2, 2000);
        const double ang_re = testutil::simpson(
            [&](double phi) {
                return raised_cosine(phi, p.phi0, p.phie) * std::cos(md.n * phi);
            },
            p.phie - p.phi0 / 2, p.phie + p.phi0 / 2, 2000);
        const double ang_im = testutil::simpson(
            [&](double phi) {
                return raised_cosine(phi, p.phi0, p.phie) * -std::sin(md.n * phi);
            },
            p.phie - p.phi0 / 2, p.phie + p.phi0 / 2, 2000);
        const std::complex<double> ref = rad * axial * std::complex<double>(ang_re, ang_im);
        CHECK(std::abs(y[mu] - ref) < 1e-9 * (1.0 + std::abs(ref)));
    }
}

TEST_CASE("transform is linear in the amplitude; reconstruction linear in the state") {
    const auto es = make(1, 2, 3);
    ReleaseProfile p = point_profile();
    const StateVector y1 = transform_initial(p, es);
    p.amplitude = 3.5;
    const StateVector y2 = transform_initial(p, es);
    for (int mu = 0; mu < es.table.size(); ++mu)
        CHECK(std::abs(y2[mu] - 3.5 * y1[mu]) <= 1e-15 * std::abs(y2[mu]) + 1e-300);

    const CylPoint x{0.4, 0.7, 1.3};
    StateVector za = StateVector::Random(es.table.size());
    StateVector zb = StateVector::Random(es.table.size());
    const double lhs = concentration_at(es, x, StateVector(2.0 * za - 0.5 * zb));
    const double rhs = 2.0 * concentration_at(es, x, za) - 0.5 * concentration_at(es, x, zb);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("source transform equals the initial-condition transform of its profile") {
    const auto es = make(1, 2, 3);
    SourceSpec s;
    s.spatial = point_profile();
    s.temporal = {1.0, 0.0, 0.0};
    const StateVector a = transform_source(s, es);
    const StateVector b = transform_initial(s.spatial, es);
    CHECK((a - b).norm() == 0.0);
}

TEST_CASE("output row: boundary zeros and the closed-form sample") {
    const auto es = make(1, 2, 2);
    const StateVector at_end = output_c1(es, {0.5, 0.3, 10.0});
    for (int mu = 0; mu < es.table.size(); ++mu) CHECK(std::abs(at_end[mu]) < 1e-12);

    const StateVector on_axis = output_c1(es, {0.0, 0.0, 5.0});
    for (int mu = 0; mu < es.table.size(); ++mu) {
        const Mode md = es.table.mode(mu);
        if (md.n >= 1) CHECK(std::abs(on_axis[mu]) == 0.0);
    }
    CHECK(on_axis[es.table.index(0, 0, 1)].real() ==
          doctest::Approx(1.0 / (5.0 * M_PI)).epsilon(1e-12));
    CHECK(on_axis[es.table.index(0, 0, 1)].real() == doctest::Approx(0.063662).epsilon(1e-4));
}

TEST_CASE("folded reconstruction equals the explicit two-sided mode sum") {
    const auto es = make(3, 2, 3);
    const ModeTable& t = es.table;
    // deterministic pseudo-random complex state
    StateVector y(t.size());
    unsigned st = 7u;
    for (int mu = 0; mu < t.size(); ++mu) {
        st = st * 1664525u + 1013904223u;
        const double a = (st >> 8) / double(1u << 24) - 0.5;
        st = st * 1664525u + 1013904223u;
        const double b = (st >> 8) / double(1u << 24) - 0.5;
        y[mu] = {a, b};
    }
    const CylPoint x{0.62, 1.1, 4.2};
    double residue = 0.0;
    const double folded = concentration_at(es, x, y, &residue);

    // explicit sum over n = -N..N from first principles:
    // J_{-n} = (-1)^n J_n and y_{-n} = (-1)^n conj(y_n)
    std::complex<double> total{0.0, 0.0};
    for (int n = -t.N; n <= t.N; ++n) {
        const int na = std::abs(n);
        const double sign = (na % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < t.M; ++m)
            for (int nu = 1; nu <= t.L; ++nu) {
                const int mu = t.index(na, m, nu);
                const double jr = bessel_j(na, es.roots[na][m] * x.r);
                const double sz = std::sin(es.wavenumbers[nu - 1] * x.z);
                const std::complex<double> phase{std::cos(n * x.phi), std::sin(n * x.phi)};
                const std::complex<double> k1 =
                    (n >= 0 ? 1.0 : sign) * jr * sz * phase;
                const std::complex<double> ymu = n >= 0 ? y[mu] : sign * std::conj(y[mu]);
                total += k1 * ymu / es.scaling[mu];
            }
    }
    CHECK(folded == doctest::Approx(total.real()).epsilon(1e-12));
    CHECK(std::fabs(total.imag()) ==
          doctest::Approx(residue).epsilon(1e-9)); // residue is the n=0 imaginary part
}

TEST_CASE("reconstruction realness for a real release") {
    const auto es = make(2, 3, 8);
    const StateVector y = transform_initial(point_profile(), es);
    double residue = 0.0;
    const double peak = concentration_at(es, {0.5, 0.5 * M_PI, 1.0}, y, &residue);
    CHECK(peak > 0.0);
    CHECK(residue <= 1e-12 * std::fabs(peak));
}

TEST_CASE("truncated reconstruction approaches the uniform profile") {
    // measured truncation level at this cut: ~5e-3 absolute on a peak-1 profile
    const auto es = make(0, 30, 200);
    const StateVector y = transform_initial(uniform_profile(), es);
    for (const CylPoint x : {CylPoint{0.0, 0.0, 1.0}, CylPoint{0.5, 1.0, 1.1},
                             CylPoint{0.9, -2.0, 0.92}}) {
        const double want = eval_release(uniform_profile(), x, es.geom);
        const double got = concentration_at(es, x, y);
        CHECK(std::fabs(got - want) < 1e-2);
    }
    // far from the support the series must stay near zero
    CHECK(std::fabs(concentration_at(es, {0.3, 0.0, 6.0}, y)) < 1e-4);

    // refinement: a coarser axial cut reconstructs strictly worse at the center
    const auto es_coarse = make(0, 30, 50);
    const StateVector y_coarse = transform_initial(uniform_profile(), es_coarse);
    const CylPoint probe{0.0, 0.0, 1.0};
    CHECK(std::fabs(concentration_at(es_coarse, probe, y_coarse) - 1.0) >
          std::fabs(concentration_at(es, probe, y) - 1.0));
}

TEST_CASE("volume integral of the state converges to the release mass") {
    const double exact = M_PI * 0.15;
    double prev_err = 1e9;
    for (int L : {30, 120, 480}) {
        const auto es = make(0, 2, L);
        const StateVector y = transform_initial(uniform_profile(), es);
        const double err = std::fabs(mass_of_state(es, y) - exact) / exact;
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 1e-5); // measured 2.3e-6 at L = 480
}

TEST_CASE("cube observer") {
    const auto es = make(0, 2, 3);
    CuboidObserver obs;
    obs.x_rx = {0.0, 0.5 * M_PI, 2.0};
    obs.edge = 0.04;
    CHECK(obs.volume() == doctest::Approx(6.4e-5).epsilon(1e-12));

    const StateVector zero = StateVector::Zero(es.table.size());
    CHECK(cube_concentration(es, obs, zero) == 0.0);

    StateVector y = StateVector::Random(es.table.size());
    CHECK(cube_concentration(es, obs, y) ==
          doctest::Approx(obs.volume() * concentration_at(es, obs.x_rx, y)).epsilon(1e-14));

    CuboidObserver bad;
    bad.x_rx = {0.999, 0.0, 2.0}; // cuboid corners would poke through the wall
    CHECK_THROWS(bad.validate(es.geom));
    CuboidObserver low;
    low.x_rx = {0.0, 0.0, 0.01};
    CHECK_THROWS(low.validate(es.geom));
}
