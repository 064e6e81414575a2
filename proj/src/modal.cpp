#include "cylchan/modal.hpp"

#include <cmath>

#include "cylchan/bessel.hpp"
#include "cylchan/quadrature.hpp"

namespace cylchan {

void CuboidObserver::validate(const CylinderGeometry& g) const {
    if (!(edge > 0.0)) throw std::invalid_argument("observer edge must be > 0");
    const double h = 0.5 * edge;
    const double cx = cyl_to_x(x_rx);
    const double cy = cyl_to_y(x_rx);
    const double rmax = std::hypot(std::fabs(cx) + h, std::fabs(cy) + h);
    if (rmax > g.R0 || x_rx.z - h < 0.0 || x_rx.z + h > g.Z0)
        throw std::invalid_argument("observer cuboid must lie inside the cylinder");
}

StateVector output_c1(const EigenSystem& es, const CylPoint& x) {
    const int q = es.table.size();
    StateVector c1(q);
    // Shared radial/axial factors per (n, m) and nu are cheap enough here;
    // mode count dominates only in grid reconstruction, which caches rows.
    for (int mu = 0; mu < q; ++mu)
        c1[mu] = eval_eigvec_K1(es, x, mu) / es.scaling[mu];
    return c1;
}

StateVector adjoint_c4_conj(const EigenSystem& es, const CylPoint& xi) {
    const int q = es.table.size();
    StateVector c4(q);
    for (int mu = 0; mu < q; ++mu) c4[mu] = std::conj(eval_adjoint_K4(es, xi, mu));
    return c4;
}

namespace {

// Per-axis transform factors against conj(K4t) = J_n(k r) e^{-i n phi} sin(lambda z).
struct SeparableFactors {
    // radial[n][m] = int J_n(k r) f_r(r) r dr
    std::vector<std::vector<double>> radial;
    // angular[n] = int e^{-i n phi} f_phi(phi) dphi
    std::vector<std::complex<double>> angular;
    // axial[nu-1] = int sin(lambda z) f_z(z) dz
    std::vector<double> axial;
};

SeparableFactors transform_factors(const ReleaseProfile& p, const EigenSystem& es,
                                   const TransformConfig& cfg) {
    const ModeTable& t = es.table;
    SeparableFactors f;

    f.axial.resize(t.L);
    for (int nu = 1; nu <= t.L; ++nu) {
        const double lam = es.wavenumbers[nu - 1];
        f.axial[nu - 1] = integrate_adaptive(
            [&](double z) { return std::sin(lam * z) * raised_cosine(z, p.z0, p.ze); },
            p.ze - 0.5 * p.z0, p.ze + 0.5 * p.z0, cfg.rel_tol, cfg.rel_tol * p.z0,
            cfg.start_order, cfg.max_order, "axial transform factor");
    }

    f.radial.assign(t.N + 1, std::vector<double>(t.M, 0.0));
    f.angular.assign(t.N + 1, {0.0, 0.0});

    if (p.kind == ReleaseProfile::Kind::Uniform) {
        // Cross-section constant: the angular integral vanishes for n != 0 and
        // the radial one vanishes for every positive Neumann root, exactly.
        f.angular[0] = 2.0 * M_PI;
        f.radial[0][0] = 0.5 * es.geom.R0 * es.geom.R0;
        return f;
    }

    for (int n = 0; n <= t.N; ++n) {
        for (int m = 0; m < t.M; ++m) {
            const double k = es.roots[n][m];
            f.radial[n][m] = integrate_adaptive(
                [&](double r) { return bessel_j(n, k * r) * raised_cosine(r, p.r0, p.re) * r; },
                p.re - 0.5 * p.r0, p.re + 0.5 * p.r0, cfg.rel_tol, cfg.rel_tol * p.r0,
                cfg.start_order, cfg.max_order, "radial transform factor");
        }
        f.angular[n] = integrate_adaptive(
            [&](double phi) -> std::complex<double> {
                const double w = raised_cosine(phi, p.phi0, 0.0);
                return {w * std::cos(n * (phi + p.phie)), -w * std::sin(n * (phi + p.phie))};
            },
            -0.5 * p.phi0, 0.5 * p.phi0, cfg.rel_tol, cfg.rel_tol * p.phi0, cfg.start_order,
            cfg.max_order, "angular transform factor");
    }
    return f;
}

} // namespace

StateVector transform_initial(const ReleaseProfile& p, const EigenSystem& es,
                              const TransformConfig& cfg) {
    p.validate(es.geom);
    const ModeTable& t = es.table;
    const SeparableFactors f = transform_factors(p, es, cfg);
    StateVector y(t.size());
    for (int mu = 0; mu < t.size(); ++mu) {
        const Mode md = t.mode(mu);
        y[mu] = p.amplitude * f.radial[md.n][md.m] * f.angular[md.n] * f.axial[md.nu - 1];
    }
    return y;
}

StateVector transform_source(const SourceSpec& s, const EigenSystem& es,
                             const TransformConfig& cfg) {
    return transform_initial(s.spatial, es, cfg);
}

double concentration_from_c1(const ModeTable& table, const StateVector& c1,
                             const StateVector& y, double* imag_residue) {
    if (c1.size() != y.size() || y.size() != table.size())
        throw std::invalid_argument("concentration_from_c1: dimension mismatch");
    const int ml = table.block_size();
    double value = 0.0;
    double residue = 0.0;
    for (int n = 0; n <= table.N; ++n) {
        // Plain transpose product c1^T y; the implied order -n contributes the
        // complex conjugate, so folding takes twice the real part for n >= 1.
        const std::complex<double> term =
            (c1.segment(n * ml, ml).transpose() * y.segment(n * ml, ml)).value();
        value += table.fold_weight(n) * term.real();
        if (n == 0) residue = std::fabs(term.imag());
    }
    if (imag_residue) *imag_residue = residue;
    return value;
}

double concentration_at(const EigenSystem& es, const CylPoint& x, const StateVector& y,
                        double* imag_residue) {
    return concentration_from_c1(es.table, output_c1(es, x), y, imag_residue);
}

double cube_concentration(const EigenSystem& es, const CuboidObserver& obs,
                          const StateVector& y, double* imag_residue) {
    obs.validate(es.geom);
    return obs.volume() * concentration_at(es, obs.x_rx, y, imag_residue);
}

double mass_of_state(const EigenSystem& es, const StateVector& y) {
    // int K1 dV = 0 unless n = 0 (angular), k = 0 (radial Neumann), nu odd.
    // For those modes the mode-volume over N_mu collapses to 4 / (nu pi).
    const ModeTable& t = es.table;
    double mass = 0.0;
    for (int nu = 1; nu <= t.L; nu += 2)
        mass += y[t.index(0, 0, nu)].real() * 4.0 / (nu * M_PI);
    return mass;
}

} // namespace cylchan
