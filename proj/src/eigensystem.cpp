#include "cylchan/eigensystem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cylchan/bessel.hpp"

namespace cylchan {

namespace {

// Bisection on f with a bracket [lo, hi], f(lo) and f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double flo) {
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-13 * std::max(1.0, mid)) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<std::vector<double>> compute_roots(int N, int M, double R0) {
    if (N < 0 || M < 1) throw std::invalid_argument("compute_roots: need N >= 0, M >= 1");
    if (!(R0 > 0.0)) throw std::invalid_argument("compute_roots: need R0 > 0");

    std::vector<std::vector<double>> roots(N + 1);
    const double step = (M_PI / 4.0) / R0; // derivative zeros are > pi/R0 apart
    for (int n = 0; n <= N; ++n) {
        auto f = [&](double k) { return bessel_j_deriv(n, k * R0); };
        std::vector<double>& kn = roots[n];
        if (n == 0) kn.push_back(0.0); // constant radial mode
        // Ceiling from the asymptotic spacing of J_n' zeros, with margin.
        const double ceiling = ((M + 2.0) + 0.5 * n) * M_PI / R0 * 1.5 + 10.0 / R0;
        double lo = 1e-9 / R0;
        double flo = f(lo);
        while (static_cast<int>(kn.size()) < M) {
            const double hi = lo + step;
            if (hi > ceiling)
                throw std::runtime_error("compute_roots: failed to bracket root (n=" +
                                         std::to_string(n) + ", m=" +
                                         std::to_string(kn.size()) + ")");
            const double fhi = f(hi);
            if ((flo < 0.0) != (fhi < 0.0)) kn.push_back(bisect(f, lo, hi, flo));
            lo = hi;
            flo = fhi;
        }
    }
    return roots;
}

std::vector<double> compute_wavenumbers(int L, double Z0) {
    if (L < 1) throw std::invalid_argument("compute_wavenumbers: need L >= 1");
    if (!(Z0 > 0.0)) throw std::invalid_argument("compute_wavenumbers: need Z0 > 0");
    std::vector<double> lam(L);
    for (int nu = 1; nu <= L; ++nu) lam[nu - 1] = nu * M_PI / Z0;
    return lam;
}

std::vector<double> compute_eigenvalues(double D, const EigenSystem& es) {
    if (!(D >= 0.0)) throw std::invalid_argument("compute_eigenvalues: need D >= 0");
    std::vector<double> s(es.table.size());
    for (int mu = 0; mu < es.table.size(); ++mu) {
        const Mode md = es.table.mode(mu);
        const double k = es.root(md);
        const double lam = es.wavenumber(md);
        s[mu] = -D * (k * k + lam * lam);
    }
    return s;
}

double radial_norm_integral(int n, double k, double R0) {
    if (k == 0.0) return 0.5 * R0 * R0;
    const double kr = k * R0;
    const double jn = bessel_j(n, kr);
    return 0.5 * R0 * R0 * (1.0 - static_cast<double>(n) * n / (kr * kr)) * jn * jn;
}

EigenSystem build_eigensystem(const CylinderGeometry& geom, const ModeTable& table) {
    geom.validate();
    table.validate();
    EigenSystem es;
    es.geom = geom;
    es.table = table;
    es.roots = compute_roots(table.N, table.M, geom.R0);
    es.wavenumbers = compute_wavenumbers(table.L, geom.Z0);

    es.radial_norm.resize(table.N + 1);
    for (int n = 0; n <= table.N; ++n) {
        es.radial_norm[n].resize(table.M);
        for (int m = 0; m < table.M; ++m)
            es.radial_norm[n][m] = radial_norm_integral(n, es.roots[n][m], geom.R0);
    }

    const double n_phi = 2.0 * M_PI;
    const double n_z = 0.5 * geom.Z0; // lambda != 0 always (nu >= 1)
    es.scaling.resize(table.size());
    for (int mu = 0; mu < table.size(); ++mu) {
        const Mode md = table.mode(mu);
        const double nr = es.radial_norm[md.n][md.m];
        const double nmu = nr * n_phi * n_z;
        if (!(nmu > 0.0))
            throw std::runtime_error("build_eigensystem: nonpositive scaling at mode (n=" +
                                     std::to_string(md.n) + ", m=" + std::to_string(md.m) +
                                     ", nu=" + std::to_string(md.nu) + ")");
        es.scaling[mu] = nmu;
    }
    return es;
}

namespace {

void check_inside(const EigenSystem& es, const CylPoint& x, const char* who) {
    if (!es.geom.contains(x))
        throw std::invalid_argument(std::string(who) + ": point outside the cylinder");
}

std::complex<double> phase(int n, double phi) {
    return {std::cos(n * phi), std::sin(n * phi)};
}

} // namespace

std::complex<double> eval_eigvec_K1(const EigenSystem& es, const CylPoint& x, int mu) {
    check_inside(es, x, "eval_eigvec_K1");
    const Mode md = es.table.mode(mu);
    const double k = es.root(md);
    const double lam = es.wavenumber(md);
    return bessel_j(md.n, k * x.r) * std::sin(lam * x.z) * phase(md.n, x.phi);
}

std::complex<double> eval_adjoint_K3(const EigenSystem& es, const CylPoint& x, int mu) {
    check_inside(es, x, "eval_adjoint_K3");
    const Mode md = es.table.mode(mu);
    const double k = es.root(md);
    const double lam = es.wavenumber(md);
    return lam * bessel_j(md.n, k * x.r) * std::cos(lam * x.z) * phase(md.n, x.phi);
}

std::complex<double> eval_adjoint_K4(const EigenSystem& es, const CylPoint& x, int mu) {
    check_inside(es, x, "eval_adjoint_K4");
    const Mode md = es.table.mode(mu);
    const double k = es.root(md);
    const double lam = es.wavenumber(md);
    return bessel_j(md.n, k * x.r) * std::sin(lam * x.z) * phase(md.n, x.phi);
}

} // namespace cylchan
