#include "cylchan/flow_coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cylchan/bessel.hpp"
#include "cylchan/quadrature.hpp"

namespace cylchan {

double axial_coupling(int nu, int nup, double Z0) {
    if (nu < 1 || nup < 1) throw std::invalid_argument("axial_coupling: indices must be >= 1");
    if (nu == nup || (nu + nup) % 2 == 0) return 0.0;
    return (Z0 / M_PI) * 2.0 * nu /
           (static_cast<double>(nu) * nu - static_cast<double>(nup) * nup);
}

namespace {

// Axial factor of both feedback matrices: W(nup, nu) = lambda_nup * I(nu, nup).
Eigen::MatrixXd axial_factor(const EigenSystem& es) {
    const int L = es.table.L;
    const double Z0 = es.geom.Z0;
    Eigen::MatrixXd w(L, L);
    for (int nup = 1; nup <= L; ++nup)
        for (int nu = 1; nu <= L; ++nu)
            w(nup - 1, nu - 1) = es.wavenumbers[nup - 1] * axial_coupling(nu, nup, Z0);
    return w;
}

} // namespace

BlockDiagMatrix build_K_uni(const EigenSystem& es) {
    const ModeTable& t = es.table;
    const Eigen::MatrixXd w = axial_factor(es);
    const double nz = 0.5 * es.geom.Z0;

    BlockDiagMatrix k;
    k.blocks.resize(t.block_count());
    for (int n = 0; n <= t.N; ++n) {
        Eigen::MatrixXd& blk = k.blocks[n];
        blk.setZero(t.block_size(), t.block_size());
        // Radial orthogonality leaves m' == m; the norm cancels against N_mu,
        // leaving the axial factor over N_z.
        for (int m = 0; m < t.M; ++m)
            blk.block(m * t.L, m * t.L, t.L, t.L) = w / nz;
    }
    return k;
}

BlockDiagMatrix build_K_par(const EigenSystem& es, const RadialQuadratureConfig& cfg) {
    const ModeTable& t = es.table;
    const Eigen::MatrixXd w = axial_factor(es);
    const double R0 = es.geom.R0;
    const double nz = 0.5 * es.geom.Z0;
    const double r3_scale = 0.25 * R0 * R0 * R0 * R0;

    BlockDiagMatrix k;
    k.blocks.resize(t.block_count());
    std::string error; // exceptions may not cross the parallel region
#pragma omp parallel for schedule(dynamic)
    for (int n = 0; n <= t.N; ++n) {
        try {
            // r^3-weighted radial overlaps, symmetric in (m', m).
            Eigen::MatrixXd rad(t.M, t.M);
            for (int mp = 0; mp < t.M; ++mp) {
                for (int m = mp; m < t.M; ++m) {
                    const double kp = es.roots[n][mp];
                    const double km = es.roots[n][m];
                    double val;
                    try {
                        val = integrate_adaptive(
                            [&](double r) {
                                return bessel_j(n, kp * r) * bessel_j(n, km * r) * r * r * r;
                            },
                            0.0, R0, cfg.rel_tol, cfg.rel_tol * r3_scale,
                            cfg.start_order_for(t.M), cfg.max_order, "parabolic radial overlap");
                    } catch (const QuadratureError&) {
                        throw QuadratureError(
                            "parabolic radial overlap did not converge at (n=" +
                            std::to_string(n) + ", m'=" + std::to_string(mp) + ", m=" +
                            std::to_string(m) + ")");
                    }
                    rad(mp, m) = val;
                    rad(m, mp) = val;
                }
            }
            Eigen::MatrixXd& blk = k.blocks[n];
            blk.resize(t.block_size(), t.block_size());
            for (int mp = 0; mp < t.M; ++mp)
                for (int m = 0; m < t.M; ++m)
                    blk.block(mp * t.L, m * t.L, t.L, t.L) =
                        (rad(mp, m) / (es.radial_norm[n][m] * nz)) * w;
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw QuadratureError(error);
    return k;
}

ClosedLoopMatrix assemble_A_c(const EigenSystem& es, double D, const BlockDiagMatrix& k_uni,
                              const BlockDiagMatrix& k_par, double v0) {
    const ModeTable& t = es.table;
    if (k_uni.block_count() != t.block_count() || k_par.block_count() != t.block_count())
        throw std::invalid_argument("assemble_A_c: block count mismatch");
    const std::vector<double> s = compute_eigenvalues(D, es);
    const double inv_r02 = 1.0 / (es.geom.R0 * es.geom.R0);

    ClosedLoopMatrix ac;
    ac.D = D;
    ac.v0 = v0;
    ac.geom = es.geom;
    ac.table = t;
    ac.blocks.resize(t.block_count());
    const int ml = t.block_size();
    for (int n = 0; n <= t.N; ++n) {
        Eigen::MatrixXd& blk = ac.blocks[n];
        if (v0 == 0.0) {
            blk.setZero(ml, ml);
        } else {
            blk = v0 * (k_uni.blocks[n] - inv_r02 * k_par.blocks[n]);
        }
        for (int i = 0; i < ml; ++i) blk(i, i) += s[n * ml + i];
    }
    return ac;
}

} // namespace cylchan
