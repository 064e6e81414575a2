#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cylchan/eigensystem.hpp"

namespace cylchan {

/// Block-diagonal real matrix, one dense block per azimuthal order n = 0..N.
/// Every entry coupling different orders is exactly zero (angular
/// orthogonality), so only the diagonal blocks are ever materialized.
struct BlockDiagMatrix {
    std::vector<Eigen::MatrixXd> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
};

/// Closed-form axial overlap int_0^Z0 cos(lambda_nup z) sin(lambda_nu z) dz.
/// Vanishes for nu == nup and for even nu + nup.
double axial_coupling(int nu, int nup, double Z0);

/// Feedback matrix of the uniform flow component. Fully closed form: diagonal
/// in the radial index (Neumann-root orthogonality), odd-parity coupling in
/// the axial index. Depends only on the geometry and the truncation.
BlockDiagMatrix build_K_uni(const EigenSystem& es);

struct RadialQuadratureConfig {
    double rel_tol = 1e-10;
    /// Start node count; scales with the truncation because the integrand
    /// oscillation grows with the largest radial root.
    int start_order_for(int M) const { return 4 * M + 16; }
    int max_order = 65536;
};

/// Feedback matrix of the parabolic flow correction. The r^3-weighted radial
/// overlap integrals have no closed form for general order and are evaluated
/// by node-doubling Gauss-Legendre quadrature; non-convergence is reported
/// with the offending (n, m', m).
BlockDiagMatrix build_K_par(const EigenSystem& es, const RadialQuadratureConfig& cfg = {});

/// State matrix of the flow-coupled system, block-diagonal per order.
struct ClosedLoopMatrix {
    std::vector<Eigen::MatrixXd> blocks;
    double D = 0.0;
    double v0 = 0.0;
    CylinderGeometry geom;
    ModeTable table;
};

/// A_c = diag(s_mu) + v0 (K_uni - K_par / R0^2). With v0 = 0 the result is the
/// diagonal eigenvalue matrix, exactly.
ClosedLoopMatrix assemble_A_c(const EigenSystem& es, double D, const BlockDiagMatrix& k_uni,
                              const BlockDiagMatrix& k_par, double v0);

} // namespace cylchan
