#pragma once

#include <complex>
#include <vector>

#include "cylchan/geometry.hpp"

namespace cylchan {

/// One spatial mode: azimuthal order n >= 0, radial root index m, axial index nu >= 1.
struct Mode {
    int n = 0;
    int m = 0;
    int nu = 1;
};

/// Truncation of the modal expansion and the linear index map.
///
/// Orders n = 0..N are materialized; the conjugate-symmetric orders -n are
/// implied (J_{-n} = (-1)^n J_n) and folded into reconstruction weights.
/// Within the block of order n, the linear index is m * L + (nu - 1), so the
/// state of one order is a contiguous block of size M * L.
///
/// The axial index starts at nu = 1: the nu = 0 candidate has sin(0 * z) == 0
/// everywhere and a vanishing norm, so it carries no content and would make
/// the inverse transform singular.
struct ModeTable {
    int N = 0; ///< maximum azimuthal order
    int M = 1; ///< radial roots per order
    int L = 1; ///< axial wavenumbers

    void validate() const {
        if (N < 0) throw std::invalid_argument("modes.N must be >= 0");
        if (M < 1) throw std::invalid_argument("modes.M must be >= 1");
        if (L < 1) throw std::invalid_argument("modes.L must be >= 1");
    }

    int block_count() const { return N + 1; }
    int block_size() const { return M * L; }
    /// Materialized modes (orders folded to n >= 0).
    int size() const { return (N + 1) * M * L; }
    /// Mode count with both azimuthal signs expanded.
    long long full_mode_count() const { return (2LL * N + 1) * M * L; }

    int index(int n, int m, int nu) const { return n * M * L + m * L + (nu - 1); }
    Mode mode(int mu) const {
        const int ml = M * L;
        Mode md;
        md.n = mu / ml;
        md.m = (mu % ml) / L;
        md.nu = (mu % L) + 1;
        return md;
    }
    /// Reconstruction weight folding the implied order -n onto n.
    double fold_weight(int n) const { return n == 0 ? 1.0 : 2.0; }
};

/// Roots, wavenumbers, and scaling factors of the cylinder eigenproblem with
/// a reflective radial wall (Neumann condition k J_n'(k R0) = 0) and absorbing
/// axial ends (sin(lambda Z0) = 0).
struct EigenSystem {
    CylinderGeometry geom;
    ModeTable table;
    std::vector<std::vector<double>> roots; ///< k[n][m]; k[0][0] == 0
    std::vector<double> wavenumbers;        ///< lambda[nu-1] = nu*pi/Z0, nu = 1..L
    std::vector<std::vector<double>> radial_norm; ///< N_r[n][m]
    std::vector<double> scaling;                  ///< N_mu per materialized mode

    double root(const Mode& md) const { return roots[md.n][md.m]; }
    double wavenumber(const Mode& md) const { return wavenumbers[md.nu - 1]; }
};

/// Roots k[n][m] of k J_n'(k R0) = 0 for n = 0..N, m = 0..M-1.
/// For n = 0 the k = 0 root is included (the constant radial mode survives);
/// for n >= 1 only strictly positive roots are returned because J_n(0) = 0
/// would make the whole mode vanish. Throws with the offending (n, m) if a
/// root cannot be bracketed below the search ceiling.
std::vector<std::vector<double>> compute_roots(int N, int M, double R0);

/// lambda_nu = nu*pi/Z0 for nu = 1..L.
std::vector<double> compute_wavenumbers(int L, double Z0);

/// s_mu = -D (k^2 + lambda^2) over the materialized table.
std::vector<double> compute_eigenvalues(double D, const EigenSystem& es);

/// Builds roots, wavenumbers, and scaling factors for the given truncation.
EigenSystem build_eigensystem(const CylinderGeometry& geom, const ModeTable& table);

/// Radial norm integral N_r = int_0^R0 J_n^2(k r) r dr in closed form.
double radial_norm_integral(int n, double k, double R0);

/// First entry of the primal eigenfunction vector:
/// K1 = J_n(k r) e^{i n phi} sin(lambda z). Rejects points outside the cylinder.
std::complex<double> eval_eigvec_K1(const EigenSystem& es, const CylPoint& x, int mu);

/// Third adjoint entry: lambda J_n(k r) e^{i n phi} cos(lambda z).
std::complex<double> eval_adjoint_K3(const EigenSystem& es, const CylPoint& x, int mu);

/// Fourth adjoint entry: J_n(k r) e^{i n phi} sin(lambda z).
std::complex<double> eval_adjoint_K4(const EigenSystem& es, const CylPoint& x, int mu);

} // namespace cylchan
