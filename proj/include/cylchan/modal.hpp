#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cylchan/eigensystem.hpp"
#include "cylchan/release.hpp"

namespace cylchan {

/// Modal state: one complex coordinate per materialized mode. Orders n >= 1
/// stand for the conjugate pair (n, -n); reconstruction doubles their real
/// contribution.
using StateVector = Eigen::VectorXcd;

/// Cube-shaped receiver centered at x_rx; the reported value is the expected
/// amount inside the cube under a locally uniform concentration.
struct CuboidObserver {
    CylPoint x_rx;
    double edge = 0.04;

    double volume() const { return edge * edge * edge; }
    void validate(const CylinderGeometry& g) const;
};

/// Tolerances of the per-axis transform quadratures.
struct TransformConfig {
    double rel_tol = 1e-10;
    int start_order = 32;
    int max_order = 16384;
};

/// Output row: entry mu is K1(x, mu) / N_mu.
StateVector output_c1(const EigenSystem& es, const CylPoint& x);

/// Conjugated fourth adjoint row, entry mu = conj(K4t(xi, mu)); the kernel of
/// the forward transform of scalar concentrations.
StateVector adjoint_c4_conj(const EigenSystem& es, const CylPoint& xi);

/// Forward transform of an initial concentration profile: separable product of
/// three 1-D integrals per mode. Uniform profiles populate only the (n = 0,
/// k = 0) modes; that sparsity is exact, not a numerical coincidence.
StateVector transform_initial(const ReleaseProfile& p, const EigenSystem& es,
                              const TransformConfig& cfg = {});

/// Separable source: a spatial release profile replayed with a discrete-time
/// weight sequence (weight per step, applied as additive forcing).
struct SourceSpec {
    ReleaseProfile spatial;
    std::vector<double> temporal; ///< f_t[k]; empty means no source
};

/// Transformed source: the spatial part as a modal vector (identical to the
/// transform of the same profile as an initial condition).
StateVector transform_source(const SourceSpec& s, const EigenSystem& es,
                             const TransformConfig& cfg = {});

/// Concentration reconstructed from a modal state at point x. The result is
/// the real part of the folded series; the imaginary residue of the n = 0
/// block is returned for diagnostics (it must vanish for real fields).
double concentration_at(const EigenSystem& es, const CylPoint& x, const StateVector& y,
                        double* imag_residue = nullptr);

/// Same reconstruction from a precomputed output row (hot path: fixed
/// observers over many time steps).
double concentration_from_c1(const ModeTable& table, const StateVector& c1,
                             const StateVector& y, double* imag_residue = nullptr);

/// Expected amount inside the observer cube, volume * concentration at center.
double cube_concentration(const EigenSystem& es, const CuboidObserver& obs,
                          const StateVector& y, double* imag_residue = nullptr);

/// Integral of the reconstructed concentration over the whole cylinder,
/// evaluated in closed form from the modal coordinates (only the n = 0, k = 0,
/// odd-nu modes carry net volume).
double mass_of_state(const EigenSystem& es, const StateVector& y);

} // namespace cylchan
