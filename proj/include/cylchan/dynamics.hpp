#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "cylchan/flow_coupling.hpp"
#include "cylchan/modal.hpp"
#include "cylchan/parallel.hpp"
#include "cylchan/series.hpp"

namespace cylchan {

/// Discrete-time sampling of the modal recursion.
struct SimulationConfig {
    double T = 2e-4;  ///< normalized sampling interval
    int steps = 900;  ///< samples after the initial one
    bool guard_enabled = true;
    double t_obs_guard = 0.18; ///< normalized horizon before end-of-duct re-entry artifacts
    int state_decimation = 10; ///< keep every n-th state (memory bound), 0 = none
    std::vector<int> snapshot_steps; ///< extra steps whose states are always kept

    void validate() const;
};

struct DiscretizeOptions {
    /// Cross-check each block exponential against an independent high-order
    /// Taylor integrator of the defining ODE on a probe vector.
    bool verify = true;
    double verify_tol = 1e-10;
};

/// exp(A_c T), block-diagonal. Blocks are stored row-major for the
/// row-parallel matrix-vector recursion.
struct DiscreteStateMatrix {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    std::vector<RowMajor> blocks;
    double T = 0.0;
    ModeTable table;
    std::vector<double> verify_residuals; ///< per block, empty when verification is off
};

/// Per-block scaling-and-squaring matrix exponential of A_c * T, with optional
/// backward verification of the defining ODE. Throws if a block exponential
/// produces non-finite entries (reported with the block index) or the
/// verification residual exceeds the tolerance.
DiscreteStateMatrix discretize(const ClosedLoopMatrix& ac, double T,
                               const DiscretizeOptions& opts = {});

/// Dense matrix exponential of one real block (scaling and squaring).
Eigen::MatrixXd block_exponential(const Eigen::MatrixXd& a);

/// Reference integrator used by the verification: propagates y' = A y over one
/// interval with a degree-adaptive Taylor method, sub-stepped so the series
/// remainder stays below machine precision.
Eigen::VectorXd taylor_propagate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0, double t);

/// State trajectory and per-step observations of the discrete recursion
/// y[k] = A_d y[k-1] + f[k] + y_init * delta[k].
struct Trajectory {
    Eigen::MatrixXd observations;  ///< [observer][0..steps], cube amounts
    double max_imag_residue = 0.0; ///< largest |Im| of any folded observation
    std::vector<double> mass;      ///< reconstructed volume integral per step
    std::vector<int> stored_steps;
    std::vector<StateVector> stored_states;
};

/// Runs the recursion. Observer rows are evaluated every step; states are kept
/// at the decimation stride plus all requested snapshot steps. The parallel
/// mode is bit-for-bit identical to the serial reference.
Trajectory evolve(const DiscreteStateMatrix& ad, const EigenSystem& es,
                  const StateVector& y_init, const StateVector* source_spatial,
                  const std::vector<double>* source_temporal, const SimulationConfig& cfg,
                  const std::vector<CuboidObserver>& observers,
                  ExecMode mode = ExecMode::Parallel);

/// Propagator exp(A_c t) for one instant, same per-block path as discretize.
BlockDiagMatrix matrix_propagator(const ClosedLoopMatrix& ac, double t);

/// Concentration Green's function g(t, x | xi) = c1^T(x) exp(A_c t) c4t*(xi),
/// folded over the implied negative orders.
double greens_function(const EigenSystem& es, const ClosedLoopMatrix& ac, double t,
                       const CylPoint& x, const CylPoint& xi);

/// Same, with a precomputed propagator (hot path for quadratures over xi).
double greens_function(const EigenSystem& es, const BlockDiagMatrix& propagator,
                       const CylPoint& x, const CylPoint& xi);

/// Solves (s I - A_c) x = b block-wise; the residual must not exceed
/// 1e-10 ||b|| or the shift is reported as near-singular.
StateVector resolvent_apply(const ClosedLoopMatrix& ac, std::complex<double> s,
                            const StateVector& b);

/// One simulation: discretize, transform the release, run the recursion.
struct SimProblem {
    const EigenSystem* es = nullptr;
    const ClosedLoopMatrix* ac = nullptr;
    ReleaseProfile release;
    std::optional<SourceSpec> source;
    std::vector<CuboidObserver> observers;
    std::vector<std::string> observer_ids;
    SimulationConfig sim;
    double tau_s = 100.0; ///< seconds per normalized time unit, for output
    DiscretizeOptions discretize_opts;
    ExecMode mode = ExecMode::Parallel;
};

struct SimResult {
    ConcentrationSeries series;
    std::vector<double> mass;
    double max_imag_residue = 0.0;
    std::vector<int> stored_steps;
    std::vector<StateVector> stored_states;
    std::vector<double> discretize_residuals;
};

SimResult simulate(const SimProblem& p);

/// Field snapshot on a planar grid reconstructed from one stored state.
/// plane "yz": axis1 = y in [-R0, R0] (phi = +-pi/2 cut), axis2 = z.
/// plane "rz": axis1 = r in [0, R0] at fixed phi, axis2 = z.
SnapshotGrid reconstruct_snapshot(const EigenSystem& es, const StateVector& y,
                                  const std::string& plane, double phi, int n1, int n2,
                                  double time_s, ExecMode mode = ExecMode::Parallel);

} // namespace cylchan
