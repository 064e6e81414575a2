#include "cylchan/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cylchan/bessel.hpp"

namespace cylchan {

void SimulationConfig::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("sim.T must be > 0");
    if (steps < 0) throw std::invalid_argument("sim.steps must be >= 0");
    if (state_decimation < 0) throw std::invalid_argument("sim.decimation must be >= 0");
}

Eigen::MatrixXd block_exponential(const Eigen::MatrixXd& a) { return a.exp(); }

Eigen::VectorXd taylor_propagate(const Eigen::MatrixXd& a, const Eigen::VectorXd& y0, double t) {
    const double anorm = a.cwiseAbs().colwise().sum().maxCoeff(); // 1-norm
    const int substeps = std::max(1, static_cast<int>(std::ceil(anorm * std::fabs(t))));
    const double h = t / substeps;
    Eigen::VectorXd y = y0;
    Eigen::VectorXd term(y.size()), tmp(y.size());
    for (int s = 0; s < substeps; ++s) {
        term = y;
        double ynorm = y.norm();
        bool converged = false;
        for (int j = 1; j <= 80; ++j) {
            tmp.noalias() = a * term;
            term = (h / j) * tmp;
            y += term;
            ynorm = std::max(ynorm, y.norm());
            if (term.norm() <= 1e-17 * ynorm) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("taylor_propagate: series did not converge (substep too large)");
    }
    return y;
}

namespace {

// Deterministic probe direction for the discretization check.
Eigen::VectorXd probe_vector(int dim, unsigned seed) {
    Eigen::VectorXd v(dim);
    unsigned state = seed * 2654435761u + 12345u;
    for (int i = 0; i < dim; ++i) {
        state = state * 1664525u + 1013904223u;
        v[i] = (state >> 8) / static_cast<double>(1u << 24) - 0.5;
    }
    v.normalize();
    return v;
}

} // namespace

DiscreteStateMatrix discretize(const ClosedLoopMatrix& ac, double T,
                               const DiscretizeOptions& opts) {
    if (!(T > 0.0)) throw std::invalid_argument("discretize: T must be > 0");
    DiscreteStateMatrix ad;
    ad.T = T;
    ad.table = ac.table;
    ad.blocks.resize(ac.blocks.size());
    if (opts.verify) ad.verify_residuals.resize(ac.blocks.size());

    for (size_t b = 0; b < ac.blocks.size(); ++b) {
        const Eigen::MatrixXd scaled = T * ac.blocks[b];
        const Eigen::MatrixXd e = block_exponential(scaled);
        if (!e.allFinite())
            throw std::runtime_error("discretize: non-finite exponential at block " +
                                     std::to_string(b));
        if (opts.verify) {
            const Eigen::VectorXd v = probe_vector(static_cast<int>(e.rows()),
                                                   static_cast<unsigned>(b) + 1u);
            const Eigen::VectorXd ref = taylor_propagate(ac.blocks[b], v, T);
            const double resid = (e * v - ref).norm() / std::max(ref.norm(), 1e-300);
            ad.verify_residuals[b] = resid;
            if (!(resid <= opts.verify_tol))
                throw std::runtime_error("discretize: exponential verification failed at block " +
                                         std::to_string(b) + " (residual " +
                                         std::to_string(resid) + ")");
        }
        ad.blocks[b] = e;
    }
    return ad;
}

namespace {

// Fused row-wise product of a real row-major matrix with the (re, im) parts of
// a complex vector. Four explicit accumulators keep the summation order fixed,
// so serial and parallel execution agree bit for bit.
void matvec_complex(const DiscreteStateMatrix::RowMajor& a, const double* __restrict xre,
                    const double* __restrict xim, double* __restrict ore,
                    double* __restrict oim, bool parallel) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    const double* __restrict base = a.data();
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < rows; ++i) {
        const double* __restrict row = base + static_cast<size_t>(i) * cols;
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
        double t0 = 0, t1 = 0, t2 = 0, t3 = 0;
        int c = 0;
        for (; c + 4 <= cols; c += 4) {
            s0 += row[c] * xre[c];
            s1 += row[c + 1] * xre[c + 1];
            s2 += row[c + 2] * xre[c + 2];
            s3 += row[c + 3] * xre[c + 3];
            t0 += row[c] * xim[c];
            t1 += row[c + 1] * xim[c + 1];
            t2 += row[c + 2] * xim[c + 2];
            t3 += row[c + 3] * xim[c + 3];
        }
        for (; c < cols; ++c) {
            s0 += row[c] * xre[c];
            t0 += row[c] * xim[c];
        }
        ore[i] = (s0 + s1) + (s2 + s3);
        oim[i] = (t0 + t1) + (t2 + t3);
    }
}

struct SplitState {
    Eigen::VectorXd re, im;
};

} // namespace

Trajectory evolve(const DiscreteStateMatrix& ad, const EigenSystem& es,
                  const StateVector& y_init, const StateVector* source_spatial,
                  const std::vector<double>* source_temporal, const SimulationConfig& cfg,
                  const std::vector<CuboidObserver>& observers, ExecMode mode) {
    cfg.validate();
    const ModeTable& t = ad.table;
    const int ml = t.block_size();
    const int nblk = t.block_count();
    if (y_init.size() != t.size()) throw std::invalid_argument("evolve: state dimension mismatch");
    if (source_spatial && source_spatial->size() != t.size())
        throw std::invalid_argument("evolve: source dimension mismatch");
    const bool parallel = (mode == ExecMode::Parallel);

    // Observer output rows, folded: value = V sum_n w_n Re(c1_n^T y_n).
    const int nobs = static_cast<int>(observers.size());
    std::vector<SplitState> c1(nobs);
    std::vector<double> volume(nobs);
    for (int o = 0; o < nobs; ++o) {
        observers[o].validate(es.geom);
        const StateVector row = output_c1(es, observers[o].x_rx);
        c1[o].re = row.real();
        c1[o].im = row.imag();
        volume[o] = observers[o].volume();
    }

    SplitState y{y_init.real(), y_init.imag()};
    SplitState ynext{Eigen::VectorXd(t.size()), Eigen::VectorXd(t.size())};
    SplitState src;
    if (source_spatial) {
        src.re = source_spatial->real();
        src.im = source_spatial->imag();
    }

    std::set<int> keep(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end());

    Trajectory out;
    out.observations.resize(nobs, cfg.steps + 1);
    out.mass.resize(cfg.steps + 1);

    auto record = [&](int k) {
        for (int o = 0; o < nobs; ++o) {
            double vre = 0.0, vim0 = 0.0;
            for (int n = 0; n < nblk; ++n) {
                const auto cre = c1[o].re.segment(n * ml, ml);
                const auto cim = c1[o].im.segment(n * ml, ml);
                const auto yre = y.re.segment(n * ml, ml);
                const auto yim = y.im.segment(n * ml, ml);
                const double re = cre.dot(yre) - cim.dot(yim);
                vre += t.fold_weight(n) * re;
                if (n == 0) vim0 = cre.dot(yim) + cim.dot(yre);
            }
            out.observations(o, k) = volume[o] * vre;
            out.max_imag_residue =
                std::max(out.max_imag_residue, volume[o] * std::fabs(vim0));
        }
        double mass = 0.0;
        for (int nu = 1; nu <= t.L; nu += 2) mass += y.re[t.index(0, 0, nu)] * 4.0 / (nu * M_PI);
        out.mass[k] = mass;
        const bool decim = cfg.state_decimation > 0 && k % cfg.state_decimation == 0;
        if (decim || keep.count(k) || k == cfg.steps) {
            StateVector snap(t.size());
            snap.real() = y.re;
            snap.imag() = y.im;
            out.stored_steps.push_back(k);
            out.stored_states.push_back(std::move(snap));
        }
    };

    auto add_source = [&](int k) {
        if (!source_spatial || !source_temporal) return;
        if (k >= static_cast<int>(source_temporal->size())) return;
        const double f = (*source_temporal)[k];
        if (f == 0.0) return;
        y.re += f * src.re;
        y.im += f * src.im;
    };

    add_source(0);
    record(0);
    for (int k = 1; k <= cfg.steps; ++k) {
        for (int n = 0; n < nblk; ++n) {
            matvec_complex(ad.blocks[n], y.re.data() + n * ml, y.im.data() + n * ml,
                           ynext.re.data() + n * ml, ynext.im.data() + n * ml, parallel);
        }
        std::swap(y, ynext);
        add_source(k);
        record(k);
    }
    return out;
}

BlockDiagMatrix matrix_propagator(const ClosedLoopMatrix& ac, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("matrix_propagator: t must be >= 0");
    BlockDiagMatrix p;
    p.blocks.resize(ac.blocks.size());
    for (size_t b = 0; b < ac.blocks.size(); ++b) {
        p.blocks[b] = block_exponential(Eigen::MatrixXd(t * ac.blocks[b]));
        if (!p.blocks[b].allFinite())
            throw std::runtime_error("matrix_propagator: non-finite exponential at block " +
                                     std::to_string(b));
    }
    return p;
}

double greens_function(const EigenSystem& es, const BlockDiagMatrix& propagator,
                       const CylPoint& x, const CylPoint& xi) {
    const ModeTable& t = es.table;
    const int ml = t.block_size();
    const StateVector c1 = output_c1(es, x);
    const StateVector b = adjoint_c4_conj(es, xi);
    double g = 0.0;
    for (int n = 0; n < t.block_count(); ++n) {
        const Eigen::VectorXcd w = propagator.blocks[n] * b.segment(n * ml, ml);
        const std::complex<double> term =
            (c1.segment(n * ml, ml).transpose() * w).value();
        g += t.fold_weight(n) * term.real();
    }
    return g;
}

double greens_function(const EigenSystem& es, const ClosedLoopMatrix& ac, double t,
                       const CylPoint& x, const CylPoint& xi) {
    return greens_function(es, matrix_propagator(ac, t), x, xi);
}

StateVector resolvent_apply(const ClosedLoopMatrix& ac, std::complex<double> s,
                            const StateVector& b) {
    const ModeTable& t = ac.table;
    const int ml = t.block_size();
    if (b.size() != t.size()) throw std::invalid_argument("resolvent_apply: dimension mismatch");
    StateVector x(t.size());
    for (int n = 0; n < t.block_count(); ++n) {
        Eigen::MatrixXcd m = (-ac.blocks[n]).cast<std::complex<double>>();
        m.diagonal().array() += s;
        const auto bseg = b.segment(n * ml, ml);
        const Eigen::VectorXcd xn = m.partialPivLu().solve(bseg);
        const double resid = (m * xn - bseg).norm();
        if (!(resid <= 1e-10 * b.norm()))
            throw std::runtime_error("resolvent_apply: near-singular shift at block " +
                                     std::to_string(n) + " (residual " + std::to_string(resid) +
                                     ")");
        x.segment(n * ml, ml) = xn;
    }
    return x;
}

SimResult simulate(const SimProblem& p) {
    if (!p.es || !p.ac) throw std::invalid_argument("simulate: missing eigensystem or state matrix");
    p.sim.validate();

    SimResult res;
    if (p.sim.guard_enabled && p.sim.steps * p.sim.T > p.sim.t_obs_guard * (1.0 + 1e-12)) {
        res.series.warnings.push_back(
            "observation horizon exceeds the re-entry guard t_obs = " +
            std::to_string(p.sim.t_obs_guard * p.tau_s) +
            " s; samples beyond it may show boundary re-entry artifacts");
    }

    const DiscreteStateMatrix ad = discretize(*p.ac, p.sim.T, p.discretize_opts);
    res.discretize_residuals = ad.verify_residuals;

    const StateVector y0 = transform_initial(p.release, *p.es);
    StateVector src;
    const StateVector* src_ptr = nullptr;
    const std::vector<double>* temporal = nullptr;
    if (p.source) {
        src = transform_source(*p.source, *p.es);
        src_ptr = &src;
        temporal = &p.source->temporal;
    }

    Trajectory tr = evolve(ad, *p.es, y0, src_ptr, temporal, p.sim, p.observers, p.mode);

    res.series.times_s.resize(p.sim.steps + 1);
    for (int k = 0; k <= p.sim.steps; ++k) res.series.times_s[k] = k * p.sim.T * p.tau_s;
    res.series.observer_ids = p.observer_ids;
    if (res.series.observer_ids.size() != p.observers.size()) {
        res.series.observer_ids.resize(p.observers.size());
        for (size_t o = 0; o < p.observers.size(); ++o)
            if (res.series.observer_ids[o].empty())
                res.series.observer_ids[o] = "rx" + std::to_string(o);
    }
    res.series.values.resize(p.observers.size());
    for (size_t o = 0; o < p.observers.size(); ++o) {
        res.series.values[o].resize(p.sim.steps + 1);
        for (int k = 0; k <= p.sim.steps; ++k)
            res.series.values[o][k] = tr.observations(static_cast<int>(o), k);
    }
    res.mass = std::move(tr.mass);
    res.max_imag_residue = tr.max_imag_residue;
    res.stored_steps = std::move(tr.stored_steps);
    res.stored_states = std::move(tr.stored_states);
    return res;
}

SnapshotGrid reconstruct_snapshot(const EigenSystem& es, const StateVector& y,
                                  const std::string& plane, double phi, int n1, int n2,
                                  double time_s, ExecMode mode) {
    const ModeTable& t = es.table;
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("reconstruct_snapshot: grid too small");
    if (plane != "yz" && plane != "rz")
        throw std::invalid_argument("reconstruct_snapshot: plane must be 'yz' or 'rz'");

    SnapshotGrid g;
    g.plane = plane;
    g.phi = phi;
    g.time_s = time_s;
    g.n1 = n1;
    g.n2 = n2;
    g.a2_min = 0.0;
    g.a2_max = es.geom.Z0;
    const bool yz = (plane == "yz");
    g.a1_min = yz ? -es.geom.R0 : 0.0;
    g.a1_max = es.geom.R0;
    g.values.assign(static_cast<size_t>(n1) * n2, 0.0);

    // Axis samples and per-point (r, phi).
    std::vector<double> rs(n1), phis(n1), zs(n2);
    for (int i = 0; i < n1; ++i) {
        const double a = g.a1_min + (g.a1_max - g.a1_min) * i / (n1 - 1.0);
        rs[i] = yz ? std::fabs(a) : a;
        phis[i] = yz ? (a >= 0.0 ? 0.5 * M_PI : -0.5 * M_PI) : phi;
    }
    for (int j = 0; j < n2; ++j) zs[j] = es.geom.Z0 * j / (n2 - 1.0);

    // sin(lambda_nu z_j) table shared by all blocks.
    Eigen::MatrixXd sinz(t.L, n2);
    for (int nu = 1; nu <= t.L; ++nu)
        for (int j = 0; j < n2; ++j) sinz(nu - 1, j) = std::sin(es.wavenumbers[nu - 1] * zs[j]);

    for (int n = 0; n <= t.N; ++n) {
        // Scaled modal coefficients of this block as an M x L matrix.
        Eigen::MatrixXd cre(t.M, t.L), cim(t.M, t.L);
        for (int m = 0; m < t.M; ++m)
            for (int nu = 1; nu <= t.L; ++nu) {
                const int mu = t.index(n, m, nu);
                const std::complex<double> c = y[mu] / es.scaling[mu];
                cre(m, nu - 1) = c.real();
                cim(m, nu - 1) = c.imag();
            }
        Eigen::MatrixXd jr(n1, t.M);
        for (int i = 0; i < n1; ++i)
            for (int m = 0; m < t.M; ++m) jr(i, m) = bessel_j(n, es.roots[n][m] * rs[i]);

        const Eigen::MatrixXd sre = jr * (cre * sinz); // n1 x n2
        const Eigen::MatrixXd sim = jr * (cim * sinz);
        const double w = t.fold_weight(n);
        const bool parallel = (mode == ExecMode::Parallel);
#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < n1; ++i) {
            const double cphi = std::cos(n * phis[i]);
            const double sphi = std::sin(n * phis[i]);
            double* row = g.values.data() + static_cast<size_t>(i) * n2;
            for (int j = 0; j < n2; ++j)
                row[j] += w * (cphi * sre(i, j) - sphi * sim(i, j));
        }
    }
    return g;
}

} // namespace cylchan
