#include "cylchan/pbs.hpp"

#include <cmath>
#include <stdexcept>

#include "cylchan/rng.hpp"

namespace cylchan {

void PbsConfig::validate() const {
    if (n_tx < 1) throw std::invalid_argument("pbs.n_tx must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("pbs.dt must be > 0");
    if (realizations < 1) throw std::invalid_argument("pbs.realizations must be >= 1");
}

namespace {

constexpr uint32_t kTagInit = 0x80000000u;
constexpr uint32_t kTagStep = 0x40000000u;

struct BoundingBox {
    double xmin, xmax, ymin, ymax, zmin, zmax;
};

// Cartesian bounding box of the release support. For the point kind this is
// the box around the annular sector; for the uniform kind the full disk.
BoundingBox support_box(const ReleaseProfile& p, const CylinderGeometry& g) {
    BoundingBox b{};
    b.zmin = p.ze - 0.5 * p.z0;
    b.zmax = p.ze + 0.5 * p.z0;
    if (p.kind == ReleaseProfile::Kind::Uniform) {
        b.xmin = -g.R0;
        b.xmax = g.R0;
        b.ymin = -g.R0;
        b.ymax = g.R0;
        return b;
    }
    const double rhi = p.re + 0.5 * p.r0;
    const double rlo = std::max(0.0, p.re - 0.5 * p.r0);
    b.xmin = b.ymin = 1e300;
    b.xmax = b.ymax = -1e300;
    auto add = [&](double x, double y) {
        b.xmin = std::min(b.xmin, x);
        b.xmax = std::max(b.xmax, x);
        b.ymin = std::min(b.ymin, y);
        b.ymax = std::max(b.ymax, y);
    };
    for (double r : {rlo, rhi})
        for (double dphi : {-0.5 * p.phi0, 0.5 * p.phi0})
            add(r * std::cos(p.phie + dphi), r * std::sin(p.phie + dphi));
    // Axis extremes inside the angular range.
    for (int q = -4; q <= 4; ++q) {
        const double theta = q * 0.5 * M_PI;
        const double d = std::atan2(std::sin(theta - p.phie), std::cos(theta - p.phie));
        if (std::fabs(d) <= 0.5 * p.phi0) add(rhi * std::cos(theta), rhi * std::sin(theta));
    }
    return b;
}

} // namespace

std::vector<Particle> sample_initial(const ReleaseProfile& p, const CylinderGeometry& g,
                                     int count, uint64_t seed, uint32_t realization) {
    p.validate(g);
    if (count < 0) throw std::invalid_argument("sample_initial: count must be >= 0");
    const BoundingBox box = support_box(p, g);
    const double peak = p.amplitude;
    if (!(peak > 0.0)) throw std::invalid_argument("sample_initial: profile amplitude is zero");

    std::vector<Particle> out(static_cast<size_t>(count));
    constexpr int kMaxAttempts = 200000;
    for (int i = 0; i < count; ++i) {
        bool accepted = false;
        for (uint32_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            const auto w0 = Philox4x32::block(seed, realization, static_cast<uint32_t>(i),
                                              attempt, kTagInit | 0u);
            const auto w1 = Philox4x32::block(seed, realization, static_cast<uint32_t>(i),
                                              attempt, kTagInit | 1u);
            const double x = box.xmin + (box.xmax - box.xmin) * u01(w0[0], w0[1]);
            const double y = box.ymin + (box.ymax - box.ymin) * u01(w0[2], w0[3]);
            const double z = box.zmin + (box.zmax - box.zmin) * u01(w1[0], w1[1]);
            const double u = u01(w1[2], w1[3]);
            const CylPoint pt{std::hypot(x, y), std::atan2(y, x), z};
            const double density = eval_release(p, pt, g);
            if (u * peak < density) {
                out[i] = Particle{x, y, z, true};
                accepted = true;
                break;
            }
            // Acceptance-rate guard: bail out early once the estimate is solid.
            if (attempt == 9999)
                throw std::runtime_error(
                    "sample_initial: acceptance rate below 1e-3 (10000 consecutive rejections "
                    "for one particle); check that the profile overlaps its support box");
        }
        if (!accepted)
            throw std::runtime_error("sample_initial: rejection sampling did not terminate");
    }
    return out;
}

Particle reflect_and_absorb(Particle pt, const CylinderGeometry& g) {
    if (!pt.alive) return pt;
    double r = std::hypot(pt.x, pt.y);
    while (r > g.R0) {
        const double mirrored = 2.0 * g.R0 - r;
        const double scale = mirrored / r; // negative scale flips through the axis
        pt.x *= scale;
        pt.y *= scale;
        r = std::fabs(mirrored);
    }
    if (pt.z < 0.0 || pt.z > g.Z0) pt.alive = false;
    return pt;
}

void step_particles(std::vector<Particle>& particles, double dt, double D,
                    const FlowField& flow, const CylinderGeometry& g, uint64_t seed,
                    uint32_t realization, uint32_t step_index) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_particles: dt must be > 0");
    const double sigma = std::sqrt(2.0 * D * dt);
    const double inv_r02 = 1.0 / (g.R0 * g.R0);
    for (size_t i = 0; i < particles.size(); ++i) {
        Particle& pt = particles[i];
        if (!pt.alive) continue;
        const double r2 = pt.x * pt.x + pt.y * pt.y;
        pt.z += flow.v0 * (1.0 - r2 * inv_r02) * dt;
        if (sigma > 0.0) {
            const auto w0 = Philox4x32::block(seed, realization, static_cast<uint32_t>(i),
                                              step_index, kTagStep | 0u);
            const auto w1 = Philox4x32::block(seed, realization, static_cast<uint32_t>(i),
                                              step_index, kTagStep | 1u);
            double g0, g1, g2, g3;
            gaussian_pair(w0, g0, g1);
            gaussian_pair(w1, g2, g3);
            pt.x += sigma * g0;
            pt.y += sigma * g1;
            pt.z += sigma * g2;
        }
        pt = reflect_and_absorb(pt, g);
    }
}

long long count_in_cuboid(const std::vector<Particle>& particles, const CuboidObserver& obs) {
    const double h = 0.5 * obs.edge;
    const double cx = cyl_to_x(obs.x_rx);
    const double cy = cyl_to_y(obs.x_rx);
    const double cz = obs.x_rx.z;
    long long count = 0;
    for (const Particle& pt : particles) {
        if (!pt.alive) continue;
        if (std::fabs(pt.x - cx) <= h && std::fabs(pt.y - cy) <= h && std::fabs(pt.z - cz) <= h)
            ++count;
    }
    return count;
}

double observe(const std::vector<Particle>& particles, const CuboidObserver& obs,
               double weight) {
    return weight * static_cast<double>(count_in_cuboid(particles, obs)) / obs.volume();
}

PbsResult run_pbs(const PbsProblem& p) {
    p.cfg.validate();
    p.geom.validate();
    p.release.validate(p.geom);
    for (const auto& obs : p.observers) obs.validate(p.geom);
    if (!(p.sample_interval > 0.0) || p.samples < 0)
        throw std::invalid_argument("run_pbs: bad sampling grid");

    const long long stride_ll = std::llround(p.sample_interval / p.cfg.dt);
    const int stride = static_cast<int>(std::max(1LL, stride_ll));
    const double dt_eff = p.sample_interval / stride;

    PbsResult res;
    if (std::fabs(dt_eff - p.cfg.dt) > 1e-9 * p.cfg.dt)
        res.series.warnings.push_back("pbs.dt adjusted to " + std::to_string(dt_eff) +
                                      " (normalized) to divide the sampling interval evenly");

    const double mass = release_mass(p.release, p.geom);
    const double w = mass / p.cfg.n_tx;
    res.particle_weight = w;

    const int nobs = static_cast<int>(p.observers.size());
    const int nsamp = p.samples + 1;
    const int nreal = p.cfg.realizations;

    // Integer counts per realization; the final reduction runs in a fixed
    // order so the result is independent of the schedule.
    std::vector<long long> counts(static_cast<size_t>(nreal) * nobs * nsamp, 0);
    std::vector<long long> alive(static_cast<size_t>(nreal) * nsamp, 0);

    std::string error;
#pragma omp parallel for schedule(dynamic) if (p.mode == ExecMode::Parallel)
    for (int rz = 0; rz < nreal; ++rz) {
        try {
            std::vector<Particle> particles =
                sample_initial(p.release, p.geom, p.cfg.n_tx, p.cfg.seed,
                               static_cast<uint32_t>(rz));
            long long* cnt = counts.data() + static_cast<size_t>(rz) * nobs * nsamp;
            long long* alv = alive.data() + static_cast<size_t>(rz) * nsamp;
            uint32_t step_index = 0;
            for (int k = 0; k < nsamp; ++k) {
                if (k > 0) {
                    for (int s = 0; s < stride; ++s)
                        step_particles(particles, dt_eff, p.medium.D, p.flow, p.geom, p.cfg.seed,
                                       static_cast<uint32_t>(rz), step_index++);
                }
                for (int o = 0; o < nobs; ++o)
                    cnt[static_cast<size_t>(o) * nsamp + k] =
                        count_in_cuboid(particles, p.observers[o]);
                long long na = 0;
                for (const Particle& pt : particles) na += pt.alive ? 1 : 0;
                alv[k] = na;
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);

    res.series.times_s.resize(nsamp);
    for (int k = 0; k < nsamp; ++k) res.series.times_s[k] = k * p.sample_interval * p.tau_s;
    res.series.observer_ids = p.observer_ids;
    if (static_cast<int>(res.series.observer_ids.size()) != nobs) {
        res.series.observer_ids.resize(nobs);
        for (int o = 0; o < nobs; ++o)
            if (res.series.observer_ids[o].empty())
                res.series.observer_ids[o] = "rx" + std::to_string(o);
    }
    res.series.values.assign(nobs, std::vector<double>(nsamp, 0.0));
    for (int o = 0; o < nobs; ++o) {
        for (int k = 0; k < nsamp; ++k) {
            long long total = 0;
            for (int rz = 0; rz < nreal; ++rz)
                total += counts[(static_cast<size_t>(rz) * nobs + o) * nsamp + k];
            res.series.values[o][k] = w * static_cast<double>(total) / nreal;
        }
    }
    res.alive_fraction.resize(nsamp);
    for (int k = 0; k < nsamp; ++k) {
        long long total = 0;
        for (int rz = 0; rz < nreal; ++rz) total += alive[static_cast<size_t>(rz) * nsamp + k];
        res.alive_fraction[k] =
            static_cast<double>(total) / (static_cast<double>(nreal) * p.cfg.n_tx);
    }
    return res;
}

} // namespace cylchan
