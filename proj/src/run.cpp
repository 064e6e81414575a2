#include "cylchan/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cylchan/regimes.hpp"

namespace cylchan {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace

void RunReport::add(const std::string& key, double value) { entries.emplace_back(key, fmt(value)); }

const std::string* RunReport::find(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

std::string default_cache_dir() {
    if (const char* env = std::getenv("CYLCHAN_CACHE_DIR"); env && *env) return env;
    return "cylchan_cache";
}

CachePayload load_or_build(const Scenario& sc, const std::string& cache_dir, CacheStatus* status) {
    CacheKey key{sc.geometry.R0, sc.geometry.Z0, sc.modes.N, sc.modes.M, sc.modes.L};
    if (!cache_dir.empty()) {
        if (auto hit = cache_get(cache_dir, key, status)) return std::move(*hit);
    } else if (status) {
        *status = CacheStatus::Miss;
    }
    CachePayload pl;
    pl.es = build_eigensystem(sc.geometry, sc.modes);
    pl.k_uni = build_K_uni(pl.es);
    pl.k_par = build_K_par(pl.es);
    if (!cache_dir.empty()) cache_put(cache_dir, key, pl);
    return pl;
}

void warm_cache(const Scenario& sc, const std::string& cache_dir) {
    if (cache_dir.empty()) throw std::invalid_argument("warm_cache: cache directory required");
    load_or_build(sc, cache_dir);
}

RunArtifacts run_scenario(const Scenario& sc, const RunOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();
    RunArtifacts art;
    RunReport& rep = art.report;

    const bool want_pbs = sc.pbs.enabled || opt.force_pbs;
    const bool want_baselines = sc.baselines.enabled || opt.force_baselines;

    rep.add("tool", "cylchan");
    rep.add("units.rho_m", sc.units.rho_m);
    rep.add("units.tau_s", sc.units.tau_s);
    rep.add("geometry.R0", sc.geometry.R0);
    rep.add("geometry.Z0", sc.geometry.Z0);
    rep.add("medium.D", sc.medium.D);
    rep.add("flow.v0", sc.flow.v0);
    rep.add("modes.q", std::to_string(sc.modes.N) + " " + std::to_string(sc.modes.M) + " " +
                           std::to_string(sc.modes.L));
    rep.add("modes.states", std::to_string(sc.modes.size()));
    rep.add("modes.full_count", std::to_string(sc.modes.full_mode_count()));

    const double d = sc.tx_rx_distance();
    rep.add("tx_rx_distance", d);
    if (sc.flow.v0 > 0.0 && d > 0.0) {
        const double alpha = dispersion_factor(sc.medium.D, d, sc.flow.v0, sc.geometry.R0);
        rep.add("alpha", alpha);
        rep.add("regime", regime_name(classify_regime(alpha)));
    } else {
        rep.add("regime", sc.flow.v0 > 0.0 ? "undefined (no observer)" : "pure-diffusion");
    }

    // Sampling grid shared by every curve.
    std::vector<double> times_norm(sc.sim.steps + 1);
    for (int k = 0; k <= sc.sim.steps; ++k) times_norm[k] = k * sc.sim.T;

    CacheStatus cache_status = CacheStatus::Miss;
    std::optional<CachePayload> payload;

    if (sc.run_tfm || !sc.output.snapshot_times.empty()) {
        const auto t0 = std::chrono::steady_clock::now();
        payload = load_or_build(sc, opt.cache_dir, &cache_status);
        rep.add("cache", opt.cache_dir.empty()
                             ? "off"
                             : (cache_status == CacheStatus::Hit
                                    ? "hit"
                                    : (cache_status == CacheStatus::Corrupt ? "rebuilt-corrupt"
                                                                            : "miss")));
        if (cache_status == CacheStatus::Corrupt)
            art.warnings.push_back("cache entry was corrupt and has been rebuilt");
        rep.add("t_geometry_s", seconds_since(t0));
    }

    SimResult sim;
    if (sc.run_tfm) {
        const auto t0 = std::chrono::steady_clock::now();
        const ClosedLoopMatrix ac =
            assemble_A_c(payload->es, sc.medium.D, payload->k_uni, payload->k_par, sc.flow.v0);

        SimProblem prob;
        prob.es = &payload->es;
        prob.ac = &ac;
        prob.release = sc.release;
        for (const auto& o : sc.observers) {
            prob.observers.push_back(o.obs);
            prob.observer_ids.push_back(o.id);
        }
        prob.sim = sc.sim;
        prob.tau_s = sc.units.tau_s;
        prob.discretize_opts.verify = sc.verify_exponential;
        prob.mode = opt.mode;
        for (double t : sc.output.snapshot_times) {
            const int step = static_cast<int>(std::llround(t / sc.sim.T));
            if (step >= 0 && step <= sc.sim.steps) prob.sim.snapshot_steps.push_back(step);
            else art.warnings.push_back("snapshot time outside the simulated horizon skipped");
        }

        sim = simulate(prob);
        rep.add("t_tfm_s", seconds_since(t0));
        art.tfm = sim.series;
        for (const auto& w : sim.series.warnings) art.warnings.push_back(w);

        if (!sim.discretize_residuals.empty()) {
            double worst = 0.0;
            for (double r : sim.discretize_residuals) worst = std::max(worst, r);
            rep.add("exp_verify_residual_max", worst);
        }
        if (!sim.mass.empty() && sim.mass.front() != 0.0) {
            double drift = 0.0;
            for (double m : sim.mass)
                drift = std::max(drift, std::fabs(m - sim.mass.front()));
            rep.add("mass_initial", sim.mass.front());
            rep.add("mass_drift_rel", drift / std::fabs(sim.mass.front()));
        }
        double peak_all = 0.0;
        for (const auto& col : sim.series.values)
            peak_all = std::max(peak_all, series_peak(col));
        art.tfm_imag_residue = sim.max_imag_residue;
        if (peak_all > 0.0) rep.add("imag_residue_rel", sim.max_imag_residue / peak_all);
        art.tfm_mass = sim.mass;

        for (size_t o = 0; o < sc.observers.size(); ++o) {
            const std::string& id = sc.observers[o].id;
            rep.add("tfm_peak." + id, series_peak(sim.series.values[o]));
            rep.add("tfm_peak_time_s." + id, peak_time(sim.series.times_s, sim.series.values[o]));
            rep.add("tfm_fwhm_s." + id, fwhm(sim.series.times_s, sim.series.values[o]));
        }
    }

    if (want_pbs) {
        const auto t0 = std::chrono::steady_clock::now();
        PbsProblem pp;
        pp.geom = sc.geometry;
        pp.medium = sc.medium;
        pp.flow = sc.flow;
        pp.release = sc.release;
        for (const auto& o : sc.observers) {
            pp.observers.push_back(o.obs);
            pp.observer_ids.push_back(o.id);
        }
        pp.sample_interval = sc.sim.T;
        pp.samples = sc.sim.steps;
        pp.cfg = sc.pbs.cfg;
        pp.tau_s = sc.units.tau_s;
        pp.mode = opt.mode;
        PbsResult pr = run_pbs(pp);
        rep.add("t_pbs_s", seconds_since(t0));
        rep.add("pbs_particle_weight", pr.particle_weight);
        rep.add("pbs_alive_fraction_final", pr.alive_fraction.back());
        art.pbs = std::move(pr.series);
        for (const auto& w : art.pbs->warnings) art.warnings.push_back(w);

        if (art.tfm) {
            for (size_t o = 0; o < sc.observers.size(); ++o) {
                const std::string& id = sc.observers[o].id;
                rep.add("rmse_tfm_vs_pbs." + id,
                        normalized_rmse(art.tfm->values[o], art.pbs->values[o]));
            }
        }
    }

    if (want_baselines) {
        const bool flow_wanted = sc.baselines.which != "dispersive";
        const bool disp_wanted = sc.baselines.which != "flow";
        rep.add("baseline_dispersive_model",
                "plug-flow advection-dispersion of the axial release marginal "
                "(Taylor-Aris effective diffusivity)");
        auto mk_series = [&](bool dispersive) {
            ConcentrationSeries s;
            s.times_s.resize(times_norm.size());
            for (size_t k = 0; k < times_norm.size(); ++k)
                s.times_s[k] = times_norm[k] * sc.units.tau_s;
            for (const auto& o : sc.observers) {
                s.observer_ids.push_back(o.id);
                s.values.push_back(
                    dispersive
                        ? dispersive_series(sc.release, sc.flow, sc.medium, sc.geometry,
                                            o.obs.x_rx, o.obs.volume(), times_norm)
                        : flow_dominant_series(sc.release, sc.flow, sc.geometry, o.obs.x_rx,
                                               o.obs.volume(), times_norm));
            }
            return s;
        };
        if (flow_wanted) art.baseline_flow = mk_series(false);
        if (disp_wanted && sc.medium.D > 0.0) art.baseline_dispersive = mk_series(true);
        if (art.tfm) {
            for (size_t o = 0; o < sc.observers.size(); ++o) {
                const std::string& id = sc.observers[o].id;
                if (art.baseline_flow)
                    rep.add("rmse_tfm_vs_flow_baseline." + id,
                            normalized_rmse(art.tfm->values[o], art.baseline_flow->values[o]));
                if (art.baseline_dispersive)
                    rep.add("rmse_tfm_vs_dispersive_baseline." + id,
                            normalized_rmse(art.tfm->values[o],
                                            art.baseline_dispersive->values[o]));
            }
        }
    }

    rep.add("t_total_s", seconds_since(t_start));
    for (const auto& w : art.warnings) rep.add("warning", w);

    if (opt.write_files) {
        std::filesystem::create_directories(sc.output.dir);
        auto emit = [&](const std::string& name, const ConcentrationSeries& s) {
            const std::string path = sc.output.dir + "/" + name;
            write_series_csv(path, s);
            art.files.push_back(path);
        };
        if (art.tfm) emit("series_tfm.csv", *art.tfm);
        if (art.pbs) emit("series_pbs.csv", *art.pbs);
        if (art.baseline_flow) emit("series_baseline_flow.csv", *art.baseline_flow);
        if (art.baseline_dispersive)
            emit("series_baseline_dispersive.csv", *art.baseline_dispersive);

        if (sc.run_tfm && !sc.output.snapshot_times.empty()) {
            for (double t : sc.output.snapshot_times) {
                const int step = static_cast<int>(std::llround(t / sc.sim.T));
                const auto it =
                    std::find(sim.stored_steps.begin(), sim.stored_steps.end(), step);
                if (it == sim.stored_steps.end()) continue;
                const auto& state = sim.stored_states[it - sim.stored_steps.begin()];
                SnapshotGrid g = reconstruct_snapshot(
                    payload->es, state, sc.output.plane, sc.output.phi, sc.output.grid_n1,
                    sc.output.grid_n2, step * sc.sim.T * sc.units.tau_s, opt.mode);
                char name[64];
                std::snprintf(name, sizeof name, "snapshot_%03d.csv",
                              static_cast<int>(&t - sc.output.snapshot_times.data()));
                const std::string path = sc.output.dir + "/" + name;
                write_snapshot(path, g);
                art.files.push_back(path);
            }
        }
        const std::string rpt = sc.output.dir + "/report.txt";
        write_report(rpt, rep);
        art.files.push_back(rpt);
    }
    return art;
}

void write_report(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report file " + path);
    for (const auto& [k, v] : report.entries) out << k << ": " << v << "\n";
}

} // namespace cylchan
