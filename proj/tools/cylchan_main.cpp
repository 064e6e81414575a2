// Command-line front end: scenario runs, cache management, model-vs-oracle
// comparisons, and parameter sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cylchan/regimes.hpp"
#include "cylchan/run.hpp"

namespace {

cylchan::Scenario load(const std::string& path) {
    try {
        return cylchan::load_scenario(path);
    } catch (const cylchan::ScenarioError& e) {
        std::cerr << e.what() << "\n";
        std::exit(2);
    }
}

void print_summary(const cylchan::RunArtifacts& art) {
    for (const auto& [k, v] : art.report.entries)
        if (k == "alpha" || k == "regime" || k.rfind("rmse_", 0) == 0 ||
            k.rfind("tfm_peak", 0) == 0 || k == "t_total_s" || k == "warning")
            std::cout << k << ": " << v << "\n";
    for (const auto& f : art.files) std::cout << "wrote " << f << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cylchan - concentration dynamics in a cylindrical duct "
                 "(diffusion + laminar flow)"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string cache_dir = cylchan::default_cache_dir();
    bool no_cache = false;
    bool serial = false;
    app.add_option("--cache-dir", cache_dir, "cache directory (env CYLCHAN_CACHE_DIR)");
    app.add_flag("--no-cache", no_cache, "bypass the geometry cache");
    app.add_flag("--serial", serial, "run the serial reference kernels");

    auto* cmd_run = app.add_subcommand("run", "run a scenario and write its artifacts");
    cmd_run->add_option("scenario", scenario_path, "scenario file")->required();

    auto* cmd_cache = app.add_subcommand("cache", "cache management");
    auto* cmd_warm = cmd_cache->add_subcommand("warm", "precompute the geometry blocks");
    std::string warm_path;
    cmd_warm->add_option("scenario", warm_path, "scenario file")->required();

    auto* cmd_compare =
        app.add_subcommand("compare", "run model, particle simulation, and baselines");
    cmd_compare->add_option("scenario", scenario_path, "scenario file")->required();

    auto* cmd_sweep = app.add_subcommand("sweep", "repeat a scenario over parameter values");
    std::string sweep_param = "D";
    std::vector<double> sweep_values;
    std::string sweep_unit;
    cmd_sweep->add_option("scenario", scenario_path, "scenario file")->required();
    cmd_sweep->add_option("--param", sweep_param, "parameter to vary (D or v0)");
    cmd_sweep->add_option("--values", sweep_values, "values to apply")->required();
    cmd_sweep->add_option("--unit", sweep_unit, "unit of the values (e.g. m2/s)");

    CLI11_PARSE(app, argc, argv);

    cylchan::RunOptions opt;
    opt.cache_dir = no_cache ? "" : cache_dir;
    opt.mode = serial ? cylchan::ExecMode::Serial : cylchan::ExecMode::Parallel;

    try {
        if (cmd_warm->parsed()) {
            cylchan::Scenario sc = load(warm_path);
            cylchan::warm_cache(sc, opt.cache_dir.empty() ? cache_dir : opt.cache_dir);
            std::cout << "cache ready under " << (opt.cache_dir.empty() ? cache_dir : opt.cache_dir)
                      << "\n";
            return 0;
        }
        if (cmd_run->parsed()) {
            cylchan::Scenario sc = load(scenario_path);
            print_summary(cylchan::run_scenario(sc, opt));
            return 0;
        }
        if (cmd_compare->parsed()) {
            cylchan::Scenario sc = load(scenario_path);
            opt.force_pbs = true;
            opt.force_baselines = true;
            print_summary(cylchan::run_scenario(sc, opt));
            return 0;
        }
        if (cmd_sweep->parsed()) {
            cylchan::Scenario sc = load(scenario_path);
            if (sweep_param != "D" && sweep_param != "v0") {
                std::cerr << "sweep: --param must be D or v0\n";
                return 2;
            }
            const std::string base_dir = sc.output.dir;
            std::filesystem::create_directories(base_dir);
            std::ofstream summary(base_dir + "/sweep_summary.csv");
            summary << "value_norm, alpha, regime, peak, peak_time_s";
            if (sc.pbs.enabled) summary << ", rmse_tfm_vs_pbs";
            summary << "\n";
            for (size_t i = 0; i < sweep_values.size(); ++i) {
                double v = sweep_values[i];
                if (!sweep_unit.empty()) {
                    if (sweep_unit == "m2/s") v = sc.units.diffusivity_to_norm(v);
                    else if (sweep_unit == "um2/s") v = sc.units.diffusivity_to_norm(v * 1e-12);
                    else if (sweep_unit == "m/s") v = sc.units.velocity_to_norm(v);
                    else if (sweep_unit == "um/s") v = sc.units.velocity_to_norm(v * 1e-6);
                    else {
                        std::cerr << "sweep: unsupported unit " << sweep_unit << "\n";
                        return 2;
                    }
                }
                cylchan::Scenario run_sc = sc;
                if (sweep_param == "D") run_sc.medium.D = v;
                else run_sc.flow.v0 = v;
                char sub[64];
                std::snprintf(sub, sizeof sub, "%s/sweep_%02zu", base_dir.c_str(), i);
                run_sc.output.dir = sub;
                cylchan::RunArtifacts art = cylchan::run_scenario(run_sc, opt);
                const std::string* alpha = art.report.find("alpha");
                const std::string* regime = art.report.find("regime");
                const std::string& id = run_sc.observers.front().id;
                const std::string* peak = art.report.find("tfm_peak." + id);
                const std::string* pt = art.report.find("tfm_peak_time_s." + id);
                const std::string* rmse = art.report.find("rmse_tfm_vs_pbs." + id);
                summary << v << ", " << (alpha ? *alpha : "nan") << ", "
                        << (regime ? *regime : "?") << ", " << (peak ? *peak : "nan") << ", "
                        << (pt ? *pt : "nan");
                if (sc.pbs.enabled) summary << ", " << (rmse ? *rmse : "nan");
                summary << "\n";
                std::cout << sweep_param << " = " << v << " (normalized) -> " << sub << "\n";
            }
            std::cout << "wrote " << base_dir << "/sweep_summary.csv\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
