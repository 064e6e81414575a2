#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cylchan/cache.hpp"
#include "cylchan/scenario.hpp"

namespace cylchan {

struct RunOptions {
    std::string cache_dir; ///< empty disables the cache
    bool force_pbs = false;
    bool force_baselines = false;
    ExecMode mode = ExecMode::Parallel;
    bool write_files = true;
};

/// Ordered key-value report; serialized as "key: value" lines.
struct RunReport {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
    void add(const std::string& key, double value);
    const std::string* find(const std::string& key) const;
};

struct RunArtifacts {
    std::vector<std::string> files;
    RunReport report;
    std::optional<ConcentrationSeries> tfm;
    std::optional<ConcentrationSeries> pbs;
    std::optional<ConcentrationSeries> baseline_flow;
    std::optional<ConcentrationSeries> baseline_dispersive;
    std::vector<double> tfm_mass;
    double tfm_imag_residue = 0.0;
    std::vector<std::string> warnings;
};

/// Cache directory resolution: CYLCHAN_CACHE_DIR when set, else ./cylchan_cache.
std::string default_cache_dir();

/// Loads the geometry block cache or builds and stores it. cache_dir empty
/// means build-only.
CachePayload load_or_build(const Scenario& sc, const std::string& cache_dir,
                           CacheStatus* status = nullptr);

/// Only builds and stores the cache entry (the "cache warm" verb).
void warm_cache(const Scenario& sc, const std::string& cache_dir);

/// Full pipeline: model run, optional particle-simulation ground truth,
/// optional limiting-regime baselines, metrics report, artifact files.
RunArtifacts run_scenario(const Scenario& sc, const RunOptions& opt);

void write_report(const std::string& path, const RunReport& report);

} // namespace cylchan
