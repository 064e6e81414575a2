#pragma once

#include <string>
#include <vector>

#include "cylchan/dynamics.hpp"
#include "cylchan/geometry.hpp"
#include "cylchan/modal.hpp"
#include "cylchan/pbs.hpp"
#include "cylchan/release.hpp"

namespace cylchan {

struct ObserverSpec {
    std::string id;
    CuboidObserver obs;
};

struct PbsSettings {
    bool enabled = false;
    PbsConfig cfg; ///< dt normalized after ingestion
};

struct BaselineSettings {
    bool enabled = false;
    std::string which = "both"; ///< flow | dispersive | both
};

struct OutputSettings {
    std::string dir = "out";
    std::vector<double> snapshot_times; ///< normalized
    std::string plane = "yz";
    double phi = 0.0; ///< rz plane cut
    int grid_n1 = 81;
    int grid_n2 = 201;
};

/// A fully normalized run description. Physical inputs are converted exactly
/// once, at ingestion.
struct Scenario {
    UnitSystem units;
    CylinderGeometry geometry;
    MediumParams medium;
    FlowField flow;
    ModeTable modes{0, 30, 200};
    ReleaseProfile release;
    std::vector<ObserverSpec> observers;
    SimulationConfig sim;
    bool run_tfm = true;
    bool verify_exponential = true;
    PbsSettings pbs;
    BaselineSettings baselines;
    OutputSettings output;

    /// Axial transmitter-receiver distance (first observer), used for the
    /// dispersion factor.
    double tx_rx_distance() const;
};

/// All ingestion problems of one file, each tagged with its key path.
struct ScenarioError : std::runtime_error {
    std::vector<std::string> items;
    explicit ScenarioError(std::vector<std::string> issues);
};

/// The scenario with every key at its default (the canonical duct used across
/// the test suite: R0 = 1, Z0 = 10, v0 = 50, D = 2.5, uniform release at
/// ze = 1, observer on the axis at z = 2).
Scenario default_scenario();

/// Parses a key-value scenario file with [section] headers. Unknown keys,
/// out-of-range values, and ill-placed supports are reported together in one
/// ScenarioError. An empty file yields default_scenario(). Values are plain
/// normalized numbers or carry a unit suffix ("100 um", "2.5e-12 m2/s",
/// "0.02 s") converted with the scenario's reference scales.
Scenario load_scenario(const std::string& path);

/// Same parser over an in-memory string (testing convenience).
Scenario parse_scenario(const std::string& text);

} // namespace cylchan
