#include "cylchan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace cylchan {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string s = "scenario has " + std::to_string(issues.size()) + " problem(s):";
    for (const auto& i : issues) s += "\n  - " + i;
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

struct RawEntry {
    std::string key;
    std::string value;
    int line = 0;
};

using Sections = std::map<std::string, std::vector<RawEntry>>;

enum class Quantity { Dimensionless, Length, Time, Diffusivity, Velocity };

// All user input funnels through here: one number, optionally followed by a
// unit token converted with the reference scales.
class ValueParser {
public:
    ValueParser(const UnitSystem& units, std::vector<std::string>& issues)
        : units_(units), issues_(issues) {}

    bool number(const std::string& path, const std::string& text, Quantity kind, double& out) {
        std::vector<std::string> tok = tokens(text);
        size_t pos = 0;
        if (!take_number(path, tok, pos, kind, out)) return false;
        if (pos != tok.size()) {
            issues_.push_back(path + ": trailing input '" + tok[pos] + "'");
            return false;
        }
        return true;
    }

    bool number_list(const std::string& path, const std::string& text, Quantity kind,
                     std::vector<double>& out) {
        std::vector<std::string> tok = tokens(text);
        size_t pos = 0;
        out.clear();
        while (pos < tok.size()) {
            double v;
            if (!take_number(path, tok, pos, kind, v)) return false;
            out.push_back(v);
        }
        return true;
    }

    bool integer(const std::string& path, const std::string& text, long long& out) {
        try {
            size_t used = 0;
            out = std::stoll(trim(text), &used);
            if (used != trim(text).size()) throw std::invalid_argument("trailing");
            return true;
        } catch (...) {
            issues_.push_back(path + ": expected an integer, got '" + trim(text) + "'");
            return false;
        }
    }

    bool boolean(const std::string& path, const std::string& text, bool& out) {
        const std::string v = lower(trim(text));
        if (v == "true" || v == "on" || v == "yes" || v == "1") {
            out = true;
            return true;
        }
        if (v == "false" || v == "off" || v == "no" || v == "0") {
            out = false;
            return true;
        }
        issues_.push_back(path + ": expected a boolean, got '" + trim(text) + "'");
        return false;
    }

private:
    static std::vector<std::string> tokens(const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string t;
        while (in >> t) {
            // allow comma-separated lists
            for (auto& piece : split_commas(t))
                if (!piece.empty()) out.push_back(piece);
        }
        return out;
    }

    static std::vector<std::string> split_commas(const std::string& t) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : t) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    }

    bool take_number(const std::string& path, const std::vector<std::string>& tok, size_t& pos,
                     Quantity kind, double& out) {
        if (pos >= tok.size()) {
            issues_.push_back(path + ": missing value");
            return false;
        }
        double v;
        try {
            size_t used = 0;
            v = std::stod(tok[pos], &used);
            if (used != tok[pos].size()) throw std::invalid_argument("trailing");
        } catch (...) {
            issues_.push_back(path + ": expected a number, got '" + tok[pos] + "'");
            return false;
        }
        ++pos;
        if (pos < tok.size() && !looks_numeric(tok[pos])) {
            double factor;
            if (!unit_factor(path, tok[pos], kind, factor)) return false;
            v *= factor;
            ++pos;
        }
        out = v;
        return true;
    }

    static bool looks_numeric(const std::string& t) {
        return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '-' ||
                              t[0] == '+' || t[0] == '.');
    }

    bool unit_factor(const std::string& path, const std::string& unit, Quantity kind,
                     double& factor) {
        const std::string u = lower(unit);
        switch (kind) {
            case Quantity::Length: {
                double meters;
                if (u == "m") meters = 1.0;
                else if (u == "mm") meters = 1e-3;
                else if (u == "um") meters = 1e-6;
                else if (u == "nm") meters = 1e-9;
                else break;
                factor = units_.length_to_norm(meters);
                return true;
            }
            case Quantity::Time: {
                double seconds;
                if (u == "s") seconds = 1.0;
                else if (u == "ms") seconds = 1e-3;
                else if (u == "min") seconds = 60.0;
                else break;
                factor = units_.time_to_norm(seconds);
                return true;
            }
            case Quantity::Diffusivity: {
                double m2s;
                if (u == "m2/s") m2s = 1.0;
                else if (u == "mm2/s") m2s = 1e-6;
                else if (u == "um2/s") m2s = 1e-12;
                else break;
                factor = units_.diffusivity_to_norm(m2s);
                return true;
            }
            case Quantity::Velocity: {
                double ms;
                if (u == "m/s") ms = 1.0;
                else if (u == "mm/s") ms = 1e-3;
                else if (u == "um/s") ms = 1e-6;
                else if (u == "nm/s") ms = 1e-9;
                else break;
                factor = units_.velocity_to_norm(ms);
                return true;
            }
            case Quantity::Dimensionless:
                break;
        }
        issues_.push_back(path + ": unit '" + unit + "' not valid here");
        return false;
    }

    const UnitSystem& units_;
    std::vector<std::string>& issues_;
};

Sections read_sections(const std::string& text, std::vector<std::string>& issues) {
    static const std::vector<std::string> known = {"units", "geometry", "medium",  "flow",
                                                   "modes", "release",  "observers", "sim",
                                                   "pbs",   "baselines", "output"};
    Sections out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back("line " + std::to_string(lineno) + ": malformed section header");
                continue;
            }
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (std::find(known.begin(), known.end(), section) == known.end())
                issues.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        if (section.empty()) {
            issues.push_back("line " + std::to_string(lineno) + ": key outside any [section]");
            continue;
        }
        RawEntry e;
        e.key = lower(trim(line.substr(0, eq)));
        e.value = trim(line.substr(eq + 1));
        e.line = lineno;
        out[section].push_back(e);
    }
    return out;
}

const RawEntry* find_key(const Sections& s, const std::string& section, const std::string& key) {
    auto it = s.find(section);
    if (it == s.end()) return nullptr;
    for (const auto& e : it->second)
        if (e.key == key) return &e;
    return nullptr;
}

void check_known_keys(const Sections& s, const std::string& section,
                      const std::vector<std::string>& keys, std::vector<std::string>& issues) {
    auto it = s.find(section);
    if (it == s.end()) return;
    for (const auto& e : it->second)
        if (std::find(keys.begin(), keys.end(), e.key) == keys.end())
            issues.push_back(section + "." + e.key + ": unknown key (line " +
                             std::to_string(e.line) + ")");
}

} // namespace

ScenarioError::ScenarioError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), items(std::move(issues)) {}

double Scenario::tx_rx_distance() const {
    if (observers.empty()) return 0.0;
    return std::fabs(observers.front().obs.x_rx.z - release.ze);
}

Scenario default_scenario() {
    Scenario sc;
    sc.units = UnitSystem{1e-4, 100.0};
    sc.geometry = CylinderGeometry{1.0, 10.0};
    sc.medium = MediumParams{2.5};
    sc.flow = FlowField{50.0};
    sc.modes = ModeTable{0, 30, 200};
    sc.release = ReleaseProfile{}; // uniform, z0 = 0.3, ze = 1
    ObserverSpec rx;
    rx.id = "rx";
    rx.obs.x_rx = CylPoint{0.0, 0.5 * M_PI, 2.0};
    rx.obs.edge = 0.04;
    sc.observers.push_back(rx);
    sc.sim.T = 2e-4;
    sc.sim.steps = 900;
    sc.sim.guard_enabled = true;
    sc.sim.t_obs_guard = (sc.geometry.Z0 - sc.release.ze) / sc.flow.v0;
    sc.sim.state_decimation = 10;
    return sc;
}

Scenario parse_scenario(const std::string& text) {
    std::vector<std::string> issues;
    Sections sections = read_sections(text, issues);

    Scenario sc = default_scenario();

    // Reference scales first; everything else converts through them.
    {
        check_known_keys(sections, "units", {"rho", "tau"}, issues);
        ValueParser vp(sc.units, issues); // units of the units block are absolute
        if (const RawEntry* e = find_key(sections, "units", "rho")) {
            double meters = sc.units.rho_m;
            std::vector<std::string> tmp_issues;
            UnitSystem meters_units{1.0, 1.0}; // "um" etc. resolve to meters
            ValueParser meters_parser(meters_units, tmp_issues);
            if (meters_parser.number("units.rho", e->value, Quantity::Length, meters))
                sc.units.rho_m = meters;
            issues.insert(issues.end(), tmp_issues.begin(), tmp_issues.end());
        }
        if (const RawEntry* e = find_key(sections, "units", "tau")) {
            double seconds = sc.units.tau_s;
            std::vector<std::string> tmp_issues;
            UnitSystem seconds_units{1.0, 1.0};
            ValueParser seconds_parser(seconds_units, tmp_issues);
            if (seconds_parser.number("units.tau", e->value, Quantity::Time, seconds))
                sc.units.tau_s = seconds;
            issues.insert(issues.end(), tmp_issues.begin(), tmp_issues.end());
        }
        if (!(sc.units.rho_m > 0.0)) issues.push_back("units.rho: must be > 0");
        if (!(sc.units.tau_s > 0.0)) issues.push_back("units.tau: must be > 0");
    }

    ValueParser vp(sc.units, issues);
    auto get_number = [&](const char* section, const char* key, Quantity kind, double& out) {
        if (const RawEntry* e = find_key(sections, section, key))
            vp.number(std::string(section) + "." + key, e->value, kind, out);
    };
    auto get_int = [&](const char* section, const char* key, long long& out) {
        if (const RawEntry* e = find_key(sections, section, key))
            vp.integer(std::string(section) + "." + key, e->value, out);
    };
    auto get_bool = [&](const char* section, const char* key, bool& out) {
        if (const RawEntry* e = find_key(sections, section, key))
            vp.boolean(std::string(section) + "." + key, e->value, out);
    };

    check_known_keys(sections, "geometry", {"r0", "z0"}, issues);
    get_number("geometry", "r0", Quantity::Length, sc.geometry.R0);
    get_number("geometry", "z0", Quantity::Length, sc.geometry.Z0);
    if (!(sc.geometry.R0 > 0.0)) issues.push_back("geometry.R0: must be > 0");
    if (!(sc.geometry.Z0 > 0.0)) issues.push_back("geometry.Z0: must be > 0");

    check_known_keys(sections, "medium", {"d"}, issues);
    get_number("medium", "d", Quantity::Diffusivity, sc.medium.D);
    if (!(sc.medium.D >= 0.0)) issues.push_back("medium.D: must be >= 0");

    check_known_keys(sections, "flow", {"v0"}, issues);
    get_number("flow", "v0", Quantity::Velocity, sc.flow.v0);
    if (!(sc.flow.v0 >= 0.0)) issues.push_back("flow.v0: must be >= 0");

    check_known_keys(sections, "modes", {"n", "m", "l"}, issues);
    {
        long long n = sc.modes.N, m = sc.modes.M, l = sc.modes.L;
        get_int("modes", "n", n);
        get_int("modes", "m", m);
        get_int("modes", "l", l);
        if (n < 0) issues.push_back("modes.N: must be >= 0");
        if (m < 1) issues.push_back("modes.M: must be >= 1");
        if (l < 1) issues.push_back("modes.L: must be >= 1");
        sc.modes.N = static_cast<int>(n);
        sc.modes.M = static_cast<int>(m);
        sc.modes.L = static_cast<int>(l);
    }

    check_known_keys(sections, "release",
                     {"kind", "z0", "ze", "r0", "re", "phi0", "phie", "amplitude"}, issues);
    if (const RawEntry* e = find_key(sections, "release", "kind")) {
        const std::string k = lower(trim(e->value));
        if (k == "uniform") sc.release.kind = ReleaseProfile::Kind::Uniform;
        else if (k == "point") sc.release.kind = ReleaseProfile::Kind::Point;
        else issues.push_back("release.kind: expected 'uniform' or 'point', got '" + k + "'");
    }
    get_number("release", "z0", Quantity::Length, sc.release.z0);
    get_number("release", "ze", Quantity::Length, sc.release.ze);
    get_number("release", "r0", Quantity::Length, sc.release.r0);
    get_number("release", "re", Quantity::Length, sc.release.re);
    get_number("release", "phi0", Quantity::Dimensionless, sc.release.phi0);
    get_number("release", "phie", Quantity::Dimensionless, sc.release.phie);
    get_number("release", "amplitude", Quantity::Dimensionless, sc.release.amplitude);
    try {
        sc.release.validate(sc.geometry);
    } catch (const std::exception& e) {
        issues.push_back(std::string("release: ") + e.what());
    }

    if (auto it = sections.find("observers"); it != sections.end()) {
        sc.observers.clear();
        for (const auto& e : it->second) {
            std::vector<double> vals;
            if (!vp.number_list("observers." + e.key, e.value, Quantity::Dimensionless, vals))
                continue;
            if (vals.size() != 3 && vals.size() != 4) {
                issues.push_back("observers." + e.key + ": expected 'r phi z [edge]'");
                continue;
            }
            ObserverSpec spec;
            spec.id = e.key;
            spec.obs.x_rx = CylPoint{vals[0], vals[1], vals[2]};
            if (vals.size() == 4) spec.obs.edge = vals[3];
            try {
                spec.obs.validate(sc.geometry);
            } catch (const std::exception& ex) {
                issues.push_back("observers." + e.key + ": " + ex.what());
                continue;
            }
            sc.observers.push_back(spec);
        }
        if (sc.observers.empty())
            issues.push_back("observers: at least one valid observer is required");
    }

    check_known_keys(sections, "sim",
                     {"t", "t_end", "steps", "guard", "decimation", "tfm", "exp_verify"}, issues);
    get_number("sim", "t", Quantity::Time, sc.sim.T);
    if (!(sc.sim.T > 0.0)) issues.push_back("sim.T: must be > 0");
    bool steps_given = false;
    if (const RawEntry* e = find_key(sections, "sim", "steps")) {
        long long st = sc.sim.steps;
        if (vp.integer("sim.steps", e->value, st)) {
            if (st < 0) issues.push_back("sim.steps: must be >= 0");
            sc.sim.steps = static_cast<int>(st);
            steps_given = true;
        }
    }
    if (const RawEntry* e = find_key(sections, "sim", "t_end")) {
        double t_end = sc.sim.steps * sc.sim.T;
        if (vp.number("sim.t_end", e->value, Quantity::Time, t_end) && sc.sim.T > 0.0) {
            if (steps_given)
                issues.push_back("sim.t_end: give either steps or t_end, not both");
            else
                sc.sim.steps = static_cast<int>(std::llround(t_end / sc.sim.T));
        }
    }
    bool guard_numeric = false;
    if (const RawEntry* e = find_key(sections, "sim", "guard")) {
        const std::string v = lower(trim(e->value));
        if (v == "on" || v == "auto") {
            sc.sim.guard_enabled = true;
        } else if (v == "off") {
            sc.sim.guard_enabled = false;
        } else {
            double g = sc.sim.t_obs_guard;
            if (vp.number("sim.guard", e->value, Quantity::Time, g)) {
                sc.sim.guard_enabled = true;
                sc.sim.t_obs_guard = g;
                guard_numeric = true;
            }
        }
    }
    if (sc.sim.guard_enabled && !guard_numeric) {
        // auto value: first arrival of the fastest streamline at the far end
        sc.sim.t_obs_guard = sc.flow.v0 > 0.0
                                 ? (sc.geometry.Z0 - sc.release.ze) / sc.flow.v0
                                 : std::numeric_limits<double>::infinity();
    }
    {
        long long dec = sc.sim.state_decimation;
        get_int("sim", "decimation", dec);
        if (dec < 0) issues.push_back("sim.decimation: must be >= 0");
        sc.sim.state_decimation = static_cast<int>(dec);
    }
    get_bool("sim", "tfm", sc.run_tfm);
    get_bool("sim", "exp_verify", sc.verify_exponential);

    check_known_keys(sections, "pbs", {"enabled", "n_tx", "dt", "realizations", "seed"}, issues);
    get_bool("pbs", "enabled", sc.pbs.enabled);
    {
        long long v = sc.pbs.cfg.n_tx;
        get_int("pbs", "n_tx", v);
        if (v < 1) issues.push_back("pbs.n_tx: must be >= 1");
        sc.pbs.cfg.n_tx = static_cast<int>(v);
        v = sc.pbs.cfg.realizations;
        get_int("pbs", "realizations", v);
        if (v < 1) issues.push_back("pbs.realizations: must be >= 1");
        sc.pbs.cfg.realizations = static_cast<int>(v);
        get_number("pbs", "dt", Quantity::Time, sc.pbs.cfg.dt);
        if (!(sc.pbs.cfg.dt > 0.0)) issues.push_back("pbs.dt: must be > 0");
        long long seed = static_cast<long long>(sc.pbs.cfg.seed);
        get_int("pbs", "seed", seed);
        sc.pbs.cfg.seed = static_cast<uint64_t>(seed);
    }

    check_known_keys(sections, "baselines", {"enabled", "which"}, issues);
    get_bool("baselines", "enabled", sc.baselines.enabled);
    if (const RawEntry* e = find_key(sections, "baselines", "which")) {
        const std::string w = lower(trim(e->value));
        if (w == "flow" || w == "dispersive" || w == "both") sc.baselines.which = w;
        else issues.push_back("baselines.which: expected flow|dispersive|both, got '" + w + "'");
    }

    check_known_keys(sections, "output", {"dir", "snapshots", "plane", "phi", "grid"}, issues);
    if (const RawEntry* e = find_key(sections, "output", "dir")) sc.output.dir = trim(e->value);
    if (const RawEntry* e = find_key(sections, "output", "snapshots"))
        vp.number_list("output.snapshots", e->value, Quantity::Time, sc.output.snapshot_times);
    if (const RawEntry* e = find_key(sections, "output", "plane")) {
        const std::string p = lower(trim(e->value));
        if (p == "yz" || p == "rz") sc.output.plane = p;
        else issues.push_back("output.plane: expected yz|rz, got '" + p + "'");
    }
    get_number("output", "phi", Quantity::Dimensionless, sc.output.phi);
    if (const RawEntry* e = find_key(sections, "output", "grid")) {
        std::vector<double> vals;
        if (vp.number_list("output.grid", e->value, Quantity::Dimensionless, vals)) {
            if (vals.size() == 2 && vals[0] >= 2 && vals[1] >= 2) {
                sc.output.grid_n1 = static_cast<int>(vals[0]);
                sc.output.grid_n2 = static_cast<int>(vals[1]);
            } else {
                issues.push_back("output.grid: expected two counts >= 2");
            }
        }
    }

    if (!issues.empty()) throw ScenarioError(std::move(issues));
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError({"cannot open scenario file '" + path + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace cylchan
