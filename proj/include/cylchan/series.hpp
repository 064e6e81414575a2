#pragma once

#include <string>
#include <vector>

namespace cylchan {

/// Sampled concentration curves at named observers, plus run warnings.
/// Times are in physical seconds; values keep the normalized concentration
/// scale of the release profile.
struct ConcentrationSeries {
    std::vector<double> times_s;
    std::vector<std::string> observer_ids;
    std::vector<std::vector<double>> values; ///< [observer][sample]
    std::vector<std::string> warnings;
};

/// CSV writer: header "time_s, <id>, ..." and 15 significant digits.
void write_series_csv(const std::string& path, const ConcentrationSeries& s);

/// Planar field snapshot, row-major over (axis1, axis2).
struct SnapshotGrid {
    std::string plane;    ///< "yz" (x = 0 cut) or "rz" (fixed phi)
    double time_s = 0.0;
    double phi = 0.0;     ///< rz plane only
    int n1 = 0;           ///< samples along y (or r)
    int n2 = 0;           ///< samples along z
    double a1_min = 0.0, a1_max = 0.0;
    double a2_min = 0.0, a2_max = 0.0;
    std::vector<double> values; ///< n1 * n2 row-major, first axis outer
};

void write_snapshot(const std::string& path, const SnapshotGrid& g);

// Series metrics used by the comparison reports.

/// Largest value of the curve.
double series_peak(const std::vector<double>& v);

/// Time of the largest value.
double peak_time(const std::vector<double>& times, const std::vector<double>& v);

/// Full width at half maximum with linear interpolation of the crossings;
/// returns 0 when the curve never reaches half of its peak on both sides.
double fwhm(const std::vector<double>& times, const std::vector<double>& v);

/// sqrt(mean((a - ref)^2)) / max(ref) over the common sample count.
double normalized_rmse(const std::vector<double>& a, const std::vector<double>& ref);

} // namespace cylchan
