#include "cylchan/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cylchan {

namespace {

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace

void write_series_csv(const std::string& path, const ConcentrationSeries& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open series file " + path);
    out << "time_s";
    for (const auto& id : s.observer_ids) out << ", " << id;
    out << "\n";
    for (size_t k = 0; k < s.times_s.size(); ++k) {
        out << fmt15(s.times_s[k]);
        for (const auto& col : s.values) out << ", " << fmt15(col[k]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing series file " + path);
}

void write_snapshot(const std::string& path, const SnapshotGrid& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open snapshot file " + path);
    out << "# snapshot time_s=" << fmt15(g.time_s) << "\n";
    out << "# plane=" << g.plane;
    if (g.plane == "rz") out << " phi=" << fmt15(g.phi);
    out << "\n";
    out << "# n1=" << g.n1 << " a1_min=" << fmt15(g.a1_min) << " a1_max=" << fmt15(g.a1_max)
        << "\n";
    out << "# n2=" << g.n2 << " a2_min=" << fmt15(g.a2_min) << " a2_max=" << fmt15(g.a2_max)
        << "\n";
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            if (j) out << ", ";
            out << fmt15(g.values[static_cast<size_t>(i) * g.n2 + j]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("failed writing snapshot file " + path);
}

double series_peak(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("series_peak: empty series");
    return *std::max_element(v.begin(), v.end());
}

double peak_time(const std::vector<double>& times, const std::vector<double>& v) {
    if (v.empty() || times.size() != v.size())
        throw std::invalid_argument("peak_time: bad series");
    const size_t i = std::max_element(v.begin(), v.end()) - v.begin();
    return times[i];
}

double fwhm(const std::vector<double>& times, const std::vector<double>& v) {
    if (v.size() < 3 || times.size() != v.size()) return 0.0;
    const size_t ip = std::max_element(v.begin(), v.end()) - v.begin();
    const double half = 0.5 * v[ip];
    if (!(half > 0.0)) return 0.0;

    double t_lo = times.front();
    bool found_lo = false;
    for (size_t i = ip; i-- > 0;) {
        if (v[i] <= half) {
            const double f = (half - v[i]) / (v[i + 1] - v[i]);
            t_lo = times[i] + f * (times[i + 1] - times[i]);
            found_lo = true;
            break;
        }
    }
    double t_hi = times.back();
    bool found_hi = false;
    for (size_t i = ip + 1; i < v.size(); ++i) {
        if (v[i] <= half) {
            const double f = (v[i - 1] - half) / (v[i - 1] - v[i]);
            t_hi = times[i - 1] + f * (times[i] - times[i - 1]);
            found_hi = true;
            break;
        }
    }
    if (!found_lo || !found_hi) return 0.0;
    return t_hi - t_lo;
}

double normalized_rmse(const std::vector<double>& a, const std::vector<double>& ref) {
    if (a.empty() || a.size() != ref.size())
        throw std::invalid_argument("normalized_rmse: size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - ref[i];
        acc += d * d;
    }
    const double peak = series_peak(ref);
    if (!(peak > 0.0)) throw std::invalid_argument("normalized_rmse: reference peak is zero");
    return std::sqrt(acc / a.size()) / peak;
}

} // namespace cylchan
