#include "cylchan/regimes.hpp"

#include <cmath>
#include <stdexcept>

#include "cylchan/quadrature.hpp"

namespace cylchan {

double dispersion_factor(double D, double d, double v0, double R0) {
    if (!(v0 > 0.0))
        throw std::invalid_argument("dispersion_factor: undefined for v0 <= 0 (pure diffusion)");
    if (!(R0 > 0.0)) throw std::invalid_argument("dispersion_factor: R0 must be > 0");
    return 2.0 * D * d / (v0 * R0 * R0);
}

Regime classify_regime(double alpha) {
    if (alpha < 0.05) return Regime::FlowDominant;
    if (alpha >= 1.0) return Regime::Dispersive;
    return Regime::Mixed;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::FlowDominant: return "flow-dominant";
        case Regime::Mixed: return "mixed";
        case Regime::Dispersive: return "dispersive";
    }
    return "unknown";
}

double flow_dominant_solution(const ReleaseProfile& p, const FlowField& flow,
                              const CylinderGeometry& g, const CylPoint& x, double t) {
    const double z_src = x.z - flow.velocity(x.r, g) * t;
    double v = p.amplitude * raised_cosine(z_src, p.z0, p.ze);
    if (p.kind == ReleaseProfile::Kind::Point) {
        v *= raised_cosine(x.r, p.r0, p.re);
        const double dphi = std::atan2(std::sin(x.phi - p.phie), std::cos(x.phi - p.phie));
        v *= raised_cosine(dphi, p.phi0, 0.0);
    }
    return v;
}

double taylor_aris_deff(double D, double v_eff, double R0) {
    if (!(D > 0.0)) throw std::invalid_argument("taylor_aris_deff: D must be > 0");
    const double pe = v_eff * R0 / D;
    return D * (1.0 + pe * pe / 48.0);
}

namespace {

// Cross-sectional average amplitude of the release's axial marginal.
double marginal_amplitude(const ReleaseProfile& p, const CylinderGeometry& g) {
    if (p.kind == ReleaseProfile::Kind::Uniform) return p.amplitude;
    const double radial = p.re * p.r0 * 0.5; // int rc(r - re) r dr
    const double angular = 0.5 * p.phi0;
    return p.amplitude * radial * angular / (M_PI * g.R0 * g.R0);
}

} // namespace

double dispersive_solution(const ReleaseProfile& p, const FlowField& flow,
                           const MediumParams& medium, const CylinderGeometry& g,
                           const CylPoint& x, double t) {
    const double amp = marginal_amplitude(p, g);
    if (t <= 0.0) return amp * raised_cosine(x.z, p.z0, p.ze);
    const double deff = taylor_aris_deff(medium.D, flow.v_eff(), g.R0);
    const double var = 2.0 * deff * t;
    const double drift = flow.v_eff() * t;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
    const double a = p.ze - 0.5 * p.z0;
    const double b = p.ze + 0.5 * p.z0;
    return amp * integrate_adaptive(
                     [&](double zp) {
                         const double u = x.z - drift - zp;
                         return raised_cosine(zp, p.z0, p.ze) * norm *
                                std::exp(-0.5 * u * u / var);
                     },
                     a, b, 1e-10, 1e-12, 32, 4096, "dispersive convolution");
}

std::vector<double> flow_dominant_series(const ReleaseProfile& p, const FlowField& flow,
                                         const CylinderGeometry& g, const CylPoint& x_rx,
                                         double cube_volume,
                                         const std::vector<double>& times_norm) {
    std::vector<double> out(times_norm.size());
    for (size_t i = 0; i < times_norm.size(); ++i)
        out[i] = cube_volume * flow_dominant_solution(p, flow, g, x_rx, times_norm[i]);
    return out;
}

std::vector<double> dispersive_series(const ReleaseProfile& p, const FlowField& flow,
                                      const MediumParams& medium, const CylinderGeometry& g,
                                      const CylPoint& x_rx, double cube_volume,
                                      const std::vector<double>& times_norm) {
    std::vector<double> out(times_norm.size());
    for (size_t i = 0; i < times_norm.size(); ++i)
        out[i] = cube_volume * dispersive_solution(p, flow, medium, g, x_rx, times_norm[i]);
    return out;
}

} // namespace cylchan
