#pragma once

#include <cmath>
#include <stdexcept>

namespace cylchan {

/// Point in cylindrical coordinates (r, phi, z), phi in [-pi, pi].
struct CylPoint {
    double r = 0.0;
    double phi = 0.0;
    double z = 0.0;
};

/// Cylindrical duct 0 <= r <= R0, 0 <= z <= Z0 in normalized units.
struct CylinderGeometry {
    double R0 = 1.0;
    double Z0 = 10.0;

    void validate() const {
        if (!(R0 > 0.0)) throw std::invalid_argument("geometry.R0 must be > 0");
        if (!(Z0 > 0.0)) throw std::invalid_argument("geometry.Z0 must be > 0");
    }

    bool contains(const CylPoint& x, double slack = 0.0) const {
        return x.r >= -slack && x.r <= R0 + slack && x.z >= -slack && x.z <= Z0 + slack;
    }
};

/// Reference scales used to map physical quantities to normalized ones.
/// Lengths divide by rho, times divide by tau, diffusivities scale by tau/rho^2,
/// velocities by tau/rho.
struct UnitSystem {
    double rho_m = 1e-4;  ///< reference length in meters
    double tau_s = 100.0; ///< reference time in seconds

    void validate() const {
        if (!(rho_m > 0.0)) throw std::invalid_argument("units.rho must be > 0");
        if (!(tau_s > 0.0)) throw std::invalid_argument("units.tau must be > 0");
    }

    double length_to_norm(double meters) const { return meters / rho_m; }
    double length_to_phys(double norm) const { return norm * rho_m; }
    double time_to_norm(double seconds) const { return seconds / tau_s; }
    double time_to_phys(double norm) const { return norm * tau_s; }
    double diffusivity_to_norm(double m2_per_s) const { return m2_per_s * tau_s / (rho_m * rho_m); }
    double diffusivity_to_phys(double norm) const { return norm * rho_m * rho_m / tau_s; }
    double velocity_to_norm(double m_per_s) const { return m_per_s * tau_s / rho_m; }
    double velocity_to_phys(double norm) const { return norm * rho_m / tau_s; }
};

/// Diffusion coefficient, normalized.
struct MediumParams {
    double D = 2.5;

    void validate() const {
        if (!(D >= 0.0)) throw std::invalid_argument("medium.D must be >= 0");
    }
};

/// Axial laminar (Poiseuille) flow, v(r) = v0 (1 - r^2/R0^2).
struct FlowField {
    double v0 = 50.0; ///< peak axial velocity on the axis, normalized

    double v_eff() const { return 0.5 * v0; }

    double velocity(double r, const CylinderGeometry& g) const {
        return v0 * (1.0 - (r * r) / (g.R0 * g.R0));
    }

    void validate() const {
        if (!std::isfinite(v0)) throw std::invalid_argument("flow.v0 must be finite");
    }
};

inline double cyl_to_x(const CylPoint& p) { return p.r * std::cos(p.phi); }
inline double cyl_to_y(const CylPoint& p) { return p.r * std::sin(p.phi); }

} // namespace cylchan
