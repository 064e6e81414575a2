#include "cylchan/release.hpp"

#include <cmath>

namespace cylchan {

double raised_cosine(double chi, double chi0, double chi_e) {
    if (!(chi0 > 0.0)) throw std::invalid_argument("raised_cosine: width must be > 0");
    const double u = chi - chi_e;
    if (std::fabs(u) > 0.5 * chi0) return 0.0;
    return 0.5 * (1.0 + std::cos(2.0 * M_PI / chi0 * u));
}

void ReleaseProfile::validate(const CylinderGeometry& g) const {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("release.amplitude must be >= 0");
    if (!(z0 > 0.0)) throw std::invalid_argument("release.z0 must be > 0");
    if (ze - 0.5 * z0 < 0.0 || ze + 0.5 * z0 > g.Z0)
        throw std::invalid_argument("release: z support must lie inside [0, Z0]");
    if (kind == Kind::Point) {
        if (!(r0 > 0.0)) throw std::invalid_argument("release.r0 must be > 0");
        if (!(phi0 > 0.0) || phi0 > 2.0 * M_PI)
            throw std::invalid_argument("release.phi0 must be in (0, 2*pi]");
        if (re - 0.5 * r0 < 0.0 || re + 0.5 * r0 > g.R0)
            throw std::invalid_argument("release: r support must lie inside [0, R0]");
    }
}

double eval_release(const ReleaseProfile& p, const CylPoint& x, const CylinderGeometry& g) {
    if (!g.contains(x)) return 0.0;
    double v = p.amplitude * raised_cosine(x.z, p.z0, p.ze);
    if (p.kind == ReleaseProfile::Kind::Point) {
        v *= raised_cosine(x.r, p.r0, p.re);
        const double dphi = std::atan2(std::sin(x.phi - p.phie), std::cos(x.phi - p.phie));
        v *= raised_cosine(dphi, p.phi0, 0.0);
    }
    return v;
}

double release_mass(const ReleaseProfile& p, const CylinderGeometry& g) {
    const double axial = 0.5 * p.z0;
    if (p.kind == ReleaseProfile::Kind::Uniform)
        return p.amplitude * M_PI * g.R0 * g.R0 * axial;
    // int rc(r - re) r dr = re * r0 / 2 (the odd part integrates to zero)
    const double radial = p.re * p.r0 * 0.5;
    const double angular = 0.5 * p.phi0;
    return p.amplitude * radial * angular * axial;
}

} // namespace cylchan
