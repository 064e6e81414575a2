#pragma once

#include <stdexcept>
#include <string>

#include "cylchan/geometry.hpp"

namespace cylchan {

/// Raised cosine bump of width chi0 centered at chi_e: peak 1, compact support
/// [chi_e - chi0/2, chi_e + chi0/2], zero outside.
double raised_cosine(double chi, double chi0, double chi_e);

/// Smooth particle release profile. "uniform" fills the cross section and is
/// shaped only along z; "point" is a product of raised cosines in r, phi, z.
struct ReleaseProfile {
    enum class Kind { Uniform, Point };
    Kind kind = Kind::Uniform;

    double amplitude = 1.0;

    // axial factor (both kinds)
    double z0 = 0.3;
    double ze = 1.0;

    // radial / azimuthal factors (point kind)
    double r0 = 0.4;
    double re = 0.5;
    double phi0 = M_PI / 4.0;
    double phie = M_PI / 2.0;

    void validate(const CylinderGeometry& g) const;
};

/// Profile value at a point of the cylinder. The azimuthal factor is evaluated
/// on the wrapped angular distance, so supports may straddle +-pi.
double eval_release(const ReleaseProfile& p, const CylPoint& x, const CylinderGeometry& g);

/// Total released amount, integral of the profile over the cylinder volume.
/// Closed form: the raised cosine integrates to half its width.
double release_mass(const ReleaseProfile& p, const CylinderGeometry& g);

} // namespace cylchan
