#pragma once

#include <string>
#include <vector>

#include "cylchan/geometry.hpp"
#include "cylchan/release.hpp"

namespace cylchan {

/// Transport classification by the dispersion factor alpha = 2 D d / (v0 R0^2).
enum class Regime { FlowDominant, Mixed, Dispersive };

/// alpha = 2 D d / (v0 R0^2); any consistent unit system (the group is
/// dimensionless). Pure diffusion (v0 = 0) has no dispersion factor and is
/// rejected.
double dispersion_factor(double D, double d, double v0, double R0);

/// Thresholds: alpha < 0.05 flow-dominant, alpha >= 1 dispersive, mixed
/// in between.
Regime classify_regime(double alpha);
std::string regime_name(Regime r);

/// Zero-diffusion limit: the release profile advected along the parabolic
/// characteristics, p(r, phi, z, t) = p_init(r, phi, z - v(r) t).
double flow_dominant_solution(const ReleaseProfile& p, const FlowField& flow,
                              const CylinderGeometry& g, const CylPoint& x, double t);

/// Effective axial diffusivity D (1 + Pe^2 / 48) with Pe = v_eff R0 / D.
double taylor_aris_deff(double D, double v_eff, double R0);

/// Plug-flow dispersion limit: cross-sectionally uniform 1-D transport with
/// mean velocity v_eff and effective diffusivity D_eff. The axial marginal of
/// the release is convolved with the Gaussian kernel of variance 2 D_eff t.
double dispersive_solution(const ReleaseProfile& p, const FlowField& flow,
                           const MediumParams& medium, const CylinderGeometry& g,
                           const CylPoint& x, double t);

/// Baseline curves sampled like a simulated series (cube-amount units).
std::vector<double> flow_dominant_series(const ReleaseProfile& p, const FlowField& flow,
                                         const CylinderGeometry& g, const CylPoint& x_rx,
                                         double cube_volume,
                                         const std::vector<double>& times_norm);
std::vector<double> dispersive_series(const ReleaseProfile& p, const FlowField& flow,
                                      const MediumParams& medium, const CylinderGeometry& g,
                                      const CylPoint& x_rx, double cube_volume,
                                      const std::vector<double>& times_norm);

} // namespace cylchan
