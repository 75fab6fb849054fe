#pragma once
// Bohmian velocity field for one angular sector with |kappa_j| = 1,
// trajectory integration, and the near-singularity asymptotics.

#include <vector>

#include "srn/radial.hpp"

namespace srn {

struct ConfigPoint {
    double r, theta, phi;
};

struct VelocitySample {
    double v1, v2, v3;  // dr/dt, dtheta/dt, dphi/dt
};

struct Current4 {
    double j0, j1, j2, j3;
};

struct TrajectoryPoint {
    double t, r, theta, phi, R;
};

// Frozen snapshot of a one-sector state with interpolation in R.
class SectorField {
  public:
    SectorField(MiniFockState state, const RadialGrid& grid, const TortoiseMap& map,
                const AngularSector& sec);

    // interpolated (phi+, phi-) at tortoise coordinate R; cubic Hermite in the
    // interior, {1, R^{1/3}} boundary fit below the third node
    std::pair<cplx, cplx> phi_at(double R) const;

    const TortoiseMap& map() const { return *map_; }
    const AngularSector& sector() const { return sec_; }
    const RadialGrid& grid() const { return grid_; }
    const MiniFockState& state() const { return state_; }
    BoundaryData boundary() const { return bd_; }
    int sgn_mk() const;  // sgn(m_j kappa_j)

  private:
    MiniFockState state_;
    RadialGrid grid_;
    const TortoiseMap* map_;
    AngularSector sec_;
    BoundaryData bd_;
    cplx fit_p_[2], fit_m_[2];  // {1, R^{1/3}} coefficients near the boundary
};

Current4 current_components(const SectorField& f, const ConfigPoint& p);
VelocitySample velocity_field(const SectorField& f, const ConfigPoint& p);

struct AsymptoticCoeffs {
    double C_rad;      // r(t) = C_rad |t-t0|^{1/3}
    double C_az;       // phi(t) = phi0 + sgn(t-t0) C_az |t-t0|^{1/3}
    double phi_slope;  // dphi/dr at r=0
    double R_slope;    // dR/dt = C_rad^3/(3Q^2)
    int direction;     // +1 emission (Im[c-* c+] < 0), -1 absorption
};
AsymptoticCoeffs asymptotic_coeffs(cplx cm, cplx cp, const MetricParams& mp,
                                   const AngularSector& sec);

struct TrajectoryOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double r_min = 0.0;        // 0: default 1e-3 |Q| handoff radius
    double sample_dt = 0.0;    // 0: store every accepted step
    double rho_floor = 1e-30;  // stop when the density drops below this
};

struct TrajectoryResult {
    std::vector<TrajectoryPoint> points;
    bool hit_singularity = false;
    double t_hit = 0.0;  // asymptote arrival time at r = 0 (if hit)
    bool density_stop = false;
};

// Integrates dr/dt = v1, dphi/dt = v3 (theta constant in-sector) in the frozen
// field from t0 to t1; below r_min the closed-form cube-root asymptote takes over.
TrajectoryResult integrate_trajectory(const SectorField& f, const ConfigPoint& start, double t0,
                                      double t1, const TrajectoryOptions& opt = {});

struct AsymptoticsReport {
    double exp_r;        // fitted exponent of r(t)
    double pref_r;       // fitted prefactor vs C_rad
    double C_rad_ref;
    double slope_phi;    // fitted dphi/dr
    double slope_phi_ref;
    double R_slope_fit;
    double R_slope_ref;
    double theta_drift;  // max |theta - theta0| along the trajectory
    bool hit;
};

AsymptoticsReport verify_trajectory_asymptotics(const SectorField& f, double r_start,
                                                double fit_lo, double fit_hi);

}  // namespace srn
