#pragma once
// Bohm-Bell jump process on {vacuum} + (0,inf) x S^2 for one sector with
// |kappa_j| = 1: Born-distributed initialization, Bohmian motion, absorption
// at the singularity, stochastic emission, and Monte-Carlo equivariance
// checks against the co-evolved wave function.

#include <cstdint>
#include <vector>

#include "srn/bohm.hpp"
#include "srn/radial.hpp"
#include "srn/rng.hpp"

namespace srn {

struct Configuration {
    bool vacuum = true;
    ConfigPoint pt{0.0, 0.0, 0.0};
};

struct ProcessEvent {
    double t;
    int walker;
    enum Kind { absorption = 0, emission = 1 } kind;
    double theta, phi;  // direction (emission) or last direction (absorption)
};

struct ProcessSample {
    double t;
    int walker;
    Configuration cfg;
};

struct ProcessRecord {
    uint64_t seed = 0;
    std::vector<ProcessEvent> events;     // ordered by (t, walker)
    std::vector<ProcessSample> samples;   // checkpoint configurations
};

struct CheckpointStats {
    double t;
    double born_p0;       // |psi0|^2 at the checkpoint
    double emp_p0;
    double z_p0;          // binomial z-score
    double tv_radial;     // TV distance, empirical radial law vs |phi|^2 dR
    double tv_bound;      // mean + 3 sigma of TV under the Born hypothesis
    double chi2;          // radial chi-square statistic
    int chi2_dof;
};

struct EquivarianceReport {
    std::vector<CheckpointStats> checkpoints;
    int absorptions = 0;
    int emissions = 0;
    bool pass = true;  // all checkpoints within the 3 sigma bounds
};

// Total emission rate 2 max{0, -Im[c-* c+]} / (|Q| |psi0|^2) for
// short-distance coefficients in the |Q|^{1/2}-weighted convention.
inline double jump_rate_formula(cplx cm, cplx cp, cplx psi0, double Q) {
    const double p0 = std::norm(psi0);
    if (p0 == 0.0 || Q == 0.0) throw std::runtime_error("jump_rate_formula: undefined");
    return 2.0 * std::max(0.0, -(std::conj(cm) * cp).imag()) / (std::fabs(Q) * p0);
}

// Rate of the state: the extracted boundary values are the radial limits,
// smaller than the weighted coefficients by |Q|^{1/2} each.
double jump_rate(const MiniFockState& s, const RadialGrid& grid, const MetricParams& mp);

// Born sampling of the initial configuration; angular part is uniform for
// |kappa_j| = 1 sectors.
Configuration sample_initial(const MiniFockState& s, const RadialGrid& grid,
                             const TortoiseMap& map, PhiloxRng& rng);

struct ProcessParams {
    int n_walkers = 1000;
    uint64_t seed = 1;
    double horizon = 1.0;
    double dt = 1e-3;        // process step; refined automatically if sigma dt > 0.1
    int checkpoints = 10;
    int sample_walkers = 0;  // how many walkers to log in ProcessRecord samples
    int threads = 1;
};

class BellProcess {
  public:
    BellProcess(const SectorHamiltonian& H, MiniFockState initial, ProcessParams params);

    // co-evolves the wave function and the walker ensemble
    ProcessRecord run(EquivarianceReport* report = nullptr);

  private:
    const SectorHamiltonian* H_;
    MiniFockState psi0_;
    ProcessParams par_;
    bool flagged_p0_ = false;
};

}  // namespace srn
