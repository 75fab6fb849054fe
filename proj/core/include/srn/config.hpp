#pragma once
// Experiment configuration: INI-style nested key-value files, round-trip
// parse/serialize, validation against the module preconditions, and the
// initial-state library.

#include <string>

#include "srn/bellprocess.hpp"

namespace srn {

struct ExperimentConfig {
    // [metric]
    double Q = 2.0, M = 1.0, q = 0.1, m = 0.5;
    // [sector]
    int mj2 = 1, kj = -1;
    // [ibc]
    double a1 = 1.0, a2 = 0.0, a3 = 0.0, a4 = 1.0;
    double g_re = 0.5, g_im = 0.0;
    bool coupled = true;
    double theta = 0.0;
    // [grid]
    double dR = 0.01;
    int N = 800;
    // [stepper]
    double dt = 0.005;
    int steps = 400;
    int snapshot_stride = 100;  // 0: only the final snapshot
    // [initial]: vacuum | gaussian | boundary
    std::string initial = "vacuum";
    double center = 2.0, width = 0.4;
    double cp_re = 1.0, cp_im = 0.0, cm_re = 0.0, cm_im = 1.0;
    double vacuum_weight = 0.0;  // |psi0|^2 share of the initial norm
    // [trajectory]
    double r_start = 0.0;  // 0: derived from the grid midpoint
    double t_span = 1.0;
    double fit_lo = 1e-3, fit_hi = 1e-2;  // r-window for the asymptotics fit
    // [process]
    int n_walkers = 10000;
    uint64_t seed = 1;
    double horizon = 1.0;
    double process_dt = 0.0;  // 0: same as stepper dt
    int checkpoints = 10;
    int sample_walkers = 0;
    double handoff = 0.0;  // 0: default 1e-3 |Q|
    // [output]
    std::string out_dir = "out";
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// FNV-1a over the canonical serialization; stamped into output files
uint64_t config_hash(const ExperimentConfig& cfg);

MetricParams metric_of(const ExperimentConfig& cfg);
AngularSector sector_of(const ExperimentConfig& cfg);
IBCParams ibc_of(const ExperimentConfig& cfg);
RadialGrid grid_of(const ExperimentConfig& cfg);

// Builds the configured initial state (normalized): vacuum, a Gaussian bump
// with a set (c+ : c-) phase, or the IBC-consistent near-boundary profile
// phi- ~ c- e^{+eta}, phi+ ~ c+ e^{-eta} under a smooth cutoff.
MiniFockState initial_state(const ExperimentConfig& cfg, const SectorHamiltonian& H);

}  // namespace srn
