#include "srn/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace srn {

namespace {

namespace pt = boost::property_tree;

ExperimentConfig from_tree(const pt::ptree& t) {
    ExperimentConfig c;
    c.Q = t.get("metric.Q", c.Q);
    c.M = t.get("metric.M", c.M);
    c.q = t.get("metric.q", c.q);
    c.m = t.get("metric.m", c.m);
    c.mj2 = t.get("sector.mj2", c.mj2);
    c.kj = t.get("sector.kj", c.kj);
    c.a1 = t.get("ibc.a1", c.a1);
    c.a2 = t.get("ibc.a2", c.a2);
    c.a3 = t.get("ibc.a3", c.a3);
    c.a4 = t.get("ibc.a4", c.a4);
    c.g_re = t.get("ibc.g_re", c.g_re);
    c.g_im = t.get("ibc.g_im", c.g_im);
    c.coupled = t.get("ibc.coupled", c.coupled);
    c.theta = t.get("ibc.theta", c.theta);
    c.dR = t.get("grid.dR", c.dR);
    c.N = t.get("grid.N", c.N);
    c.dt = t.get("stepper.dt", c.dt);
    c.steps = t.get("stepper.steps", c.steps);
    c.snapshot_stride = t.get("stepper.snapshot_stride", c.snapshot_stride);
    c.initial = t.get("initial.type", c.initial);
    c.center = t.get("initial.center", c.center);
    c.width = t.get("initial.width", c.width);
    c.cp_re = t.get("initial.cp_re", c.cp_re);
    c.cp_im = t.get("initial.cp_im", c.cp_im);
    c.cm_re = t.get("initial.cm_re", c.cm_re);
    c.cm_im = t.get("initial.cm_im", c.cm_im);
    c.vacuum_weight = t.get("initial.vacuum_weight", c.vacuum_weight);
    c.r_start = t.get("trajectory.r_start", c.r_start);
    c.t_span = t.get("trajectory.t_span", c.t_span);
    c.fit_lo = t.get("trajectory.fit_lo", c.fit_lo);
    c.fit_hi = t.get("trajectory.fit_hi", c.fit_hi);
    c.n_walkers = t.get("process.n_walkers", c.n_walkers);
    c.seed = t.get("process.seed", c.seed);
    c.horizon = t.get("process.horizon", c.horizon);
    c.process_dt = t.get("process.dt", c.process_dt);
    c.checkpoints = t.get("process.checkpoints", c.checkpoints);
    c.sample_walkers = t.get("process.sample_walkers", c.sample_walkers);
    c.handoff = t.get("process.handoff", c.handoff);
    c.out_dir = t.get("output.dir", c.out_dir);
    return c;
}

pt::ptree to_tree(const ExperimentConfig& c) {
    pt::ptree t;
    auto put = [&](const char* key, auto v) { t.put(key, v); };
    put("metric.Q", c.Q);
    put("metric.M", c.M);
    put("metric.q", c.q);
    put("metric.m", c.m);
    put("sector.mj2", c.mj2);
    put("sector.kj", c.kj);
    put("ibc.a1", c.a1);
    put("ibc.a2", c.a2);
    put("ibc.a3", c.a3);
    put("ibc.a4", c.a4);
    put("ibc.g_re", c.g_re);
    put("ibc.g_im", c.g_im);
    put("ibc.coupled", c.coupled);
    put("ibc.theta", c.theta);
    put("grid.dR", c.dR);
    put("grid.N", c.N);
    put("stepper.dt", c.dt);
    put("stepper.steps", c.steps);
    put("stepper.snapshot_stride", c.snapshot_stride);
    put("initial.type", c.initial);
    put("initial.center", c.center);
    put("initial.width", c.width);
    put("initial.cp_re", c.cp_re);
    put("initial.cp_im", c.cp_im);
    put("initial.cm_re", c.cm_re);
    put("initial.cm_im", c.cm_im);
    put("initial.vacuum_weight", c.vacuum_weight);
    put("trajectory.r_start", c.r_start);
    put("trajectory.t_span", c.t_span);
    put("trajectory.fit_lo", c.fit_lo);
    put("trajectory.fit_hi", c.fit_hi);
    put("process.n_walkers", c.n_walkers);
    put("process.seed", c.seed);
    put("process.horizon", c.horizon);
    put("process.dt", c.process_dt);
    put("process.checkpoints", c.checkpoints);
    put("process.sample_walkers", c.sample_walkers);
    put("process.handoff", c.handoff);
    put("output.dir", c.out_dir);
    return t;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    pt::ptree t;
    pt::read_ini(path, t);
    return from_tree(t);
}

ExperimentConfig parse_config(const std::string& text) {
    std::istringstream is(text);
    pt::ptree t;
    pt::read_ini(is, t);
    return from_tree(t);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    pt::write_ini(os, to_tree(cfg));
    return os.str();
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_config: cannot open " + path);
    os.precision(17);
    pt::write_ini(os, to_tree(cfg));
}

uint64_t config_hash(const ExperimentConfig& cfg) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : serialize_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

MetricParams metric_of(const ExperimentConfig& c) { return {c.Q, c.M, c.q, c.m}; }
AngularSector sector_of(const ExperimentConfig& c) { return {c.mj2, c.kj}; }
RadialGrid grid_of(const ExperimentConfig& c) { return {c.dR, c.N}; }

IBCParams ibc_of(const ExperimentConfig& c) {
    if (!c.coupled) return IBCParams::decoupled(c.theta);
    return {c.a1, c.a2, c.a3, c.a4, cplx(c.g_re, c.g_im)};
}

MiniFockState initial_state(const ExperimentConfig& cfg, const SectorHamiltonian& H) {
    const auto& grid = H.grid();
    MiniFockState s = MiniFockState::vacuum(grid);
    if (cfg.initial == "vacuum") {
        s.psi0 = 1.0;
        return s;
    }
    const cplx cp(cfg.cp_re, cfg.cp_im), cm(cfg.cm_re, cfg.cm_im);
    if (cfg.initial == "gaussian") {
        const double w2 = 2.0 * cfg.width * cfg.width;
        for (int k = 0; k < grid.N; ++k) {
            const double Rp = grid.Rplus(k), Rm = grid.Rminus(k);
            s.phip(k) = cp * std::exp(-(Rp - cfg.center) * (Rp - cfg.center) / w2);
            s.phim(k) = cm * std::exp(-(Rm - cfg.center) * (Rm - cfg.center) / w2);
        }
    } else if (cfg.initial == "boundary") {
        // domain-consistent profile under a smooth cutoff
        const auto& pot = H.potentials();
        const double w4 = std::pow(cfg.width, 4);
        for (int k = 0; k < grid.N; ++k) {
            const double Rp = grid.Rplus(k), Rm = grid.Rminus(k);
            s.phip(k) = cp * std::exp(-pot.etap[k] - std::pow(Rp, 4) / w4);
            s.phim(k) = cm * std::exp(+pot.etam[k] - std::pow(Rm, 4) / w4);
        }
    } else {
        throw std::invalid_argument("initial_state: unknown type '" + cfg.initial + "'");
    }
    const double sect = s.sector_norm2(grid);
    if (sect <= 0.0) throw std::runtime_error("initial_state: empty profile");
    const double pv = std::clamp(cfg.vacuum_weight, 0.0, 1.0);
    s.psi0 = std::sqrt(pv);
    const double scale = std::sqrt((1.0 - pv) / sect);
    s.phip *= scale;
    s.phim *= scale;
    return s;
}

}  // namespace srn
