// srnsim: batch driver for the sRN IBC simulator.
// Subcommands: verify | evolve | trajectory | process.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "srn/config.hpp"
#include "srn/io.hpp"

namespace fs = std::filesystem;
using namespace srn;

namespace {

struct CheckList {
    int failed = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << name;
        if (!detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failed;
    }
};

std::string fmtnum(double x) {
    char buf[32];
    snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

int verify_geometry(const ExperimentConfig& cfg) {
    CheckList cl;
    const MetricParams mp = metric_of(cfg);
    const TortoiseMap map(mp);
    const auto [lim_r, lim_rA] = map.asymptotics();
    cl.check("r(R) R^{-1/3} limit", std::fabs(lim_r - std::cbrt(3.0 * mp.Q * mp.Q)) < 1e-6,
             fmtnum(lim_r));
    cl.check("r^2 A^2 limit", std::fabs(lim_rA - mp.Q * mp.Q) < 1e-6, fmtnum(lim_rA));
    double worst = 0.0;
    for (double r : {1e-4, 1e-2, 0.3, 1.0, 5.0, 40.0}) {
        const double rt = map.inverse(map.tortoise(r));
        worst = std::max(worst, std::fabs(rt - r) / r);
    }
    cl.check("inverse round trip", worst < 1e-10, fmtnum(worst));
    double dworst = 0.0;
    for (double r : {1e-3, 0.05, 0.7, 3.0, 20.0}) {
        const double h = 1e-6 * r;
        const double fd = (map.tortoise(r + h) - map.tortoise(r - h)) / (2.0 * h);
        dworst = std::max(dworst, std::fabs(fd * metric_factor(r, mp) - 1.0));
    }
    cl.check("dR/dr = 1/A^2", dworst < 1e-8, fmtnum(dworst));
    const TortoiseMap ref(MetricParams{2.0, 1.0, cfg.q, cfg.m});
    cl.check("reference constant -0.601 (Q=2, M=1)", std::fabs(ref.constant() + 0.601) < 1e-3,
             fmtnum(ref.constant()));
    return cl.failed;
}

int verify_spinors(const ExperimentConfig& cfg) {
    CheckList cl;
    for (int kj : {-1, 1, -2, 2}) {
        for (int mj2 = -(2 * std::abs(kj) - 1); mj2 <= 2 * std::abs(kj) - 1; mj2 += 2) {
            const AngularSector s{mj2, kj};
            const auto rep = angular_eigenchecks(s);
            const double res =
                std::max({rep.res_J2, rep.res_J3, rep.res_K, rep.res_beta});
            cl.check("eigenrelations mj2=" + std::to_string(mj2) + " kj=" + std::to_string(kj),
                     res < 1e-12, fmtnum(res));
        }
    }
    const AngularSector s = sector_of(cfg);
    if (std::abs(s.kj) == 1) {
        double worst = 0.0;
        const double sg = (s.mj2 > 0) == (s.kj > 0) ? 1.0 : -1.0;
        for (double th : {0.3, 1.1, 2.2}) {
            const auto el = alpha_matrix_elements(s, th, 0.7);
            worst = std::max(worst, std::abs(el[0] - cplx(0.0, -1.0 / (4.0 * M_PI))));
            worst = std::max(worst, std::abs(el[1]));
            worst = std::max(worst, std::abs(el[2] - sg * std::sin(th) / (4.0 * M_PI)));
        }
        cl.check("alpha matrix elements", worst < 1e-12, fmtnum(worst));
    }
    return cl.failed;
}

int verify_hamiltonian(const ExperimentConfig& cfg) {
    CheckList cl;
    const SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    const SpMat& A = H.matrix();
    const SpMat D = SpMat(A - SpMat(A.adjoint()));
    double herm = 0.0, scale = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (SpMat::InnerIterator it(D, k); it; ++it) herm = std::max(herm, std::abs(it.value()));
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    cl.check("exact Hermiticity", herm <= 1e-14 * scale, fmtnum(herm));
    MiniFockState s = initial_state(cfg, H);
    const double n0 = s.norm2(H.grid());
    CayleyStepper st(H, cfg.dt);
    st.step_n(s, std::min(cfg.steps, 2000));
    cl.check("norm conservation", std::fabs(s.norm2(H.grid()) - n0) < 1e-10,
             fmtnum(s.norm2(H.grid()) - n0));
    return cl.failed;
}

int verify_bohm(const ExperimentConfig& cfg) {
    CheckList cl;
    ExperimentConfig c = cfg;
    if (c.initial == "vacuum") {
        c.initial = "boundary";
        c.width = 0.5 * c.dR * c.N;
        c.cp_re = 1.0;
        c.cp_im = 0.0;
        c.cm_re = std::cos(-M_PI / 4.0);  // generic infalling phase
        c.cm_im = std::sin(-M_PI / 4.0);
    }
    // the fit needs an infalling boundary pattern, Im[c-* c+] > 0
    const cplx cross = std::conj(cplx(c.cm_re, c.cm_im)) * cplx(c.cp_re, c.cp_im);
    if (cross.imag() <= 0.0) {
        c.cm_re = -c.cm_re;
        c.cm_im = -c.cm_im;
    }
    const SectorHamiltonian H(metric_of(c), sector_of(c), ibc_of(c), grid_of(c));
    const SectorField f(initial_state(c, H), H.grid(), H.map(), H.sector());
    const auto rep = verify_trajectory_asymptotics(f, 0.05 * std::fabs(c.Q), c.fit_lo, c.fit_hi);
    cl.check("reaches r=0", rep.hit);
    cl.check("r(t) exponent 1/3", std::fabs(rep.exp_r - 1.0 / 3.0) < 1.0 / 300.0,
             fmtnum(rep.exp_r));
    cl.check("radial prefactor", std::fabs(rep.pref_r / rep.C_rad_ref - 1.0) < 0.02,
             fmtnum(rep.pref_r));
    cl.check("phi(r) slope",
             std::fabs(rep.slope_phi - rep.slope_phi_ref) <
                 0.05 * std::max(std::fabs(rep.slope_phi_ref), 1e-6),
             fmtnum(rep.slope_phi));
    cl.check("theta constant", rep.theta_drift < 1e-10, fmtnum(rep.theta_drift));
    return cl.failed;
}

int verify_process(const ExperimentConfig& cfg, int threads) {
    CheckList cl;
    ExperimentConfig c = cfg;
    c.n_walkers = std::min(c.n_walkers, 5000);
    const SectorHamiltonian H(metric_of(c), sector_of(c), ibc_of(c), grid_of(c));
    ProcessParams pp;
    pp.n_walkers = c.n_walkers;
    pp.seed = c.seed;
    pp.horizon = std::min(c.horizon, 0.5);
    pp.dt = c.process_dt > 0.0 ? c.process_dt : c.dt;
    pp.checkpoints = c.checkpoints;
    pp.threads = threads;
    EquivarianceReport rep;
    BellProcess(H, initial_state(c, H), pp).run(&rep);
    for (const auto& ck : rep.checkpoints)
        cl.check("checkpoint t=" + fmtnum(ck.t),
                 std::fabs(ck.z_p0) <= 3.0 && ck.tv_radial <= ck.tv_bound,
                 "z=" + fmtnum(ck.z_p0) + " tv=" + fmtnum(ck.tv_radial) + " bound=" +
                     fmtnum(ck.tv_bound));
    return cl.failed;
}

int run_evolve(const ExperimentConfig& cfg, const fs::path& out) {
    const SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    MiniFockState s = initial_state(cfg, H);
    CayleyStepper st(H, cfg.dt);
    const uint64_t hash = config_hash(cfg);
    fs::create_directories(out);
    std::ofstream ts(out / "timeseries.csv");
    ts << stamp_line(hash) << "\nt,sector_norm2,p0,re_cm,im_cm,re_cp,im_cp,sigma\n";
    ts.precision(12);
    auto record = [&](int k) {
        const auto bd = extract_boundary_coeffs(s, H.grid());
        const double p0 = std::norm(s.psi0);
        const double sig = p0 > 0.0 ? jump_rate(s, H.grid(), H.map().params()) : 0.0;
        ts << k * cfg.dt << ',' << s.sector_norm2(H.grid()) << ',' << p0 << ','
           << bd.cm.real() << ',' << bd.cm.imag() << ',' << bd.cp.real() << ',' << bd.cp.imag()
           << ',' << sig << '\n';
        if (cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0) {
            std::ofstream snap(out / ("snapshot_" + std::to_string(k) + ".dat"));
            write_snapshot(snap, s, H.grid(), k * cfg.dt, hash);
        }
    };
    for (int k = 0; k < cfg.steps; ++k) {
        record(k);
        st.step(s);
    }
    record(cfg.steps);
    std::ofstream snap(out / "snapshot_final.dat");
    write_snapshot(snap, s, H.grid(), cfg.steps * cfg.dt, hash);
    std::cout << "evolve: " << cfg.steps << " steps, final |psi0|^2 = " << std::norm(s.psi0)
              << ", outputs in " << out << "\n";
    return 0;
}

int run_trajectory(const ExperimentConfig& cfg, const fs::path& out) {
    const SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    const MiniFockState s = initial_state(cfg, H);
    if (s.sector_norm2(H.grid()) <= 0.0)
        throw std::runtime_error("trajectory: initial state has no 1-particle part");
    const SectorField f(s, H.grid(), H.map(), H.sector());
    const double r0 = cfg.r_start > 0.0 ? cfg.r_start
                                        : f.map().inverse(0.5 * H.grid().Rmax());
    const uint64_t hash = config_hash(cfg);
    fs::create_directories(out);
    const auto tr = integrate_trajectory(f, {r0, 1.2, 0.0}, 0.0, cfg.t_span);
    std::ofstream tf(out / "trajectory.csv");
    write_trajectory(tf, tr, hash);
    const auto rep = verify_trajectory_asymptotics(f, r0, cfg.fit_lo, cfg.fit_hi);
    std::ofstream rf(out / "asymptotics.txt");
    rf.precision(12);
    rf << stamp_line(hash) << '\n'
       << "hit " << rep.hit << '\n'
       << "exp_r " << rep.exp_r << '\n'
       << "pref_r " << rep.pref_r << " ref " << rep.C_rad_ref << '\n'
       << "slope_phi " << rep.slope_phi << " ref " << rep.slope_phi_ref << '\n'
       << "R_slope " << rep.R_slope_fit << " ref " << rep.R_slope_ref << '\n'
       << "theta_drift " << rep.theta_drift << '\n';
    std::cout << "trajectory: " << tr.points.size() << " samples, hit=" << tr.hit_singularity
              << ", outputs in " << out << "\n";
    return 0;
}

int run_process(const ExperimentConfig& cfg, const fs::path& out, int threads) {
    const SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    ProcessParams pp;
    pp.n_walkers = cfg.n_walkers;
    pp.seed = cfg.seed;
    pp.horizon = cfg.horizon;
    pp.dt = cfg.process_dt > 0.0 ? cfg.process_dt : cfg.dt;
    pp.checkpoints = cfg.checkpoints;
    pp.sample_walkers = cfg.sample_walkers;
    pp.threads = threads;
    EquivarianceReport rep;
    const ProcessRecord rec = BellProcess(H, initial_state(cfg, H), pp).run(&rep);
    const uint64_t hash = config_hash(cfg);
    fs::create_directories(out);
    std::ofstream recf(out / "process_record.txt");
    write_process_record(recf, rec, hash);
    std::ofstream repf(out / "equivariance.csv");
    write_equivariance_report(repf, rep, hash);
    std::cout << "process: " << pp.n_walkers << " walkers, " << rep.absorptions
              << " absorptions, " << rep.emissions << " emissions, equivariance "
              << (rep.pass ? "pass" : "FAIL") << ", outputs in " << out << "\n";
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sRN interior-boundary-condition simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    uint64_t seed = 0;
    bool seed_set = false, out_set = false;
    int threads = 1;
    app.add_option("--config", config_path, "configuration file (INI)");
    app.add_option("--seed", seed, "override the process RNG seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--out", out_dir, "output directory")
        ->each([&](const std::string&) { out_set = true; });
    app.add_option("--threads", threads, "worker threads for the process fan-out");

    std::string suite;
    auto* vcmd = app.add_subcommand("verify", "run a named verification suite");
    vcmd->add_option("suite", suite, "geometry|spinors|hamiltonian|bohm|process")->required();
    auto* ecmd = app.add_subcommand("evolve", "evolve the configured state");
    auto* tcmd = app.add_subcommand("trajectory", "integrate a Bohmian trajectory");
    auto* pcmd = app.add_subcommand("process", "run the jump process with equivariance checks");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (out_set) cfg.out_dir = out_dir;
        const fs::path out = cfg.out_dir;

        if (vcmd->parsed()) {
            int failed;
            if (suite == "geometry") failed = verify_geometry(cfg);
            else if (suite == "spinors") failed = verify_spinors(cfg);
            else if (suite == "hamiltonian") failed = verify_hamiltonian(cfg);
            else if (suite == "bohm") failed = verify_bohm(cfg);
            else if (suite == "process") failed = verify_process(cfg, threads);
            else {
                std::cerr << "unknown suite '" << suite << "'\n";
                return 2;
            }
            std::cout << "verify " << suite << ": " << (failed ? "FAIL" : "pass") << " ("
                      << failed << " failed checks)\n";
            return failed ? 1 : 0;
        }
        if (ecmd->parsed()) return run_evolve(cfg, out);
        if (tcmd->parsed()) return run_trajectory(cfg, out);
        if (pcmd->parsed()) return run_process(cfg, out, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
