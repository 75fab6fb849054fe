#include <doctest.h>

#include <cmath>
#include <map>

#include "srn/bellprocess.hpp"
#include "srn/config.hpp"
#include "srn/rng.hpp"

using namespace srn;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    // reference vectors from the Random123 distribution
    {
        const auto r = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
        CHECK(r[0] == 0x6627e8d5u);
        CHECK(r[1] == 0xe169c58du);
        CHECK(r[2] == 0xbc57ac4cu);
        CHECK(r[3] == 0x9b00dbd8u);
    }
    {
        const auto r = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                         {0xffffffffu, 0xffffffffu});
        CHECK(r[0] == 0x408f276du);
        CHECK(r[1] == 0x41c83b0eu);
        CHECK(r[2] == 0xa20bc7c6u);
        CHECK(r[3] == 0x6d5451fdu);
    }
    {
        const auto r = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                         {0xa4093822u, 0x299f31d0u});
        CHECK(r[0] == 0xd16cfe09u);
        CHECK(r[1] == 0x94fdccebu);
        CHECK(r[2] == 0x5001e420u);
        CHECK(r[3] == 0x24126ea1u);
    }
}

TEST_CASE("uniform and sphere sampling sanity") {
    PhiloxRng rng(7, 3);
    double s = 0.0, s2 = 0.0, sc = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(std::fabs(s / n - 0.5) < 0.01);
    CHECK(std::fabs(s2 / n - 1.0 / 3.0) < 0.01);
    for (int i = 0; i < n; ++i) sc += std::cos(rng.sphere().first);
    CHECK(std::fabs(sc / n) < 0.01);  // cos(theta) uniform on [-1,1]
    // streams with different ids are distinct
    PhiloxRng a(7, 0), b(7, 1);
    int same = 0;
    for (int i = 0; i < 16; ++i) same += a.u32() == b.u32();
    CHECK(same < 16);
}

TEST_CASE("jump rate formula and state-based rate") {
    CHECK(jump_rate_formula(cplx(1.0, 0.0), cplx(0.0, -1.0), cplx(1.0, 0.0), 2.0) == 1.0);
    CHECK(jump_rate_formula(cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(1.0, 0.0), 2.0) == 0.0);
    CHECK_THROWS(jump_rate_formula(cplx(1.0, 0.0), cplx(0.0, -1.0), cplx(0.0, 0.0), 2.0));

    // constant near-boundary profiles: extracted limits equal the node values
    const MetricParams mp{2.0, 1.0, 0.1, 0.5};
    const RadialGrid g{0.01, 100};
    MiniFockState s = MiniFockState::vacuum(g);
    s.psi0 = cplx(0.8, 0.0);
    const cplx cm(1.0, 0.0), cp(0.3, -0.6);
    for (int k = 0; k < g.N; ++k) {
        s.phip(k) = cp;
        s.phim(k) = cm;
    }
    const double sq = std::sqrt(std::fabs(mp.Q));
    const double want = jump_rate_formula(sq * cm, sq * cp, s.psi0, mp.Q);
    CHECK(jump_rate(s, g, mp) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("Born sampling of the initial configuration") {
    ExperimentConfig cfg;
    cfg.dR = 0.05;
    cfg.N = 80;
    cfg.initial = "gaussian";
    cfg.center = 1.5;
    cfg.width = 0.4;
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    const MiniFockState s = initial_state(cfg, H);

    // expected radial law in R, coarse bins; each node spreads uniformly over
    // its cell [R - dR/2, R + dR/2], so split the node mass by bin overlap
    const int nb = 16;
    const double Rmax = H.grid().Rmax();
    const double bw = Rmax / nb;
    std::vector<double> p(nb, 0.0);
    auto deposit = [&](double R, double mass) {
        const double lo = R - 0.5 * cfg.dR, hi = R + 0.5 * cfg.dR;
        for (int b = 0; b < nb; ++b) {
            const double ov = std::min(hi, (b + 1) * bw) - std::max(lo, b * bw);
            if (ov > 0.0) p[b] += mass * ov / cfg.dR;
        }
        if (hi > Rmax) p[nb - 1] += mass * (hi - Rmax) / cfg.dR;  // clamped tail
    };
    for (int k = 0; k < H.grid().N; ++k) {
        deposit(H.grid().Rplus(k), cfg.dR * std::norm(s.phip(k)));
        deposit(H.grid().Rminus(k), cfg.dR * std::norm(s.phim(k)));
    }
    const int n = 200000;
    PhiloxRng rng(11, 0);
    std::vector<int> cnt(nb, 0);
    int vac = 0;
    double sum_ct = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto c = sample_initial(s, H.grid(), H.map(), rng);
        if (c.vacuum) {
            ++vac;
            continue;
        }
        const double R = H.map().tortoise(c.pt.r);
        CHECK(R >= 0.0);
        CHECK(R <= Rmax + cfg.dR);  // last cell overhangs by dR/2
        ++cnt[std::min(nb - 1, int(R / Rmax * nb))];
        sum_ct += std::cos(c.pt.theta);
    }
    CHECK(vac == 0);  // vacuum_weight defaults to zero
    double chi2 = 0.0;
    int dof = 0;
    for (int b = 0; b < nb; ++b) {
        const double e = n * p[b];
        if (e < 5.0) continue;
        chi2 += (cnt[b] - e) * (cnt[b] - e) / e;
        ++dof;
    }
    CHECK(chi2 < dof + 5.0 * std::sqrt(2.0 * dof));  // ~5 sigma
    CHECK(std::fabs(sum_ct / n) < 0.01);             // isotropic angles
}

namespace {

ProcessRecord run_process(uint64_t seed, int threads, EquivarianceReport* rep = nullptr) {
    ExperimentConfig cfg;
    cfg.dR = 0.02;
    cfg.N = 200;
    cfg.initial = "gaussian";
    cfg.center = 1.0;
    cfg.width = 0.3;
    cfg.cp_re = std::cos(-0.25 * M_PI);
    cfg.cp_im = std::sin(-0.25 * M_PI);
    cfg.cm_re = 1.0;
    cfg.cm_im = 0.0;
    cfg.vacuum_weight = 0.3;
    SectorHamiltonian H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg));
    ProcessParams pp;
    pp.n_walkers = 400;
    pp.seed = seed;
    pp.horizon = 0.25;
    pp.dt = 0.005;
    pp.checkpoints = 5;
    pp.sample_walkers = 8;
    pp.threads = threads;
    return BellProcess(H, initial_state(cfg, H), pp).run(rep);
}

bool same_record(const ProcessRecord& a, const ProcessRecord& b) {
    if (a.events.size() != b.events.size() || a.samples.size() != b.samples.size()) return false;
    for (size_t i = 0; i < a.events.size(); ++i) {
        const auto &x = a.events[i], &y = b.events[i];
        if (x.t != y.t || x.walker != y.walker || x.kind != y.kind || x.theta != y.theta ||
            x.phi != y.phi)
            return false;
    }
    for (size_t i = 0; i < a.samples.size(); ++i) {
        const auto &x = a.samples[i], &y = b.samples[i];
        if (x.t != y.t || x.walker != y.walker || x.cfg.vacuum != y.cfg.vacuum) return false;
        if (!x.cfg.vacuum &&
            (x.cfg.pt.r != y.cfg.pt.r || x.cfg.pt.theta != y.cfg.pt.theta ||
             x.cfg.pt.phi != y.cfg.pt.phi))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("process runs are deterministic and thread-count independent") {
    const ProcessRecord r1 = run_process(42, 1);
    const ProcessRecord r2 = run_process(42, 1);
    const ProcessRecord r4 = run_process(42, 4);
    CHECK(r1.seed == 42);
    CHECK(same_record(r1, r2));
    CHECK(same_record(r1, r4));
    const ProcessRecord r5 = run_process(43, 1);
    CHECK(!same_record(r1, r5));
    // events sorted by (t, walker)
    for (size_t i = 1; i < r1.events.size(); ++i) {
        const auto &a = r1.events[i - 1], &b = r1.events[i];
        CHECK((a.t < b.t || (a.t == b.t && a.walker <= b.walker)));
    }
}

TEST_CASE("equivariance report on a short run") {
    EquivarianceReport rep;
    run_process(5, 2, &rep);
    CHECK(rep.checkpoints.size() == 5);
    for (const auto& c : rep.checkpoints) {
        CHECK(c.born_p0 >= 0.0);
        CHECK(c.born_p0 <= 1.0);
        CHECK(c.tv_bound > 0.0);
        // small-sample smoke check only: generous 5 sigma scale
        CHECK(std::fabs(c.z_p0) < 5.0);
        CHECK(c.tv_radial < 2.0 * c.tv_bound);
    }
}
