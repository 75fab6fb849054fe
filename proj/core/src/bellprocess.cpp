#include "srn/bellprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace srn {

double jump_rate(const MiniFockState& s, const RadialGrid& grid, const MetricParams& mp) {
    const BoundaryData bd = extract_boundary_coeffs(s, grid);
    const double rootQ = std::sqrt(std::fabs(mp.Q));
    return jump_rate_formula(rootQ * bd.cm, rootQ * bd.cp, s.psi0, mp.Q);
}

Configuration sample_initial(const MiniFockState& s, const RadialGrid& grid,
                             const TortoiseMap& map, PhiloxRng& rng) {
    if (std::fabs(s.norm2(grid) - 1.0) > 1e-6)
        throw std::invalid_argument("sample_initial: state must be normalized");
    Configuration c;
    if (rng.uniform() < std::norm(s.psi0)) return c;
    // radial node from the |phi|^2 weights, uniform jitter within the cell
    const int N = grid.N;
    double u = rng.uniform() * s.sector_norm2(grid);
    double acc = 0.0;
    double R = grid.Rminus(N - 1);
    for (int k = 0; k < 2 * N; ++k) {
        const bool plus = k < N;
        const int j = plus ? k : k - N;
        acc += grid.dR * std::norm(plus ? s.phip(j) : s.phim(j));
        if (u <= acc) {
            R = (plus ? grid.Rplus(j) : grid.Rminus(j)) + (rng.uniform() - 0.5) * grid.dR;
            break;
        }
    }
    R = std::max(R, 1e-12);
    auto [th, ph] = rng.sphere();
    c.vacuum = false;
    c.pt = {map.inverse(R), th, ph};
    return c;
}

namespace {

// The discrete degrees of freedom form a nearest-neighbor chain in R:
// psi0, phi+[0] at dR/2, phi-[0] at dR, phi+[1] at 3dR/2, ...  Walker
// velocities come from the exact inter-site fluxes of that chain, so the
// ensemble transports exactly what the scheme transports.  Interface i sits
// at m_i = (0.25 + 0.5 i) dR, i = 0..2N-1.
struct ChainContext {
    std::vector<cplx> coup;      // H(upper, lower) per interface
    std::vector<int> lo, hi;     // packed-vector indices of the two sites
    std::vector<double> rI, AI;  // r and A at the interface positions
    int sgn;
};

ChainContext make_context(const SectorHamiltonian& H) {
    const auto& grid = H.grid();
    const int N = grid.N;
    ChainContext cx;
    cx.sgn = (H.sector().mj2 > 0) == (H.sector().kj > 0) ? 1 : -1;
    cx.coup.resize(2 * N);
    cx.lo.resize(2 * N);
    cx.hi.resize(2 * N);
    cx.rI.resize(2 * N);
    cx.AI.resize(2 * N);
    auto site = [N](int c) {  // chain position -> packed index
        if (c == 0) return 0;
        return (c % 2 == 1) ? 1 + (c - 1) / 2 : 1 + N + (c - 2) / 2;
    };
    const SpMat& A = H.matrix();
    for (int i = 0; i < 2 * N; ++i) {
        cx.lo[i] = site(i);
        cx.hi[i] = site(i + 1);
        cx.coup[i] = A.coeff(cx.hi[i], cx.lo[i]);
        const double m = (0.25 + 0.5 * i) * grid.dR;
        cx.rI[i] = H.map().inverse(m);
        cx.AI[i] = std::sqrt(metric_factor(cx.rI[i], H.map().params()));
    }
    return cx;
}

struct FieldTable {
    int n;  // 2N interfaces
    double dR;
    std::vector<double> vr;    // dR/dt at the interfaces
    std::vector<double> vphi;  // dphi/dt at the interfaces

    double index(double R) const { return std::clamp(2.0 * R / dR - 0.5, 0.0, double(n - 1)); }
    double sample_vr(double R) const {
        const double x = index(R);
        const int i = std::min(n - 2, int(x));
        const double t = std::min(x - i, 1.0);
        return (1.0 - t) * vr[i] + t * vr[i + 1];
    }
    double sample_vphi(double R) const {
        const double x = index(R);
        const int i = std::min(n - 2, int(x));
        const double t = std::min(x - i, 1.0);
        return (1.0 - t) * vphi[i] + t * vphi[i + 1];
    }
};

FieldTable make_table(const MiniFockState& s, const SectorHamiltonian& H,
                      const ChainContext& cx) {
    const auto& grid = H.grid();
    const int N = grid.N;
    FieldTable ft;
    ft.n = 2 * N;
    ft.dR = grid.dR;
    ft.vr.assign(ft.n, 0.0);
    ft.vphi.assign(ft.n, 0.0);
    const Eigen::VectorXcd x = H.pack(s);
    for (int i = 0; i < ft.n; ++i) {
        const cplx xl = x[cx.lo[i]], xh = x[cx.hi[i]];
        const double flux = 2.0 * (cx.coup[i] * std::conj(xh) * xl).imag();
        // radial density per unit R next to the interface; psi0 carries none
        double rho;
        cplx cross;  // conj(phi+) phi- pair at the interface
        if (i == 0) {
            rho = (std::norm(x[1]) + std::norm(x[1 + N])) / grid.dR;
            cross = std::conj(x[1]) * x[1 + N] / grid.dR;
        } else {
            const bool lower_is_plus = (i % 2 == 1);
            rho = (std::norm(xl) + std::norm(xh)) / grid.dR;
            cross = (lower_is_plus ? std::conj(xl) * xh : std::conj(xh) * xl) / grid.dR;
        }
        if (rho <= 0.0) continue;
        ft.vr[i] = flux / rho;
        ft.vphi[i] = 2.0 * cx.AI[i] * cx.sgn * cross.real() / (cx.rI[i] * rho);
    }
    return ft;
}

struct Walker {
    uint8_t mode;  // 0 vacuum, 1 particle
    double R, theta, phi;
    PhiloxRng rng;
};

}  // namespace

BellProcess::BellProcess(const SectorHamiltonian& H, MiniFockState initial, ProcessParams params)
    : H_(&H), psi0_(std::move(initial)), par_(params) {
    if (par_.n_walkers < 1 || par_.checkpoints < 2 || !(par_.dt > 0.0) || !(par_.horizon > 0.0))
        throw std::invalid_argument("BellProcess: bad parameters");
}

ProcessRecord BellProcess::run(EquivarianceReport* report) {
    const auto& H = *H_;
    const auto& grid = H.grid();
    const int steps = std::max(1, int(std::ceil(par_.horizon / par_.dt)));
    const double dt = par_.horizon / steps;
    const int NW = par_.n_walkers;
    const int nthreads = std::max(1, par_.threads);

    ProcessRecord rec;
    rec.seed = par_.seed;

    // initialize walkers by Born sampling (in R directly)
    std::vector<Walker> walkers;
    walkers.reserve(NW);
    const double p0 = std::norm(psi0_.psi0);
    const double sect = psi0_.sector_norm2(grid);
    for (int w = 0; w < NW; ++w) {
        Walker wk{0, 0.0, 0.0, 0.0, PhiloxRng(par_.seed, uint64_t(w))};
        if (wk.rng.uniform() >= p0) {
            double u = wk.rng.uniform() * sect;
            double acc = 0.0;
            double R = grid.Rminus(grid.N - 1);
            for (int k = 0; k < 2 * grid.N; ++k) {
                const bool plus = k < grid.N;
                const int j = plus ? k : k - grid.N;
                acc += grid.dR * std::norm(plus ? psi0_.phip(j) : psi0_.phim(j));
                if (u <= acc) {
                    R = (plus ? grid.Rplus(j) : grid.Rminus(j)) +
                        (wk.rng.uniform() - 0.5) * grid.dR;
                    break;
                }
            }
            wk.mode = 1;
            wk.R = std::max(R, 1e-12);
            auto [th, ph] = wk.rng.sphere();
            wk.theta = th;
            wk.phi = ph;
        }
        walkers.push_back(wk);
    }

    CayleyStepper stepper(H, dt);
    const ChainContext cx = make_context(H);
    MiniFockState psi = psi0_;

    std::vector<std::vector<ProcessEvent>> ev_buf(nthreads);
    if (report) {
        report->checkpoints.clear();
        report->absorptions = report->emissions = 0;
        report->pass = true;
    }

    std::vector<int> cp_steps;
    for (int i = 0; i < par_.checkpoints; ++i)
        cp_steps.push_back(int(std::llround(double(i) * steps / (par_.checkpoints - 1))));

    int next_cp = 0;
    const int nbins = 64;

    auto do_checkpoint = [&](double t) {
        // record samples
        for (int w = 0; w < std::min(par_.sample_walkers, NW); ++w) {
            Configuration c;
            c.vacuum = walkers[w].mode == 0;
            if (!c.vacuum)
                c.pt = {H.map().inverse(std::max(walkers[w].R, 1e-12)), walkers[w].theta,
                        walkers[w].phi};
            rec.samples.push_back({t, w, c});
        }
        if (!report) return;
        CheckpointStats cs{};
        cs.t = t;
        cs.born_p0 = std::norm(psi.psi0);
        int n0 = 0;
        std::vector<int> hist(nbins, 0);
        for (const auto& wk : walkers) {
            if (wk.mode == 0) {
                ++n0;
            } else {
                int b = int(wk.R / grid.Rmax() * nbins);
                hist[std::clamp(b, 0, nbins - 1)]++;
            }
        }
        cs.emp_p0 = double(n0) / NW;
        const double var0 = std::max(cs.born_p0 * (1.0 - cs.born_p0), 1e-12);
        cs.z_p0 = (cs.emp_p0 - cs.born_p0) * std::sqrt(double(NW) / var0);

        // conditional radial law from |phi|^2 dR
        std::vector<double> born(nbins, 0.0);
        double tot = 0.0;
        for (int j = 0; j < grid.N; ++j) {
            const double wp = grid.dR * std::norm(psi.phip(j));
            const double wm = grid.dR * std::norm(psi.phim(j));
            born[std::clamp(int(grid.Rplus(j) / grid.Rmax() * nbins), 0, nbins - 1)] += wp;
            born[std::clamp(int(grid.Rminus(j) / grid.Rmax() * nbins), 0, nbins - 1)] += wm;
            tot += wp + wm;
        }
        const int npart = NW - n0;
        double tv = 0.0, etv = 0.0, vtv = 0.0, chi2 = 0.0;
        int dof = 0;
        for (int b = 0; b < nbins; ++b) {
            const double pb = tot > 0.0 ? born[b] / tot : 0.0;
            const double qb = 1.0 - pb;
            if (npart > 0) {
                const double diff = std::fabs(hist[b] - npart * pb);
                tv += diff;
                // E|n - Np| <= sqrt(Npq) (Jensen), Var|n - Np| <= Npq
                etv += std::sqrt(npart * pb * qb);
                vtv += npart * pb * qb;
                if (npart * pb >= 5.0) {
                    chi2 += (hist[b] - npart * pb) * (hist[b] - npart * pb) / (npart * pb);
                    ++dof;
                }
            }
        }
        if (npart > 0) {
            cs.tv_radial = tv / (2.0 * npart);
            cs.tv_bound = (etv + 3.0 * std::sqrt(vtv)) / (2.0 * npart);
        }
        cs.chi2 = chi2;
        cs.chi2_dof = std::max(0, dof - 1);
        if (std::fabs(cs.z_p0) > 3.0 || (npart > 0 && cs.tv_radial > cs.tv_bound))
            report->pass = false;
        report->checkpoints.push_back(cs);
    };

    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        if (next_cp < int(cp_steps.size()) && cp_steps[next_cp] == k) {
            do_checkpoint(t);
            ++next_cp;
        }
        // emission rate from the exact per-step decrement of |psi0|^2, so the
        // walker bookkeeping balances the discrete evolution instead of the
        // continuum law
        MiniFockState psi_next = psi;
        stepper.step(psi_next);

        // time-centered field for the walker transport
        MiniFockState mid = psi;
        mid.psi0 = 0.5 * (psi.psi0 + psi_next.psi0);
        mid.phip = 0.5 * (psi.phip + psi_next.phip);
        mid.phim = 0.5 * (psi.phim + psi_next.phim);
        const FieldTable ft = make_table(mid, H, cx);
        const double p0_cur = std::norm(psi.psi0);
        const double p0_next = std::norm(psi_next.psi0);
        double sigma = 0.0;
        if (p0_cur > 0.0) {
            sigma = std::max(0.0, (p0_cur - p0_next) / dt) / p0_cur;
        } else if (std::any_of(walkers.begin(), walkers.end(),
                               [](const Walker& w) { return w.mode == 0; })) {
            if (!flagged_p0_) {
                std::fprintf(stderr, "BellProcess: psi0 = 0 with walkers at vacuum (t=%g)\n", t);
                flagged_p0_ = true;
            }
        }

        auto advance = [&](int tid, int lo, int hi) {
            auto& evs = ev_buf[tid];
            for (int w = lo; w < hi; ++w) {
                Walker& wk = walkers[w];
                if (wk.mode == 0) {
                    if (sigma <= 0.0) continue;
                    const int nsub = std::max(1, int(std::ceil(sigma * dt / 0.1)));
                    const double dts = dt / nsub;
                    const double psub = sigma * dts;
                    for (int isub = 0; isub < nsub; ++isub) {
                        const double u = wk.rng.uniform();
                        if (u < psub) {
                            const double te = t + (isub + u / psub) * dts;
                            auto [th, ph] = wk.rng.sphere();
                            wk.mode = 1;
                            wk.theta = th;
                            wk.phi = ph;
                            // created probability lands in the phi+[0] site
                            wk.R = (0.25 + 0.5 * wk.rng.uniform()) * grid.dR;
                            evs.push_back({te, w, ProcessEvent::emission, th, ph});
                            break;
                        }
                    }
                } else {
                    // midpoint steps, substepped so each hop stays under a
                    // quarter cell of the interface grid
                    const double v0 = ft.sample_vr(wk.R);
                    const int nsub = std::clamp(
                        int(std::ceil(std::fabs(v0) * dt / (0.25 * grid.dR))), 1, 32);
                    const double dts = dt / nsub;
                    bool absorbed = false;
                    for (int isub = 0; isub < nsub && !absorbed; ++isub) {
                        const double k1 = ft.sample_vr(wk.R);
                        const double Rm = wk.R + 0.5 * dts * k1;
                        double R1, dphi;
                        if (Rm <= 0.0) {
                            R1 = wk.R + dts * k1;
                            dphi = dts * ft.sample_vphi(wk.R);
                        } else {
                            R1 = wk.R + dts * ft.sample_vr(Rm);
                            dphi = dts * ft.sample_vphi(Rm);
                        }
                        if (R1 <= 0.0) {
                            const double ta = t + isub * dts +
                                              dts * wk.R / std::max(wk.R - R1, 1e-300);
                            evs.push_back({ta, w, ProcessEvent::absorption, wk.theta, wk.phi});
                            wk.mode = 0;
                            wk.R = 0.0;
                            absorbed = true;
                        } else {
                            wk.R = std::min(R1, grid.Rmax() - 1e-9);
                            wk.phi += dphi;
                        }
                    }
                }
            }
        };

        if (nthreads == 1) {
            advance(0, 0, NW);
        } else {
            std::vector<std::thread> pool;
            const int chunk = (NW + nthreads - 1) / nthreads;
            for (int tid = 0; tid < nthreads; ++tid) {
                const int lo = tid * chunk, hi = std::min(NW, lo + chunk);
                if (lo < hi) pool.emplace_back(advance, tid, lo, hi);
            }
            for (auto& th : pool) th.join();
        }
        psi = std::move(psi_next);
    }
    if (next_cp < int(cp_steps.size())) do_checkpoint(par_.horizon);

    for (auto& buf : ev_buf)
        rec.events.insert(rec.events.end(), buf.begin(), buf.end());
    std::sort(rec.events.begin(), rec.events.end(), [](const auto& a, const auto& b) {
        return a.t != b.t ? a.t < b.t : a.walker < b.walker;
    });
    if (report)
        for (const auto& e : rec.events)
            (e.kind == ProcessEvent::absorption ? report->absorptions : report->emissions)++;
    return rec;
}

}  // namespace srn
