#include "srn/bohm.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

namespace srn {

namespace {

cplx hermite(const Eigen::VectorXcd& y, double x0, double h, double x) {
    // cubic Hermite on a uniform grid, finite-difference slopes
    const int n = int(y.size());
    int k = int(std::floor((x - x0) / h));
    k = std::max(0, std::min(n - 2, k));
    const double t = (x - (x0 + k * h)) / h;
    const cplx y0 = y(k), y1 = y(k + 1);
    const cplx m0 = k > 0 ? 0.5 * (y(k + 1) - y(k - 1)) : y(1) - y(0);
    const cplx m1 = k + 2 < n ? 0.5 * (y(k + 2) - y(k)) : y(n - 1) - y(n - 2);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * m1;
}

void fit13(const Eigen::VectorXcd& y, double R0, double dR, cplx out[2]) {
    // least-squares {1, R^{1/3}} over the first three nodes
    Eigen::Matrix<double, 3, 2> X;
    Eigen::Vector3cd b;
    for (int i = 0; i < 3; ++i) {
        const double R = R0 + i * dR;
        X(i, 0) = 1.0;
        X(i, 1) = std::cbrt(R);
        b(i) = y(i);
    }
    Eigen::Vector2cd beta = X.cast<cplx>().colPivHouseholderQr().solve(b);
    out[0] = beta(0);
    out[1] = beta(1);
}

}  // namespace

SectorField::SectorField(MiniFockState state, const RadialGrid& grid, const TortoiseMap& map,
                         const AngularSector& sec)
    : state_(std::move(state)), grid_(grid), map_(&map), sec_(sec),
      bd_(extract_boundary_coeffs(state_, grid_)) {
    if (std::abs(sec.kj) != 1)
        throw std::domain_error("SectorField: velocity field defined for |kappa_j| = 1");
    fit13(state_.phip, grid_.Rplus(0), grid_.dR, fit_p_);
    fit13(state_.phim, grid_.Rminus(0), grid_.dR, fit_m_);
}

int SectorField::sgn_mk() const { return (sec_.mj2 > 0) == (sec_.kj > 0) ? 1 : -1; }

std::pair<cplx, cplx> SectorField::phi_at(double R) const {
    if (R >= grid_.Rmax()) return {cplx(0.0), cplx(0.0)};
    cplx fp, fm;
    if (R < grid_.Rplus(2))
        fp = fit_p_[0] + fit_p_[1] * std::cbrt(R);
    else
        fp = hermite(state_.phip, grid_.Rplus(0), grid_.dR, R);
    if (R < grid_.Rminus(2))
        fm = fit_m_[0] + fit_m_[1] * std::cbrt(R);
    else
        fm = hermite(state_.phim, grid_.Rminus(0), grid_.dR, R);
    return {fp, fm};
}

Current4 current_components(const SectorField& f, const ConfigPoint& p) {
    if (!(p.r > 0.0)) throw std::domain_error("current_components: r must be > 0");
    const auto& mp = f.map().params();
    const double A = std::sqrt(metric_factor(p.r, mp));
    const auto [fp, fm] = f.phi_at(f.map().tortoise(p.r));
    const cplx cross = std::conj(fp) * fm;
    const double den = p.r * p.r * A;
    Current4 j;
    j.j0 = (std::norm(fp) + std::norm(fm)) / (4.0 * M_PI * den);
    j.j1 = cross.imag() / (2.0 * M_PI * den);
    j.j2 = 0.0;
    j.j3 = f.sgn_mk() * std::sin(p.theta) * cross.real() / (2.0 * M_PI * den);
    return j;
}

VelocitySample velocity_field(const SectorField& f, const ConfigPoint& p) {
    const auto& mp = f.map().params();
    const double A2 = metric_factor(p.r, mp);
    const auto [fp, fm] = f.phi_at(f.map().tortoise(p.r));
    const double rho = std::norm(fp) + std::norm(fm);
    if (rho <= 0.0) throw std::runtime_error("velocity_field: vanishing density");
    const cplx cross = std::conj(fp) * fm;
    VelocitySample v;
    v.v1 = 2.0 * A2 * cross.imag() / rho;
    v.v2 = 0.0;
    v.v3 = 2.0 * std::sqrt(A2) * f.sgn_mk() * cross.real() / (p.r * rho);
    return v;
}

AsymptoticCoeffs asymptotic_coeffs(cplx cm, cplx cp, const MetricParams& mp,
                                   const AngularSector& sec) {
    const cplx cross = std::conj(cm) * cp;
    const double im = cross.imag(), re = cross.real();
    if (im == 0.0) throw std::domain_error("asymptotic_coeffs: Im[c-* c+] = 0");
    const double den = std::norm(cp) + std::norm(cm);
    const double Q = mp.Q;
    const int sgn_mk = (sec.mj2 > 0) == (sec.kj > 0) ? 1 : -1;
    const int sgn_Qmk = Q > 0 ? sgn_mk : -sgn_mk;
    AsymptoticCoeffs a;
    a.C_rad = std::cbrt(6.0 * Q * Q * std::fabs(im) / den);
    a.C_az = std::cbrt(6.0) * sgn_Qmk * re /
             (std::cbrt(std::fabs(Q)) * std::cbrt(den) * std::pow(std::fabs(im), 2.0 / 3.0));
    a.phi_slope = -sgn_mk * re / (Q * im);
    a.R_slope = a.C_rad * a.C_rad * a.C_rad / (3.0 * Q * Q);
    a.direction = im < 0.0 ? +1 : -1;
    return a;
}

TrajectoryResult integrate_trajectory(const SectorField& f, const ConfigPoint& start, double t0,
                                      double t1, const TrajectoryOptions& opt) {
    namespace ode = boost::numeric::odeint;
    using state_t = std::array<double, 2>;  // (r, phi)

    const double r_min = opt.r_min > 0.0 ? opt.r_min : 1e-3 * std::fabs(f.map().params().Q);
    const double theta = start.theta;
    TrajectoryResult out;
    bool density_stop = false;

    auto rhs = [&](const state_t& y, state_t& dydt, double) {
        const auto [fp, fm] = f.phi_at(f.map().tortoise(y[0]));
        const double rho = std::norm(fp) + std::norm(fm);
        if (rho <= opt.rho_floor) {
            density_stop = true;
            dydt = {0.0, 0.0};
            return;
        }
        const double A2 = metric_factor(y[0], f.map().params());
        const cplx cross = std::conj(fp) * fm;
        dydt[0] = 2.0 * A2 * cross.imag() / rho;
        dydt[1] = 2.0 * std::sqrt(A2) * f.sgn_mk() * cross.real() / (y[0] * rho);
    };

    // phi is kept unwrapped so that downstream linear fits are well posed
    auto record = [&](double t, double r, double phi) {
        out.points.push_back({t, r, theta, phi, r > 0.0 ? f.map().tortoise(r) : 0.0});
    };

    auto ctrl = ode::make_controlled(opt.abs_tol, opt.rel_tol,
                                     ode::runge_kutta_cash_karp54<state_t>());
    state_t y{start.r, start.phi};
    double t = t0;
    double dt = 1e-6 * std::max(1.0, t1 - t0);
    double next_sample = t0;
    record(t, y[0], y[1]);
    next_sample += opt.sample_dt;

    while (t < t1) {
        if (y[0] <= r_min) break;
        if (f.map().tortoise(y[0]) >= f.grid().Rmax()) break;
        state_t y_prev = y;
        double t_prev = t;
        dt = std::min(dt, t1 - t);
        ode::controlled_step_result res = ode::fail;
        for (int tries = 0; tries < 60; ++tries) {
            res = ctrl.try_step(rhs, y, t, dt);
            if (res == ode::success) break;
        }
        if (res != ode::success || density_stop) {
            out.density_stop = density_stop;
            break;
        }
        if (y[0] <= r_min) {
            // interpolate the crossing time, then hand off to the asymptote
            const double w = (y_prev[0] - r_min) / std::max(y_prev[0] - y[0], 1e-300);
            const double t_c = t_prev + w * (t - t_prev);
            const double phi_c = y_prev[1] + w * (y[1] - y_prev[1]);
            record(t_c, r_min, phi_c);
            try {
                const auto ac =
                    asymptotic_coeffs(f.boundary().cm, f.boundary().cp, f.map().params(),
                                      f.sector());
                const double t_hit = t_c + std::pow(r_min / ac.C_rad, 3.0);
                for (int i = 1; i <= 16; ++i) {
                    const double tt = t_c + (t_hit - t_c) * i / 16.0;
                    const double rr = ac.C_rad * std::cbrt(std::max(t_hit - tt, 0.0));
                    record(tt, rr, phi_c + ac.phi_slope * (rr - r_min));
                }
                out.hit_singularity = true;
                out.t_hit = t_hit;
            } catch (const std::domain_error&) {
                // no asymptote available (Im = 0); stop at the handoff radius
            }
            return out;
        }
        if (opt.sample_dt <= 0.0 || t >= next_sample) {
            record(t, y[0], y[1]);
            while (opt.sample_dt > 0.0 && next_sample <= t) next_sample += opt.sample_dt;
        }
    }
    if (out.points.empty() || out.points.back().t < t) record(t, y[0], y[1]);
    return out;
}

AsymptoticsReport verify_trajectory_asymptotics(const SectorField& f, double r_start,
                                                double fit_lo, double fit_hi) {
    const auto bd = f.boundary();
    const auto ac = asymptotic_coeffs(bd.cm, bd.cp, f.map().params(), f.sector());
    if (ac.direction != -1)
        throw std::domain_error("verify_trajectory_asymptotics: needs Im[c-* c+] > 0 (infall)");

    // crude infall-time scale from dr/dt ~ -(C_rad^3/3) r^-2
    const double Tfall = 3.0 * std::pow(r_start, 3.0) / std::pow(ac.C_rad, 3.0);
    TrajectoryOptions opt;
    opt.r_min = std::min(0.5 * fit_lo, 1e-3 * std::fabs(f.map().params().Q));
    auto res = integrate_trajectory(f, {r_start, 1.0, 0.0}, 0.0, 10.0 * Tfall + 1.0, opt);

    AsymptoticsReport rep{};
    rep.C_rad_ref = ac.C_rad;
    rep.slope_phi_ref = ac.phi_slope;
    rep.R_slope_ref = ac.R_slope;
    rep.hit = res.hit_singularity;
    rep.theta_drift = 0.0;
    for (const auto& p : res.points) rep.theta_drift = std::max(rep.theta_drift, std::fabs(p.theta - res.points[0].theta));

    std::vector<TrajectoryPoint> win;
    for (const auto& p : res.points)
        if (p.r >= fit_lo && p.r <= fit_hi) win.push_back(p);
    if (win.size() < 8) throw std::runtime_error("verify_trajectory_asymptotics: fit window too thin");

    // centered least squares: the time window near the singularity is many
    // orders narrower than t itself, so raw normal equations cancel badly
    const double n = double(win.size());
    auto lsq = [&](auto fx, auto fy) {
        double mx = 0, my = 0;
        for (const auto& p : win) { mx += fx(p); my += fy(p); }
        mx /= n; my /= n;
        double sxx = 0, sxy = 0;
        for (const auto& p : win) {
            const double dx = fx(p) - mx, dy = fy(p) - my;
            sxx += dx * dx; sxy += dx * dy;
        }
        return std::array<double, 3>{sxy / sxx, mx, my};  // slope, means
    };

    // r^3(t) is linear: slope -C^3, intercept C^3 t0
    const auto f3 = lsq([](const TrajectoryPoint& p) { return p.t; },
                        [](const TrajectoryPoint& p) { return p.r * p.r * p.r; });
    const double C3 = -f3[0];
    const double t0 = f3[1] + f3[2] / C3;
    rep.pref_r = std::cbrt(C3);

    // exponent from log r vs log(t0 - t)
    rep.exp_r = lsq([&](const TrajectoryPoint& p) { return std::log(t0 - p.t); },
                    [](const TrajectoryPoint& p) { return std::log(p.r); })[0];

    // phi vs r and R vs t
    rep.slope_phi = lsq([](const TrajectoryPoint& p) { return p.r; },
                        [](const TrajectoryPoint& p) { return p.phi; })[0];
    rep.R_slope_fit = std::fabs(lsq([](const TrajectoryPoint& p) { return p.t; },
                                    [](const TrajectoryPoint& p) { return p.R; })[0]);
    return rep;
}

}  // namespace srn
