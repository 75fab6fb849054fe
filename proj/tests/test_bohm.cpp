#include <doctest.h>

#include <cmath>

#include "srn/bohm.hpp"
#include "srn/config.hpp"
#include "srn/rng.hpp"

using namespace srn;

namespace {

struct Fixture {
    ExperimentConfig cfg;
    SectorHamiltonian H;
    MiniFockState state;
    SectorField field;

    static ExperimentConfig make_cfg() {
        ExperimentConfig c;
        c.dR = 0.01;
        c.N = 400;
        c.initial = "boundary";
        c.width = 1.5;
        c.cp_re = std::cos(-0.25 * M_PI);
        c.cp_im = std::sin(-0.25 * M_PI);
        c.cm_re = 1.0;
        c.cm_im = 0.0;
        return c;
    }

    Fixture()
        : cfg(make_cfg()), H(metric_of(cfg), sector_of(cfg), ibc_of(cfg), grid_of(cfg)),
          state(initial_state(cfg, H)), field(state, H.grid(), H.map(), H.sector()) {}
};

// brute-force current: assemble the 4-spinor psi = (phi+ Phi^+ + phi- Phi^-)/(r A^{1/2})
// and sandwich the Dirac alpha matrices directly
Current4 brute_current(const SectorField& f, const ConfigPoint& p) {
    const auto& mp = f.map().params();
    const double A = std::sqrt(metric_factor(p.r, mp));
    const auto [fp, fm] = f.phi_at(f.map().tortoise(p.r));
    const Eigen::Vector4cd psi =
        (fp * phi_basis(f.sector(), +1, p.theta, p.phi) +
         fm * phi_basis(f.sector(), -1, p.theta, p.phi)) /
        (p.r * std::sqrt(A));
    const auto d = dirac_matrices();
    Current4 j;
    j.j0 = psi.squaredNorm();
    j.j1 = psi.dot(d.alpha[0] * psi).real();
    j.j2 = psi.dot(d.alpha[1] * psi).real();
    j.j3 = psi.dot(d.alpha[2] * psi).real();
    return j;
}

}  // namespace

TEST_CASE("closed-form current matches the brute-force spinor sandwich") {
    const Fixture fx;
    PhiloxRng rng(99, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        ConfigPoint p;
        p.r = 0.02 + 2.5 * rng.uniform();
        auto [th, ph] = rng.sphere();
        p.theta = th;
        p.phi = ph;
        const Current4 a = current_components(fx.field, p);
        const Current4 b = brute_current(fx.field, p);
        const double scale = std::fabs(a.j0) + 1e-30;
        worst = std::max({worst, std::fabs(a.j0 - b.j0) / scale, std::fabs(a.j1 - b.j1) / scale,
                          std::fabs(a.j2 - b.j2) / scale, std::fabs(a.j3 - b.j3) / scale});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("velocity field is the current ratio") {
    const Fixture fx;
    const auto& mp = fx.field.map().params();
    for (double r : {0.05, 0.3, 1.0, 2.0})
        for (double th : {0.4, 1.2, 2.6}) {
            const ConfigPoint p{r, th, 0.7};
            const Current4 j = current_components(fx.field, p);
            const VelocitySample v = velocity_field(fx.field, p);
            const double A2 = metric_factor(r, mp);
            CHECK(v.v1 == doctest::Approx(A2 * j.j1 / j.j0).epsilon(1e-12));
            CHECK(v.v2 == 0.0);
            CHECK(v.v3 == doctest::Approx(std::sqrt(A2) * j.j3 / (r * std::sin(th) * j.j0))
                              .epsilon(1e-12));
        }
}

TEST_CASE("asymptotic coefficients: hand-checked values") {
    const MetricParams mp{2.0, 1.0, 0.1, 0.5};
    const AngularSector sec{1, -1};  // sgn(m_j kappa_j) = -1

    SUBCASE("purely imaginary cross term") {
        const auto a = asymptotic_coeffs(cplx(1.0, 0.0), cplx(0.0, -1.0), mp, sec);
        CHECK(a.C_rad == doctest::Approx(std::cbrt(12.0)).epsilon(1e-14));
        CHECK(a.C_az == doctest::Approx(0.0));
        CHECK(a.phi_slope == doctest::Approx(0.0));
        CHECK(a.R_slope == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(a.direction == +1);
    }
    SUBCASE("mixed phase, infalling") {
        const cplx cp = std::polar(1.0, 0.25 * M_PI);
        const auto a = asymptotic_coeffs(cplx(1.0, 0.0), cp, mp, sec);
        // Im = Re = 1/sqrt(2), den = 2
        CHECK(a.direction == -1);
        CHECK(a.C_rad == doctest::Approx(std::cbrt(24.0 / (2.0 * std::sqrt(2.0)))).epsilon(1e-14));
        CHECK(a.phi_slope == doctest::Approx(0.5).epsilon(1e-14));
    }
    CHECK_THROWS(asymptotic_coeffs(cplx(1.0, 0.0), cplx(1.0, 0.0), mp, sec));
}

TEST_CASE("infalling trajectory reaches the singularity") {
    Fixture fx;  // cp phase -pi/4 gives Im[c-* c+] < 0: emission field
    // conjugate the state for infall
    MiniFockState s = fx.state;
    s.phip = s.phip.conjugate();
    s.phim = s.phim.conjugate();
    const SectorField f(s, fx.H.grid(), fx.H.map(), fx.H.sector());
    const auto bd = f.boundary();
    CHECK((std::conj(bd.cm) * bd.cp).imag() > 0.0);

    const auto res = integrate_trajectory(f, {1.0, 1.1, 0.0}, 0.0, 50.0);
    CHECK(res.hit_singularity);
    CHECK(res.t_hit > 0.0);
    // r decreases monotonically and theta is frozen
    for (size_t i = 1; i < res.points.size(); ++i) {
        CHECK(res.points[i].r <= res.points[i - 1].r + 1e-12);
        CHECK(res.points[i].theta == res.points[0].theta);
    }
    CHECK(res.points.back().r < 1e-3);
}

TEST_CASE("near-boundary fit reproduces cube-root profiles") {
    const RadialGrid g{0.01, 100};
    const MetricParams mp{2.0, 1.0, 0.1, 0.5};
    const TortoiseMap map(mp);
    MiniFockState s = MiniFockState::vacuum(g);
    const cplx cp(0.4, -0.2), cm(-0.3, 0.9);
    for (int k = 0; k < g.N; ++k) {
        s.phip(k) = cp * (1.0 + 0.5 * std::cbrt(g.Rplus(k)));
        s.phim(k) = cm * (1.0 - 0.2 * std::cbrt(g.Rminus(k)));
    }
    const SectorField f(s, g, map, {1, -1});
    for (double R : {1e-8, 1e-5, 1e-3}) {
        const auto [fp, fm] = f.phi_at(R);
        CHECK(std::abs(fp - cp * (1.0 + 0.5 * std::cbrt(R))) < 1e-10);
        CHECK(std::abs(fm - cm * (1.0 - 0.2 * std::cbrt(R))) < 1e-10);
    }
}
