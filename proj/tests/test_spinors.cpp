#include <doctest.h>

#include <cmath>
#include <vector>

#include "srn/spinors.hpp"

using namespace srn;

namespace {

// Gauss-Legendre nodes/weights on [-1,1] (by Newton on Legendre polynomials)
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        x[i] = t;
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// sphere inner product by product quadrature
cplx sphere_ip(const AngularSector& a, int pa, const AngularSector& b, int pb) {
    const int nth = 24, nph = 24;
    std::vector<double> x, w;
    gauss_legendre(nth, x, w);
    cplx acc = 0.0;
    for (int i = 0; i < nth; ++i) {
        const double th = std::acos(x[i]);
        for (int j = 0; j < nph; ++j) {
            const double ph = 2.0 * M_PI * j / nph;
            acc += w[i] * (2.0 * M_PI / nph) *
                   phi_basis(a, pa, th, ph).dot(phi_basis(b, pb, th, ph));
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("W matrix is unitary") {
    for (double th : {0.2, 1.0, 2.5})
        for (double ph : {0.0, 1.3, 5.0}) {
            const Eigen::Matrix2cd W = w_matrix(th, ph);
            CHECK((W.adjoint() * W - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
        }
}

TEST_CASE("spherical harmonics: conjugation and normalization") {
    for (int l = 0; l <= 3; ++l)
        for (int m = -l; m <= l; ++m) {
            const cplx a = sph_harm(l, m, 0.7, 1.1);
            const cplx b = std::pow(-1.0, m) * std::conj(sph_harm(l, -m, 0.7, 1.1));
            CHECK(std::abs(a - b) < 1e-13);
        }
    CHECK(std::abs(sph_harm(0, 0, 1.0, 2.0) - cplx(1.0 / std::sqrt(4.0 * M_PI), 0.0)) < 1e-14);
}

TEST_CASE("quadrature orthonormality of the angular basis") {
    std::vector<AngularSector> secs;
    for (int kj : {-2, -1, 1, 2})
        for (int mj2 = -(2 * std::abs(kj) - 1); mj2 <= 2 * std::abs(kj) - 1; mj2 += 2)
            secs.push_back({mj2, kj});
    for (size_t i = 0; i < secs.size(); ++i)
        for (int pa : {+1, -1}) {
            CHECK(std::abs(sphere_ip(secs[i], pa, secs[i], pa) - 1.0) < 1e-10);
            // orthogonality against a handful of partners
            for (size_t j = i + 1; j < std::min(secs.size(), i + 4); ++j)
                for (int pb : {+1, -1})
                    CHECK(std::abs(sphere_ip(secs[i], pa, secs[j], pb)) < 1e-10);
            CHECK(std::abs(sphere_ip(secs[i], pa, secs[i], -pa)) < 1e-10);
        }
}

TEST_CASE("pointwise |Phi|^2 = 1/4pi for unit kappa") {
    for (int kj : {-1, 1})
        for (int mj2 : {-1, 1})
            for (int par : {+1, -1})
                for (double th : {0.1, 0.9, 2.0, 3.0}) {
                    const auto v = phi_basis({mj2, kj}, par, th, 0.8);
                    CHECK(std::fabs(v.squaredNorm() - 1.0 / (4.0 * M_PI)) < 1e-12);
                }
}

TEST_CASE("angular eigenrelations") {
    for (int kj : {-3, -2, -1, 1, 2, 3})
        for (int mj2 = -(2 * std::abs(kj) - 1); mj2 <= 2 * std::abs(kj) - 1; mj2 += 2) {
            const auto r = angular_eigenchecks({mj2, kj});
            CHECK(r.res_J2 < 1e-12);
            CHECK(r.res_J3 < 1e-12);
            CHECK(r.res_K < 1e-12);
            CHECK(r.res_beta < 1e-12);
        }
}

TEST_CASE("alpha matrix elements for unit kappa sectors") {
    for (int kj : {-1, 1})
        for (int mj2 : {-1, 1}) {
            const AngularSector s{mj2, kj};
            const double sg = (mj2 > 0) == (kj > 0) ? 1.0 : -1.0;
            for (double th : {0.2, 1.1, 1.9, 2.8}) {
                const auto el = alpha_matrix_elements(s, th, 0.6);
                CHECK(std::abs(el[0] - cplx(0.0, -1.0 / (4.0 * M_PI))) < 1e-12);
                CHECK(std::abs(el[1]) < 1e-12);
                CHECK(std::abs(el[2] - sg * std::sin(th) / (4.0 * M_PI)) < 1e-12);
            }
        }
}
