#include "srn/spinors.hpp"

#include <cmath>
#include <vector>

namespace srn {

namespace {

constexpr cplx I{0.0, 1.0};

// coefficients of the two-spinor Psi^{mj}_l in the (w1, w2) columns
struct TwoSpinorSpec {
    int l;
    int m1, m2;   // harmonic orders multiplying w1, w2
    double c1, c2;
};

TwoSpinorSpec psi_spec(const AngularSector& s, bool l_is_j_minus_half) {
    const double j = s.j(), mj = s.mj();
    TwoSpinorSpec t{};
    t.m1 = (s.mj2 - 1) / 2;
    t.m2 = (s.mj2 + 1) / 2;
    if (l_is_j_minus_half) {
        t.l = std::abs(s.kj) - 1;
        t.c1 = std::sqrt((j + mj) / (2.0 * j));
        t.c2 = std::sqrt((j - mj) / (2.0 * j));
    } else {
        t.l = std::abs(s.kj);
        t.c1 = std::sqrt((j + 1.0 - mj) / (2.0 * j + 2.0));
        t.c2 = -std::sqrt((j + 1.0 + mj) / (2.0 * j + 2.0));
    }
    return t;
}

Eigen::Vector2cd eval_two_spinor(const TwoSpinorSpec& t, double theta, double phi) {
    const Eigen::Matrix2cd W = w_matrix(theta, phi);
    Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
    if (t.c1 != 0.0) v += t.c1 * sph_harm(t.l, t.m1, theta, phi) * W.col(0);
    if (t.c2 != 0.0) v += t.c2 * sph_harm(t.l, t.m2, theta, phi) * W.col(1);
    return v;
}

}  // namespace

DiracMatrices dirac_matrices() {
    DiracMatrices d;
    d.beta = Eigen::Matrix4cd::Zero();
    d.beta.diagonal() << 1, 1, -1, -1;
    Eigen::Matrix2cd s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;
    const std::array<Eigen::Matrix2cd, 3> sig{s1, s2, s3};
    for (int i = 0; i < 3; ++i) {
        d.alpha[i] = Eigen::Matrix4cd::Zero();
        d.alpha[i].block<2, 2>(0, 2) = sig[i];
        d.alpha[i].block<2, 2>(2, 0) = sig[i];
    }
    return d;
}

Eigen::Matrix2cd w_matrix(double theta, double phi) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd W;
    W(0, 0) = I * std::exp(I * 0.5 * (theta + phi)) * s;
    W(0, 1) = std::exp(I * 0.5 * (theta - phi)) * s;
    W(1, 0) = I * std::exp(I * 0.5 * (-theta + phi)) * s;
    W(1, 1) = -std::exp(I * 0.5 * (-theta - phi)) * s;
    return W;
}

cplx sph_harm(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw std::domain_error("sph_harm: need |m| <= l");
    const int am = std::abs(m);
    double leg = std::sph_legendre(l, am, theta);  // includes Condon-Shortley phase
    if (m < 0 && (am % 2)) leg = -leg;
    return leg * std::exp(I * double(m) * phi);
}

Eigen::Vector4cd phi_basis(const AngularSector& s, int parity, double theta, double phi) {
    if (parity != +1 && parity != -1) throw std::invalid_argument("phi_basis: parity is +1 or -1");
    // kappa = -(j+1/2): upper sign in the printed pairing; kappa = +(j+1/2): lower.
    const bool upper_sign = s.kj < 0;
    Eigen::Vector4cd out = Eigen::Vector4cd::Zero();
    if (parity == +1) {
        const auto t = psi_spec(s, upper_sign);
        out.head<2>() = I * eval_two_spinor(t, theta, phi);
    } else {
        const auto t = psi_spec(s, !upper_sign);
        out.tail<2>() = eval_two_spinor(t, theta, phi);
    }
    return out;
}

namespace {

// term list for exact angular-operator algebra in the Cartesian spin basis;
// the Cartesian components of Psi^{mj}_l are just (c1 Y_l^{m1}, c2 Y_l^{m2})
struct Term {
    int l, m;
    cplx c;
};
using Component = std::vector<Term>;  // one spin component, sum of terms
using Spinor4T = std::array<Component, 4>;

void add_term(Component& comp, int l, int m, cplx c) {
    if (std::abs(c) == 0.0) return;
    if (std::abs(m) > l) return;  // only reachable with zero coefficient upstream
    for (auto& t : comp)
        if (t.l == l && t.m == m) {
            t.c += c;
            return;
        }
    comp.push_back({l, m, c});
}

Component scaled(const Component& a, cplx f) {
    Component out;
    for (const auto& t : a) add_term(out, t.l, t.m, f * t.c);
    return out;
}

Component plus(const Component& a, const Component& b) {
    Component out = a;
    for (const auto& t : b) add_term(out, t.l, t.m, t.c);
    return out;
}

Component L3(const Component& a) {
    Component out;
    for (const auto& t : a) add_term(out, t.l, t.m, double(t.m) * t.c);
    return out;
}

Component Lsq(const Component& a) {
    Component out;
    for (const auto& t : a) add_term(out, t.l, t.m, double(t.l * (t.l + 1)) * t.c);
    return out;
}

Component Lraise(const Component& a) {
    Component out;
    for (const auto& t : a) {
        const double f = std::sqrt(double(t.l * (t.l + 1) - t.m * (t.m + 1)));
        add_term(out, t.l, t.m + 1, f * t.c);
    }
    return out;
}

Component Llower(const Component& a) {
    Component out;
    for (const auto& t : a) {
        const double f = std::sqrt(double(t.l * (t.l + 1) - t.m * (t.m - 1)));
        add_term(out, t.l, t.m - 1, f * t.c);
    }
    return out;
}

// sigma.L on a two-spinor (f, g) = (L3 f + L- g, L+ f - L3 g)
std::array<Component, 2> sigma_dot_L(const Component& f, const Component& g) {
    return {plus(L3(f), Llower(g)), plus(Lraise(f), scaled(L3(g), -1.0))};
}

cplx eval(const Component& a, double theta, double phi) {
    cplx v = 0.0;
    for (const auto& t : a) v += t.c * sph_harm(t.l, t.m, theta, phi);
    return v;
}

Spinor4T phi_terms_cartesian(const AngularSector& s, int parity) {
    const bool upper_sign = s.kj < 0;
    const auto t = psi_spec(s, parity == +1 ? upper_sign : !upper_sign);
    Spinor4T out{};
    const cplx ph = parity == +1 ? I : cplx(1.0);
    const int base = parity == +1 ? 0 : 2;
    add_term(out[base + 0], t.l, t.m1, ph * t.c1);
    add_term(out[base + 1], t.l, t.m2, ph * t.c2);
    return out;
}

}  // namespace

EigenCheckReport angular_eigenchecks(const AngularSector& s) {
    EigenCheckReport rep{0.0, 0.0, 0.0, 0.0};
    const double j = s.j(), mj = s.mj();
    const std::array<double, 2> eigK{double(s.kj), double(s.kj)};
    for (int parity : {+1, -1}) {
        const Spinor4T phi = phi_terms_cartesian(s, parity);
        // J3 = L3 + Sigma3/2, J^2 = L^2 + sigma.L + 3/4, K = beta(sigma.L + 1)
        const auto sl_up = sigma_dot_L(phi[0], phi[1]);
        const auto sl_lo = sigma_dot_L(phi[2], phi[3]);
        Spinor4T j3{plus(L3(phi[0]), scaled(phi[0], 0.5)),
                    plus(L3(phi[1]), scaled(phi[1], -0.5)),
                    plus(L3(phi[2]), scaled(phi[2], 0.5)),
                    plus(L3(phi[3]), scaled(phi[3], -0.5))};
        Spinor4T j2{plus(Lsq(phi[0]), plus(sl_up[0], scaled(phi[0], 0.75))),
                    plus(Lsq(phi[1]), plus(sl_up[1], scaled(phi[1], 0.75))),
                    plus(Lsq(phi[2]), plus(sl_lo[0], scaled(phi[2], 0.75))),
                    plus(Lsq(phi[3]), plus(sl_lo[1], scaled(phi[3], 0.75)))};
        // spin-orbit operator with the sign convention matching the basis
        // pairing: K = -beta(2 S.L + 1), so that K Phi^pm = kappa_j Phi^pm
        Spinor4T K{scaled(plus(sl_up[0], phi[0]), -1.0), scaled(plus(sl_up[1], phi[1]), -1.0),
                   plus(sl_lo[0], phi[2]), plus(sl_lo[1], phi[3])};
        for (int ia = 1; ia <= 7; ++ia)
            for (int ib = 0; ib <= 7; ++ib) {
                const double th = ia * M_PI / 8.0, ph = ib * M_PI / 4.0 + 0.1;
                for (int c = 0; c < 4; ++c) {
                    const cplx v = eval(phi[c], th, ph);
                    rep.res_J3 = std::max(rep.res_J3, std::abs(eval(j3[c], th, ph) - mj * v));
                    rep.res_J2 =
                        std::max(rep.res_J2, std::abs(eval(j2[c], th, ph) - j * (j + 1.0) * v));
                    rep.res_K = std::max(rep.res_K, std::abs(eval(K[c], th, ph) - eigK[0] * v));
                    const double be = c < 2 ? 1.0 : -1.0;
                    rep.res_beta = std::max(rep.res_beta, std::abs(be * v - double(parity) * v));
                }
            }
    }
    return rep;
}

std::array<cplx, 3> alpha_matrix_elements(const AngularSector& s, double theta, double phi) {
    if (std::abs(s.kj) != 1)
        throw std::domain_error("alpha_matrix_elements: defined for |kappa_j| = 1");
    const auto d = dirac_matrices();
    const Eigen::Vector4cd p = phi_basis(s, +1, theta, phi);
    const Eigen::Vector4cd m = phi_basis(s, -1, theta, phi);
    return {p.dot(d.alpha[0] * m), p.dot(d.alpha[1] * m), p.dot(d.alpha[2] * m)};
}

}  // namespace srn
