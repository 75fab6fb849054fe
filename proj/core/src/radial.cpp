#include "srn/radial.hpp"

#include <cmath>

namespace srn {

IBCParams::IBCParams(double a1_, double a2_, double a3_, double a4_, cplx g_)
    : a1(a1_), a2(a2_), a3(a3_), a4(a4_), g(g_) {
    if (std::fabs(a1 * a4 - a2 * a3 - 1.0) > 1e-12)
        throw std::invalid_argument("IBCParams: need a1 a4 - a2 a3 = 1");
    if (a1 == 0.0)
        throw std::invalid_argument("IBCParams: a1 = 0 not supported by the ghost elimination");
    if (g == cplx(0.0, 0.0)) throw std::invalid_argument("IBCParams: g must be nonzero");
}

IBCParams IBCParams::decoupled(double theta) {
    IBCParams p(1.0, 0.0, 0.0, 1.0, cplx(1.0, 0.0));
    p.coupled = false;
    p.theta = theta;
    if (std::fabs(std::cos(theta)) < 1e-12)
        throw std::invalid_argument("IBCParams: theta with cos(theta)=0 not supported");
    return p;
}

MiniFockState MiniFockState::vacuum(const RadialGrid& g) {
    MiniFockState s;
    s.psi0 = 1.0;
    s.phip = Eigen::VectorXcd::Zero(g.N);
    s.phim = Eigen::VectorXcd::Zero(g.N);
    return s;
}

double MiniFockState::sector_norm2(const RadialGrid& g) const {
    return g.dR * (phip.squaredNorm() + phim.squaredNorm());
}

double MiniFockState::norm2(const RadialGrid& g) const {
    return std::norm(psi0) + sector_norm2(g);
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1], n = 16
constexpr int kGL = 16;
const double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
const double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// integral of u over [Ra, Rb] via the substitution R = rho^3 (smooth integrand:
// u ~ R^{-2/3} near the origin)
double eta_increment(const TortoiseMap& map, const AngularSector& sec, double Ra, double Rb) {
    const double a = std::cbrt(Ra), b = std::cbrt(Rb);
    const double kap = double(sec.kj);
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) {
        const double rho = 0.5 * (b - a) * kGLx[i] + 0.5 * (a + b);
        const double r = map.inverse(rho * rho * rho);
        const double A = std::sqrt(metric_factor(r, map.params()));
        acc += kGLw[i] * kap * (A / r) * 3.0 * rho * rho;
    }
    return 0.5 * (b - a) * acc;
}

}  // namespace

PotentialTerms potential_terms(const TortoiseMap& map, const AngularSector& sec,
                               const RadialGrid& grid) {
    const int N = grid.N;
    const auto& mp = map.params();
    PotentialTerms pt;
    pt.up.resize(N);
    pt.vpp.resize(N);
    pt.vmm.resize(N);
    pt.etap.resize(N);
    pt.etam.resize(N);
    pt.rp.resize(N);
    pt.rm.resize(N);
    pt.Ap.resize(N);
    pt.Am.resize(N);
    const double kap = double(sec.kj);
    for (int k = 0; k < N; ++k) {
        pt.rp[k] = map.inverse(grid.Rplus(k));
        pt.rm[k] = map.inverse(grid.Rminus(k));
        pt.Ap[k] = std::sqrt(metric_factor(pt.rp[k], mp));
        pt.Am[k] = std::sqrt(metric_factor(pt.rm[k], mp));
        pt.up[k] = kap * pt.Ap[k] / pt.rp[k];
        pt.vpp[k] = mp.q * mp.Q / pt.rp[k] + mp.m * pt.Ap[k];
        pt.vmm[k] = mp.q * mp.Q / pt.rm[k] - mp.m * pt.Am[k];
    }
    // eta at the interleaved node sequence 0 < R+_0 < R-_0 < R+_1 < ...
    double eta = eta_increment(map, sec, 0.0, grid.Rplus(0));
    for (int k = 0; k < N; ++k) {
        pt.etap[k] = eta;
        eta += eta_increment(map, sec, grid.Rplus(k), grid.Rminus(k));
        pt.etam[k] = eta;
        if (k + 1 < N) eta += eta_increment(map, sec, grid.Rminus(k), grid.Rplus(k + 1));
    }
    return pt;
}

SectorHamiltonian::SectorHamiltonian(const MetricParams& mp, const AngularSector& sec,
                                     const IBCParams& ibc, const RadialGrid& grid)
    : mp_(mp), sec_(sec), ibc_(ibc), grid_(grid), map_(mp),
      pot_(potential_terms(map_, sec_, grid_)) {
    assemble();
}

void SectorHamiltonian::assemble() {
    const int N = grid_.N;
    const double dR = grid_.dR;
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(6 * N + 8);
    auto iP = [](int k) { return 1 + k; };
    auto iN = [N](int k) { return 1 + N + k; };

    // Off-diagonal block: the stencil w0 phi-[k] + w1 phi-[k-1] approximates
    // (-d/dR + u) phi- at the phi+ node; weights are exact on {e^{eta}, R}
    // (phi- ~ c- e^{eta} near the boundary), so the scheme resolves the
    // R^{1/3} boundary behavior.  The conjugate-transposed block then
    // discretizes (d/dR + u) phi+, and Hermiticity is exact by construction.
    double s_bound = 0.0;
    for (int k = 0; k < N; ++k) {
        const double etaL = k == 0 ? 0.0 : pot_.etam[k - 1];
        const double RL = k == 0 ? 0.0 : grid_.Rminus(k - 1);
        const double RR = grid_.Rminus(k), Rc = grid_.Rplus(k);
        const double eR = std::exp(pot_.etam[k] - pot_.etap[k]);
        const double eL = std::exp(etaL - pot_.etap[k]);
        const double det = eR * RL - eL * RR;
        const double rhs = -1.0 + pot_.up[k] * Rc;
        const double w0 = -eL * rhs / det;
        const double w1 = eR * rhs / det;
        if (k == 0) s_bound = w1;
        trip.emplace_back(iP(k), iP(k), pot_.vpp[k]);
        trip.emplace_back(iN(k), iN(k), pot_.vmm[k]);
        trip.emplace_back(iP(k), iN(k), w0);
        trip.emplace_back(iN(k), iP(k), w0);
        if (k > 0) {
            trip.emplace_back(iP(k), iN(k - 1), w1);
            trip.emplace_back(iN(k - 1), iP(k), w1);
        }
    }

    // Boundary closure.  Ghost value phi-(0) from the IBC (coupled) or the
    // theta extension (decoupled); c+ entering the elimination is the
    // deflated nearest-node proxy e^{eta} phi+ at the first node.
    const double defl = std::exp(pot_.etap[0]);
    if (ibc_.coupled) {
        const cplx gc = std::sqrt(dR) * s_bound * ibc_.g / ibc_.a1;
        trip.emplace_back(iP(0), 0, gc);
        trip.emplace_back(0, iP(0), std::conj(gc));
        trip.emplace_back(0, 0, std::norm(ibc_.g) * ibc_.a3 / ibc_.a1);
        trip.emplace_back(iP(0), iP(0), -s_bound * ibc_.a2 * defl / ibc_.a1);
    } else {
        // phi+(0) sin(theta) + phi-(0) cos(theta) = 0
        const double t = std::tan(ibc_.theta);
        trip.emplace_back(iP(0), iP(0), -s_bound * t * defl);
    }

    H_.resize(2 * N + 1, 2 * N + 1);
    H_.setFromTriplets(trip.begin(), trip.end());
    H_.makeCompressed();
}

Eigen::VectorXcd SectorHamiltonian::pack(const MiniFockState& s) const {
    const int N = grid_.N;
    const double w = std::sqrt(grid_.dR);
    Eigen::VectorXcd x(2 * N + 1);
    x(0) = s.psi0;
    x.segment(1, N) = w * s.phip;
    x.segment(1 + N, N) = w * s.phim;
    return x;
}

MiniFockState SectorHamiltonian::unpack(const Eigen::VectorXcd& x) const {
    const int N = grid_.N;
    const double w = 1.0 / std::sqrt(grid_.dR);
    MiniFockState s;
    s.psi0 = x(0);
    s.phip = w * x.segment(1, N);
    s.phim = w * x.segment(1 + N, N);
    return s;
}

MiniFockState SectorHamiltonian::apply(const MiniFockState& s) const {
    if (s.phip.size() != grid_.N || s.phim.size() != grid_.N)
        throw std::invalid_argument("SectorHamiltonian::apply: state/grid size mismatch");
    return unpack(H_ * pack(s));
}

CayleyStepper::CayleyStepper(const SectorHamiltonian& H, double dt) : H_(&H), dt_(dt) {
    const int n = H.matrix().rows();
    SpMat Id(n, n);
    Id.setIdentity();
    const cplx half{0.0, 0.5 * dt};
    SpMat A = Id + half * H.matrix();
    B_ = Id - half * H.matrix();
    lu_.compute(A);
    if (lu_.info() != Eigen::Success)
        throw std::runtime_error("CayleyStepper: sparse LU factorization failed");
}

void CayleyStepper::step(MiniFockState& s) const {
    Eigen::VectorXcd x = H_->pack(s);
    x = lu_.solve(B_ * x);
    s = H_->unpack(x);
}

void CayleyStepper::step_n(MiniFockState& s, int n) const {
    Eigen::VectorXcd x = H_->pack(s);
    for (int i = 0; i < n; ++i) x = lu_.solve(B_ * x);
    s = H_->unpack(x);
}

namespace {

std::pair<cplx, double> fit_boundary(const Eigen::VectorXcd& vals, const RadialGrid& grid,
                                     bool plus_nodes, const std::vector<double>& powers,
                                     int npts) {
    const int nb = int(powers.size());
    Eigen::MatrixXd X(npts, nb);
    Eigen::VectorXcd y(npts);
    for (int i = 0; i < npts; ++i) {
        const double R = plus_nodes ? grid.Rplus(i) : grid.Rminus(i);
        for (int b = 0; b < nb; ++b) X(i, b) = std::pow(R, powers[b]);
        y(i) = vals(i);
    }
    const Eigen::MatrixXcd Xc = X.cast<cplx>();
    Eigen::VectorXcd beta = Xc.colPivHouseholderQr().solve(y);
    const double rms = std::sqrt((Xc * beta - y).squaredNorm() / npts);
    return {beta(0), rms};
}

}  // namespace

BoundaryData extract_boundary_coeffs(const MiniFockState& s, const RadialGrid& grid,
                                     std::vector<double> powers, int npts,
                                     double warn_threshold) {
    if (npts < int(powers.size()) || npts > grid.N)
        throw std::invalid_argument("extract_boundary_coeffs: bad fit window");
    BoundaryData bd{};
    auto [cp, ep] = fit_boundary(s.phip, grid, true, powers, npts);
    auto [cm, em] = fit_boundary(s.phim, grid, false, powers, npts);
    bd.cp = cp;
    bd.cm = cm;
    bd.err_cp = ep;
    bd.err_cm = em;
    bd.warning = ep > warn_threshold || em > warn_threshold;
    return bd;
}

double ibc_residual(const MiniFockState& s, const IBCParams& ibc, const RadialGrid& grid) {
    const BoundaryData bd = extract_boundary_coeffs(s, grid);
    return std::abs(ibc.a1 * bd.cm + ibc.a2 * bd.cp - ibc.g * s.psi0);
}

}  // namespace srn
