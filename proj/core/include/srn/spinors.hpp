#pragma once
// Angular machinery: spherical spinor basis Phi^+/-_{mj,kj}, the W matrix
// relating Cartesian and spherical spin components, spherical harmonics
// (Condon-Shortley), Dirac matrices, and the in-sector alpha matrix elements.

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace srn {

using cplx = std::complex<double>;

struct AngularSector {
    int mj2;  // doubled m_j (odd integer)
    int kj;   // kappa_j, nonzero integer; j = |kj| - 1/2

    AngularSector(int mj2_, int kj_) : mj2(mj2_), kj(kj_) {
        if (kj == 0) throw std::invalid_argument("AngularSector: kappa_j != 0");
        if ((mj2 % 2) == 0) throw std::invalid_argument("AngularSector: m_j must be half-integer");
        if (std::abs(mj2) > 2 * std::abs(kj) - 1)
            throw std::invalid_argument("AngularSector: |m_j| <= j required");
    }
    double mj() const { return 0.5 * mj2; }
    double j() const { return std::abs(kj) - 0.5; }
};

struct DiracMatrices {
    Eigen::Matrix4cd beta;
    std::array<Eigen::Matrix4cd, 3> alpha;
};
DiracMatrices dirac_matrices();

// Unitary basis-change matrix; columns w1, w2.
Eigen::Matrix2cd w_matrix(double theta, double phi);

// Condon-Shortley spherical harmonic Y_l^m.
cplx sph_harm(int l, int m, double theta, double phi);

// Phi^{+/-}_{m_j,kappa_j}(omega) in the spherical spin basis.
Eigen::Vector4cd phi_basis(const AngularSector& s, int parity, double theta, double phi);

// Max residuals of the eigenrelations (J^2, J3, K, beta) over sampled angles.
struct EigenCheckReport {
    double res_J2;
    double res_J3;
    double res_K;
    double res_beta;
};
EigenCheckReport angular_eigenchecks(const AngularSector& s);

// (<Phi+, a^1 Phi->, <Phi+, a^2 Phi->, <Phi+, a^3 Phi->) pointwise at omega,
// spin-space inner product only; defined for |kappa_j| = 1.
std::array<cplx, 3> alpha_matrix_elements(const AngularSector& s, double theta, double phi);

}  // namespace srn
