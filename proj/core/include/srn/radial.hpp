#pragma once
// One-sector IBC Hamiltonian on the mini-Fock space C + L^2:
// exactly Hermitian staggered discretization in the tortoise coordinate,
// Cayley time stepping, boundary coefficient extraction, IBC residual.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "srn/geometry.hpp"
#include "srn/spinors.hpp"

namespace srn {

// Staggered uniform grid: phi+ lives at (k+1/2)dR, phi- at (k+1)dR,
// k = 0..N-1; a ghost phi- slot sits at R = 0 and carries the boundary
// condition.  phi+ has a hard wall beyond R_max.
struct RadialGrid {
    double dR;
    int N;

    RadialGrid(double dR_, int N_) : dR(dR_), N(N_) {
        if (!(dR > 0.0) || N < 8) throw std::invalid_argument("RadialGrid: dR > 0, N >= 8");
    }
    double Rplus(int k) const { return (k + 0.5) * dR; }
    double Rminus(int k) const { return (k + 1.0) * dR; }
    double Rmax() const { return N * dR; }
};

struct IBCParams {
    double a1, a2, a3, a4;  // a1 a4 - a2 a3 = 1, a1 != 0
    cplx g;                 // g != 0 couples the sector to the 0-particle amplitude
    bool coupled = true;    // false: decoupled theta-extension instead of the IBC
    double theta = 0.0;     // boundary angle for the decoupled case; theta=0 is a hard wall

    IBCParams(double a1_, double a2_, double a3_, double a4_, cplx g_);
    static IBCParams decoupled(double theta = 0.0);
};

struct MiniFockState {
    cplx psi0{0.0, 0.0};
    Eigen::VectorXcd phip, phim;  // values at the staggered nodes

    static MiniFockState vacuum(const RadialGrid& g);
    double norm2(const RadialGrid& g) const;  // |psi0|^2 + dR sum(|phi|^2)
    double sector_norm2(const RadialGrid& g) const;
};

struct BoundaryData {
    cplx cm, cp;          // phi-(0), phi+(0)
    double err_cm, err_cp;  // rms fit residuals
    bool warning;
};

struct PotentialTerms {
    Eigen::VectorXd up;           // u at phi+ nodes
    Eigen::VectorXd vpp, vmm;     // v+ at phi+ nodes, v- at phi- nodes
    Eigen::VectorXd etap, etam;   // eta = int_0^R u at phi+ / phi- nodes
    Eigen::VectorXd rp, rm, Ap, Am;  // r and A at the two node families
};
PotentialTerms potential_terms(const TortoiseMap& map, const AngularSector& sec,
                               const RadialGrid& grid);

using SpMat = Eigen::SparseMatrix<cplx>;

class SectorHamiltonian {
  public:
    SectorHamiltonian(const MetricParams& mp, const AngularSector& sec, const IBCParams& ibc,
                      const RadialGrid& grid);

    // Hermitian matrix on the scaled vector (psi0, sqrt(dR) phi+, sqrt(dR) phi-).
    const SpMat& matrix() const { return H_; }
    const PotentialTerms& potentials() const { return pot_; }
    const RadialGrid& grid() const { return grid_; }
    const IBCParams& ibc() const { return ibc_; }
    const TortoiseMap& map() const { return map_; }
    const AngularSector& sector() const { return sec_; }

    MiniFockState apply(const MiniFockState& s) const;

    Eigen::VectorXcd pack(const MiniFockState& s) const;
    MiniFockState unpack(const Eigen::VectorXcd& x) const;

  private:
    MetricParams mp_;
    AngularSector sec_;
    IBCParams ibc_;
    RadialGrid grid_;
    TortoiseMap map_;
    PotentialTerms pot_;
    SpMat H_;

    void assemble();
};

class CayleyStepper {
  public:
    CayleyStepper(const SectorHamiltonian& H, double dt);

    void step(MiniFockState& s) const;
    void step_n(MiniFockState& s, int n) const;
    double dt() const { return dt_; }

  private:
    const SectorHamiltonian* H_;
    double dt_;
    SpMat B_;
    Eigen::SparseLU<SpMat> lu_;
};

// Least-squares fit of phi+-(R) over the innermost nodes in the given powers
// of R; default basis {1, R^{1/3}, R^{2/3}} over 6 nodes.
BoundaryData extract_boundary_coeffs(const MiniFockState& s, const RadialGrid& grid,
                                     std::vector<double> powers = {0.0, 1.0 / 3.0, 2.0 / 3.0},
                                     int npts = 6, double warn_threshold = 1e-2);

// |a1 c- + a2 c+ - g psi0| with c+- from extract_boundary_coeffs.
double ibc_residual(const MiniFockState& s, const IBCParams& ibc, const RadialGrid& grid);

}  // namespace srn
