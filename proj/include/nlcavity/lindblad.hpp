#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlcavity/density.hpp"
#include "nlcavity/entanglement.hpp"
#include "nlcavity/errors.hpp"
#include "nlcavity/kinetics.hpp"
#include "nlcavity/params.hpp"

namespace nlcavity {

// Operators on the composite space (atom pair) x Fock, dimension
// 4 * (fock_cutoff + 1), atom index slow and Fock index fast (the same
// layout as DressedState::as_vector). The jump operators carry their rates:
// each is sqrt(rate) times the bare operator, ready for the dissipator.
//
// Dissipator modeling choices (the master equation itself does not follow
// from the kinetic model and these are hypotheses validated by the
// dressed-rate tests):
//   - emission is one collective lowering channel sqrt(gamma)(s1- + s2-);
//     it reproduces the kinetic decay coefficients exactly and leaves the
//     antisymmetric states dark, where independent per-atom channels would
//     halve the one-quantum decay and leak population into the dark ladder;
//   - the pump raises the photon number isometrically (|n+1><n| at rate
//     pump), the number-independent form that reproduces the kinetic pump
//     coefficients; the pump acts on the cavity mode, not the atoms;
//   - the mirror is a single lowering channel sum_n sqrt(K(n)) |n-1><n|, so
//     the loss rate out of an n-photon state is exactly K(n).
struct OracleOperators {
    Eigen::MatrixXd hamiltonian;  // g (J- a+ + J+ a)
    Eigen::MatrixXd emission;
    Eigen::MatrixXd pump;
    Eigen::MatrixXd mirror;
    int dim = 0;
};

OracleOperators build_operators(const OracleParams& params);

// Kronecker product, slow index from the left factor.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// vec-form generator (column stacking) for a Hamiltonian plus jump operators
// that already include their sqrt(rate) factors:
//   L = -i (I x H - H^T x I) + sum_C [conj(C) x C
//       - (I x C^H C + (C^H C)^T x I) / 2].
Eigen::MatrixXcd liouvillian_matrix(const Eigen::MatrixXd& hamiltonian,
                                    const std::vector<Eigen::MatrixXd>& jumps);

struct Liouvillian {
    Eigen::MatrixXcd matrix;
    OracleParams params;
};

// Full master-equation generator for the cavity model. Trace preserving: the
// adjoint annihilates the identity to 1e-10.
Liouvillian build_liouvillian(const OracleParams& params);

struct FullDensity {
    Eigen::MatrixXcd rho;
    int fock_cutoff = 0;
};

// Isometry embedding the exchange-symmetric sector, spanned by
// {|11>, (|12>+|21>)/sqrt(2), |22>} x Fock; shape 4(N+1) x 3(N+1).
Eigen::MatrixXd symmetric_sector_basis(int fock_cutoff);

// Steady state of the master equation. Every channel preserves the atom
// exchange symmetry, so the antisymmetric (dark) ladder is dynamically
// isolated and holds a steady state of its own; the physically prepared
// system starts with no dark population, and the solve is restricted to the
// exchange-symmetric sector where the steady state is unique. Throws
// SteadyStateError when the sector null space is degenerate or the residual
// under the full generator exceeds 1e-9.
FullDensity oracle_steady_state(const OracleParams& params);

// Partial trace over the Fock index.
TwoQubitDensity reduce_to_atoms(const FullDensity& rho);

// Fixed-step RK4 propagation of vec(rho); test instrument and slow fallback.
FullDensity propagate(const Liouvillian& liouvillian, const FullDensity& rho0,
                      double t_final, double dt);

struct ComparisonReport {
    OracleParams params;
    double validity_ratio = 0.0;  // g / max(gamma, pump, k1, eta k1)
    bool validity_warning = false;
    ManifoldPopulations rate_pops;
    double rate_concurrence = 0.0;
    Eigen::Vector4d oracle_diag = Eigen::Vector4d::Zero();
    double oracle_concurrence = 0.0;
    int cutoff_low = 0;   // convergence pair actually used
    int cutoff_high = 0;
    double cutoff_concurrence_diff = 0.0;
    double cutoff_element_diff = 0.0;
    std::vector<std::string> assumptions;
};

// Side-by-side steady state of the kinetic model and the master equation at
// the same parameters. Convergence in the cutoff is checked between
// max(3, N-1) and N+1; the reported observable is the concurrence and a
// difference above 1e-6 throws CutoffError (the element-wise difference is
// reported as a diagnostic but does not gate).
ComparisonReport compare_with_rate_model(const OracleParams& params);

}  // namespace nlcavity
