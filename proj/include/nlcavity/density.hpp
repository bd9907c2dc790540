#pragma once

#include <Eigen/Dense>

namespace nlcavity {

// Density matrix of the two atoms in the ordered product basis
// (|11>, |12>, |21>, |22>), where 1 labels the atomic ground state.
struct TwoQubitDensity {
    Eigen::Matrix4cd elements = Eigen::Matrix4cd::Zero();
};

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const TwoQubitDensity& rho);

// Throws std::invalid_argument unless Hermitian (1e-12), unit trace (1e-12)
// and positive semidefinite (eigenvalues >= -1e-10).
void validate_density(const TwoQubitDensity& rho);

}  // namespace nlcavity
