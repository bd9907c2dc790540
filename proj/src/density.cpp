#include "nlcavity/density.hpp"

#include <sstream>
#include <stdexcept>

namespace nlcavity {

double min_eigenvalue(const TwoQubitDensity& rho) {
    Eigen::Matrix4cd herm = 0.5 * (rho.elements + rho.elements.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void validate_density(const TwoQubitDensity& rho) {
    const auto& m = rho.elements;
    double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-12) {
        std::ostringstream msg;
        msg << "density matrix is not Hermitian (defect " << herm_defect << ")";
        throw std::invalid_argument(msg.str());
    }
    double trace_defect = std::abs(m.trace() - std::complex<double>(1.0));
    if (trace_defect > 1e-12) {
        std::ostringstream msg;
        msg << "density matrix trace deviates from 1 by " << trace_defect;
        throw std::invalid_argument(msg.str());
    }
    double lambda_min = min_eigenvalue(rho);
    if (lambda_min < -1e-10) {
        std::ostringstream msg;
        msg << "density matrix is not positive semidefinite (eigenvalue "
            << lambda_min << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace nlcavity
