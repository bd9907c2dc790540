#include "nlcavity/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "nlcavity/dressed.hpp"
#include "nlcavity/errors.hpp"

namespace nlcavity {

namespace {

const Eigen::Matrix4cd& rho_of(DressedLabel label) {
    static const Eigen::Matrix4cd ground =
        manifold_mixture(0, {DressedLabel::ground}, {1.0}).elements;
    static const Eigen::Matrix4cd one_quantum =
        manifold_mixture(1, {DressedLabel::chi_plus, DressedLabel::chi_minus},
                         {0.5, 0.5})
            .elements;
    static const Eigen::Matrix4cd two_quantum =
        manifold_mixture(2, {DressedLabel::phi_plus, DressedLabel::phi_minus},
                         {0.5, 0.5})
            .elements;
    static const Eigen::Matrix4cd oprime =
        manifold_mixture(2, {DressedLabel::phi_oprime}, {1.0}).elements;
    static const Eigen::Matrix4cd dark1 =
        manifold_mixture(1, {DressedLabel::chi_o}, {1.0}).elements;
    static const Eigen::Matrix4cd dark2 =
        manifold_mixture(2, {DressedLabel::phi_o}, {1.0}).elements;

    switch (label) {
        case DressedLabel::ground: return ground;
        case DressedLabel::chi_plus: return one_quantum;
        case DressedLabel::phi_plus: return two_quantum;
        case DressedLabel::phi_oprime: return oprime;
        case DressedLabel::chi_o: return dark1;
        case DressedLabel::phi_o: return dark2;
        default: break;
    }
    throw std::invalid_argument("no mixture component for this label");
}

// sy x sy in the product basis; real with entries in {0, +-1}, so applying it
// is exact in floating point.
Eigen::Matrix4cd spin_flip_matrix() {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

}  // namespace

TwoQubitDensity assemble_rho_atoms(const ManifoldPopulations& pops, bool allow_dark) {
    pops.validate();
    if (!allow_dark && (pops.p_dark1 != 0.0 || pops.p_dark2 != 0.0)) {
        throw std::invalid_argument(
            "dark-state populations are nonzero; the steady-state family keeps "
            "them empty, pass allow_dark to fold them in anyway");
    }
    TwoQubitDensity rho;
    rho.elements = pops.p_g * rho_of(DressedLabel::ground) +
                   pops.p_s1 * rho_of(DressedLabel::chi_plus) +
                   pops.p_s2 * rho_of(DressedLabel::phi_plus) +
                   pops.p_oprime2 * rho_of(DressedLabel::phi_oprime);
    if (allow_dark) {
        rho.elements += pops.p_dark1 * rho_of(DressedLabel::chi_o) +
                        pops.p_dark2 * rho_of(DressedLabel::phi_o);
    }
    return rho;
}

TwoQubitDensity spin_flip(const TwoQubitDensity& rho) {
    static const Eigen::Matrix4cd y = spin_flip_matrix();
    TwoQubitDensity out;
    out.elements = y * rho.elements.conjugate() * y;
    return out;
}

ConcurrenceResult concurrence_general(const TwoQubitDensity& rho) {
    validate_density(rho);

    Eigen::Matrix4cd product = rho.elements * spin_flip(rho).elements;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product, false);

    std::array<double, 4> lambdas{};
    for (int i = 0; i < 4; ++i) {
        std::complex<double> ev = es.eigenvalues()(i);
        if (std::abs(ev.imag()) > 1e-10) {
            std::ostringstream msg;
            msg << "spin-flip spectrum acquired imaginary part " << ev.imag();
            throw NumericalError(msg.str());
        }
        double re = ev.real();
        if (re < -1e-10) {
            std::ostringstream msg;
            msg << "spin-flip spectrum acquired negative eigenvalue " << re;
            throw NumericalError(msg.str());
        }
        lambdas[i] = std::sqrt(std::max(re, 0.0));
    }
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());

    ConcurrenceResult result;
    result.method = ConcurrenceMethod::general;
    result.lambdas = lambdas;
    result.value = std::max(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3], 0.0);
    return result;
}

ConcurrenceResult concurrence_closed_form(const ManifoldPopulations& pops) {
    pops.validate();
    const double pg = pops.p_g, ps1 = pops.p_s1, ps2 = pops.p_s2,
                 po = pops.p_oprime2;

    ConcurrenceResult result;
    result.method = ConcurrenceMethod::closed_form;
    result.value = std::max(
        0.5 * (ps1 + ps2) -
            0.5 * std::sqrt((ps2 + 2.0 * po) * (2.0 * po + ps2 + 4.0 * pg + 2.0 * ps1)),
        0.0);

    // Spectrum of the mixture: the symmetric coherence gives (ps1 + ps2)/2,
    // the ground/doubly-excited corner gives sqrt(ad) twice with
    // a = pg + ps1/2 + ps2/4 + po/2 and d = ps2/4 + po/2.
    const double a = pg + 0.5 * ps1 + 0.25 * ps2 + 0.5 * po;
    const double d = 0.25 * ps2 + 0.5 * po;
    const double root_ad = std::sqrt(a * d);
    result.lambdas = {0.5 * (ps1 + ps2), root_ad, root_ad, 0.0};
    std::sort(result.lambdas.begin(), result.lambdas.end(), std::greater<>());
    return result;
}

}  // namespace nlcavity
