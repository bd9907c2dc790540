#pragma once

#include <compare>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "nlcavity/density.hpp"

namespace nlcavity {

// Product basis ket |ab;c>: atom states a, b in {1, 2} (1 = ground) and
// photon number c >= 0.
struct Ket {
    int atom1 = 1;
    int atom2 = 1;
    int photons = 0;
    auto operator<=>(const Ket&) const = default;
};

enum class DressedLabel {
    ground,      // n = 0
    chi_o,       // n = 1, antisymmetric (dark)
    chi_plus,    // n = 1, symmetric pair
    chi_minus,
    phi_o,       // n >= 2, antisymmetric (dark)
    phi_oprime,  // n >= 2, ground/doubly-excited superposition
    phi_plus,    // n >= 2, symmetric pair
    phi_minus,
};

const char* to_string(DressedLabel label);

// One eigenstate of the resonant atom-field coupling within the manifold of
// fixed total excitation number. All coefficients are real.
struct DressedState {
    int manifold = 0;
    DressedLabel label = DressedLabel::ground;
    std::map<Ket, double> amplitudes;

    double amplitude(const Ket& k) const;  // 0 when the ket is absent
    double norm() const;

    // Coefficient vector over the composite basis (atom pair) x Fock with
    // photon numbers 0..fock_cutoff. Atom index (a-1)*2 + (b-1) is the slow
    // index, the Fock index is fast. Throws std::invalid_argument when the
    // state holds a ket above the cutoff.
    Eigen::VectorXd as_vector(int fock_cutoff) const;
};

double inner(const DressedState& x, const DressedState& y);

// The dressed basis of manifold n. n=0: the ground state |11;0>.
// n=1: {chi_o, chi_plus, chi_minus}. n>=2: {phi_o, phi_oprime, phi_plus,
// phi_minus}; the coefficient pattern is the same for every n >= 2, only the
// photon labels shift. Throws std::invalid_argument for n < 0.
std::vector<DressedState> build_dressed_states(int n);

// Reduced two-atom density matrix of one dressed state (field traced out).
TwoQubitDensity trace_out_field(const DressedState& state);

// Convex mixture of dressed states from a single manifold, reduced to the
// atoms. Weights must be nonnegative and sum to 1 (1e-12); labels must exist
// in the manifold. Throws std::invalid_argument otherwise.
TwoQubitDensity manifold_mixture(int manifold, const std::vector<DressedLabel>& which,
                                 const std::vector<double>& weights);

}  // namespace nlcavity
