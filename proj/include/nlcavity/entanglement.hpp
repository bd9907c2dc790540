#pragma once

#include <array>

#include "nlcavity/density.hpp"
#include "nlcavity/kinetics.hpp"

namespace nlcavity {

// Mixture of the per-manifold reduced matrices weighted by the kinetic
// populations. Nonzero dark populations are rejected unless allow_dark is
// set: the steady-state family never populates them, so folding them in is an
// explicit extension. With the override each dark state contributes the
// reduced matrix of the antisymmetric one-excitation pair state.
// Throws std::invalid_argument when the populations fail their invariants.
TwoQubitDensity assemble_rho_atoms(const ManifoldPopulations& pops,
                                   bool allow_dark = false);

// The double spin-flip rho_tilde = (sy x sy) conj(rho) (sy x sy). Applying it
// twice returns the input exactly.
TwoQubitDensity spin_flip(const TwoQubitDensity& rho);

enum class ConcurrenceMethod { general, closed_form };

struct ConcurrenceResult {
    double value = 0.0;
    // Square roots of the eigenvalues of rho * spin_flip(rho), descending.
    std::array<double, 4> lambdas{};
    ConcurrenceMethod method = ConcurrenceMethod::general;
};

// Wootters concurrence by the eigenvalue route: value =
// max(l1 - l2 - l3 - l4, 0). Validates the input density matrix; eigenvalues
// with imaginary part or negative real part beyond 1e-10 raise
// NumericalError, smaller negatives are clamped to zero.
ConcurrenceResult concurrence_general(const TwoQubitDensity& rho);

// Algebraic concurrence of the four-state kinetic mixture:
// max(0, (p_s1 + p_s2)/2 - sqrt((p_s2 + 2 p_o)(2 p_o + p_s2 + 4 p_g + 2 p_s1))/2)
// with p_o = p_oprime2. Matches concurrence_general(assemble_rho_atoms(pops))
// to 1e-12 on the bright family; dark populations are not part of the formula.
ConcurrenceResult concurrence_closed_form(const ManifoldPopulations& pops);

}  // namespace nlcavity
