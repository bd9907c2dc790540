#pragma once

#include <stdexcept>

namespace nlcavity {

// Base for numerical failures (degenerate solves, failed brackets,
// non-convergence). Precondition violations throw std::invalid_argument
// instead; the CLI maps the two classes to different exit codes.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Steady-state solve failed (degenerate null space, residual out of bounds).
struct SteadyStateError : NumericalError {
    using NumericalError::NumericalError;
};

// Threshold bisection endpoints do not bracket a sign change.
struct BracketError : NumericalError {
    using NumericalError::NumericalError;
};

// Time integration produced populations outside the admissible band.
struct EvolveError : NumericalError {
    using NumericalError::NumericalError;
};

// Observable has not converged in the Fock cutoff.
struct CutoffError : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace nlcavity
