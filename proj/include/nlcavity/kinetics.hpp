#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nlcavity/errors.hpp"
#include "nlcavity/params.hpp"

namespace nlcavity {

// Fractions of the n>=2 ladder population residing in the n=2 manifold
// (alpha: symmetric ladder, beta: the o' ladder). Both are 1 without pumping
// and correct the four-state truncation for overflow into n=3.
struct CorrectionFactors {
    double alpha = 1.0;
    double beta = 1.0;
};

CorrectionFactors correction_factors(const SystemParams& params);

// Populations of the four kinetic states plus the frozen dark-state
// populations (the antisymmetric one-excitation states of the n=1 and n=2
// manifolds). The kinetics never moves the dark entries.
struct ManifoldPopulations {
    double p_g = 1.0;
    double p_s1 = 0.0;
    double p_s2 = 0.0;
    double p_oprime2 = 0.0;
    double p_dark1 = 0.0;
    double p_dark2 = 0.0;

    double sum() const;
    // Throws std::invalid_argument unless every entry lies in [0, 1] and the
    // total is 1 within 1e-12.
    void validate() const;
};

// Generator of dP/dt = G P over (p_g, p_s1, p_s2, p_oprime2). Columns sum to
// zero and off-diagonal entries are nonnegative transfer rates.
struct RateMatrix {
    Eigen::Matrix4d generator = Eigen::Matrix4d::Zero();
    SystemParams params;
    bool corrected = true;
};

// corrected=true applies the overflow correction factors to the n=2 decay
// rates; corrected=false keeps the bare four-state rates.
RateMatrix build_rate_matrix(const SystemParams& params, bool corrected = true);

// Null-space steady state of the generator. Returns nonnegative populations
// summing to 1 with residual |G v|_inf <= 1e-12 * max(1, |G|_inf). Throws
// SteadyStateError when the null space is degenerate (dimension != 1) or the
// residual bound fails.
ManifoldPopulations steady_state_numeric(const RateMatrix& m);

// Closed-form steady state; agrees with steady_state_numeric to 1e-12 per
// component. Throws SteadyStateError if the normalization vanishes.
ManifoldPopulations steady_state_closed_form(const SystemParams& params);

struct Trajectory {
    std::vector<double> times;
    std::vector<ManifoldPopulations> states;
};

struct EvolveOptions {
    int record_stride = 1;    // keep every record_stride-th step
    double stop_below = 0.0;  // if > 0, stop once |dP/dt|_inf falls below it
};

// Fixed-step classical fourth-order integration of dP/dt = G P. The dark
// populations stay at their initial values. Total population is conserved to
// 1e-9 over the run and every recorded sample is checked. Throws EvolveError
// when any population leaves [-1e-6, 1 + 1e-6], which signals a step too
// large for the fastest rate.
Trajectory evolve(const RateMatrix& m, const ManifoldPopulations& initial,
                  double t_final, double dt, const EvolveOptions& opts = {});

}  // namespace nlcavity
