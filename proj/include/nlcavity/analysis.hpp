#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nlcavity/errors.hpp"
#include "nlcavity/params.hpp"

namespace nlcavity {

struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 2;
    bool log_spacing = true;

    // count samples from min to max inclusive, geometric or linear.
    std::vector<double> samples() const;
    // Throws std::invalid_argument unless 0 < min < max and count >= 2.
    void validate() const;
};

struct SweepSpec {
    AxisSpec pump_range;
    AxisSpec k_range;
    double eta = 1.0;
    double gamma = 1.0;

    void validate() const;
};

// The stock figure grid: 200 x 200 geometric samples over
// [0.05, 20] * gamma on both axes.
SweepSpec default_sweep_spec(double eta, double gamma = 1.0);

struct SweepResult {
    SweepSpec spec;
    // grid(i, j) = concurrence at pump sample i, mirror sample j.
    Eigen::MatrixXd grid;
    double max_value = 0.0;
    double argmax_pi = 0.0;
    double argmax_k = 0.0;
};

// Concurrence of the corrected steady state at every grid point. The result
// is deterministic; the parallel kernel and the serial reference produce
// bit-identical grids regardless of thread count or evaluation order.
SweepResult sweep(const SweepSpec& spec);
SweepResult sweep_serial(const SweepSpec& spec);

enum class TableFormat { csv, json };

// CSV: header "pi,k,concurrence" and one row per grid point, pump-major, with
// 17 significant digits so re-parsing reproduces the grid bit-exactly.
// JSON: the spec echoed plus the grid as a nested array, stable key order.
// Byte-deterministic for a given result.
std::string emit_table(const SweepResult& result, TableFormat format);

struct SearchBounds {
    double pi_min = 0.0;
    double pi_max = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;

    void validate() const;
};

// The default concurrence-search box, [0.05, 10] * gamma on both axes. This
// is deliberately narrower than the figure grid: the concurrence maximum
// rides the upper mirror-rate edge, so the box is part of the threshold's
// definition, and this box is the one that reproduces the onset near 7.75.
SearchBounds default_search_bounds(double gamma = 1.0);

struct SearchOptions {
    int coarse_samples = 200;    // coarse scan resolution per axis
    double relative_tol = 1e-6;  // argmax localization, relative
    double positivity_tol = 1e-9;  // concurrence above this counts as nonzero
};

struct MaxConcurrenceResult {
    double value = 0.0;  // clamped at zero
    double pi = 0.0;
    double k = 0.0;
    bool surface_zero = false;  // no point rose above positivity_tol
    std::string note;
};

// Supremum of the steady-state concurrence over the box: geometric coarse
// scan plus shrinking-window refinement until the argmax is localized to
// relative_tol. Derivative-free throughout; below onset the search follows
// the signed excess (the value before the max(..., 0) clamp), which stays
// smooth where the clamped surface is identically zero.
MaxConcurrenceResult max_concurrence(double eta, double gamma = 1.0,
                                     std::optional<SearchBounds> bounds = std::nullopt,
                                     const SearchOptions& opts = {});

struct ThresholdResult {
    double eta_star = 0.0;
    // Argmax and concurrence at the smallest eta found positive.
    double pi = 0.0;
    double k = 0.0;
    double c_max = 0.0;
};

// Bisection of the indicator [max_concurrence(eta) > positivity_tol] over
// eta in [1, 20], to within tol. Throws BracketError (reporting both endpoint
// values) when eta=1 is not zero or eta=20 is not positive over the box.
ThresholdResult eta_threshold(double gamma = 1.0,
                              std::optional<SearchBounds> bounds = std::nullopt,
                              double tol = 1e-3, const SearchOptions& opts = {});

}  // namespace nlcavity
