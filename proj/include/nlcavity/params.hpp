#pragma once

namespace nlcavity {

// Rates of the dressed-state kinetic model. gamma is the single-atom
// spontaneous-emission rate and serves as the natural unit; pump is the
// single-photon pumping rate and k1 the one-photon power transmission of the
// output mirror, both usually quoted in units of gamma. eta is the mirror
// nonlinearity ratio K(2)/K(1); transmission saturates at K(2) for photon
// numbers >= 2.
struct SystemParams {
    double gamma = 1.0;
    double pump = 0.0;
    double k1 = 0.0;
    double eta = 1.0;

    // Photon-number dependent mirror transmission: 0 for the vacuum, k1 for
    // one photon, eta*k1 for two or more.
    double K(int n_photons) const;

    // Throws std::invalid_argument unless gamma > 0, the other rates are
    // nonnegative, and all fields are finite.
    void validate() const;
};

// Parameters of the full master-equation cross-check.
struct OracleParams {
    double g = 100.0;      // atom-cavity coupling, same units as the rates
    int fock_cutoff = 6;   // >= 3 so three-photon overflow is representable
    SystemParams system;

    void validate() const;

    // Rate-model validity needs g >> max(gamma, pump, k1, eta*k1); callers
    // warn (not error) when this ratio is small.
    double validity_ratio() const;
};

}  // namespace nlcavity
