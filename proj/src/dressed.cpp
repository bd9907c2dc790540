#include "nlcavity/dressed.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nlcavity {

const char* to_string(DressedLabel label) {
    switch (label) {
        case DressedLabel::ground: return "ground";
        case DressedLabel::chi_o: return "chi_o";
        case DressedLabel::chi_plus: return "chi_plus";
        case DressedLabel::chi_minus: return "chi_minus";
        case DressedLabel::phi_o: return "phi_o";
        case DressedLabel::phi_oprime: return "phi_oprime";
        case DressedLabel::phi_plus: return "phi_plus";
        case DressedLabel::phi_minus: return "phi_minus";
    }
    return "?";
}

double DressedState::amplitude(const Ket& k) const {
    auto it = amplitudes.find(k);
    return it == amplitudes.end() ? 0.0 : it->second;
}

double DressedState::norm() const {
    double s = 0.0;
    for (const auto& [ket, amp] : amplitudes) s += amp * amp;
    return std::sqrt(s);
}

Eigen::VectorXd DressedState::as_vector(int fock_cutoff) const {
    if (fock_cutoff < 0) throw std::invalid_argument("fock_cutoff must be >= 0");
    int nf = fock_cutoff + 1;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4 * nf);
    for (const auto& [ket, amp] : amplitudes) {
        if (ket.photons > fock_cutoff) {
            std::ostringstream msg;
            msg << "dressed state holds " << ket.photons
                << " photons, above the cutoff " << fock_cutoff;
            throw std::invalid_argument(msg.str());
        }
        int atom = (ket.atom1 - 1) * 2 + (ket.atom2 - 1);
        v(atom * nf + ket.photons) = amp;
    }
    return v;
}

double inner(const DressedState& x, const DressedState& y) {
    double s = 0.0;
    for (const auto& [ket, amp] : x.amplitudes) s += amp * y.amplitude(ket);
    return s;
}

namespace {

DressedState make(int manifold, DressedLabel label,
                  std::initializer_list<std::pair<Ket, double>> amps) {
    DressedState st;
    st.manifold = manifold;
    st.label = label;
    for (const auto& [ket, amp] : amps) st.amplitudes[ket] = amp;
    return st;
}

}  // namespace

std::vector<DressedState> build_dressed_states(int n) {
    if (n < 0) throw std::invalid_argument("manifold number must be >= 0");
    const double r2 = 1.0 / std::sqrt(2.0);
    if (n == 0) {
        return {make(0, DressedLabel::ground, {{{1, 1, 0}, 1.0}})};
    }
    if (n == 1) {
        return {
            make(1, DressedLabel::chi_o, {{{1, 2, 0}, r2}, {{2, 1, 0}, -r2}}),
            make(1, DressedLabel::chi_plus,
                 {{{1, 1, 1}, r2}, {{1, 2, 0}, 0.5}, {{2, 1, 0}, 0.5}}),
            make(1, DressedLabel::chi_minus,
                 {{{1, 1, 1}, r2}, {{1, 2, 0}, -0.5}, {{2, 1, 0}, -0.5}}),
        };
    }
    return {
        make(n, DressedLabel::phi_o, {{{1, 2, n - 1}, r2}, {{2, 1, n - 1}, -r2}}),
        make(n, DressedLabel::phi_oprime, {{{1, 1, n}, r2}, {{2, 2, n - 2}, -r2}}),
        make(n, DressedLabel::phi_plus,
             {{{1, 1, n}, 0.5},
              {{1, 2, n - 1}, 0.5},
              {{2, 1, n - 1}, 0.5},
              {{2, 2, n - 2}, 0.5}}),
        make(n, DressedLabel::phi_minus,
             {{{1, 1, n}, 0.5},
              {{1, 2, n - 1}, -0.5},
              {{2, 1, n - 1}, -0.5},
              {{2, 2, n - 2}, 0.5}}),
    };
}

TwoQubitDensity trace_out_field(const DressedState& state) {
    TwoQubitDensity rho;
    for (const auto& [ka, va] : state.amplitudes) {
        for (const auto& [kb, vb] : state.amplitudes) {
            if (ka.photons != kb.photons) continue;
            int i = (ka.atom1 - 1) * 2 + (ka.atom2 - 1);
            int j = (kb.atom1 - 1) * 2 + (kb.atom2 - 1);
            rho.elements(i, j) += va * vb;
        }
    }
    return rho;
}

TwoQubitDensity manifold_mixture(int manifold, const std::vector<DressedLabel>& which,
                                 const std::vector<double>& weights) {
    if (which.size() != weights.size()) {
        throw std::invalid_argument("one weight per dressed-state label required");
    }
    if (which.empty()) throw std::invalid_argument("empty mixture");
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "mixture weights sum to " << total << ", expected 1";
        throw std::invalid_argument(msg.str());
    }

    auto states = build_dressed_states(manifold);
    TwoQubitDensity rho;
    for (std::size_t idx = 0; idx < which.size(); ++idx) {
        const DressedState* found = nullptr;
        for (const auto& st : states) {
            if (st.label == which[idx]) {
                found = &st;
                break;
            }
        }
        if (found == nullptr) {
            std::ostringstream msg;
            msg << "label " << to_string(which[idx]) << " does not exist in manifold "
                << manifold;
            throw std::invalid_argument(msg.str());
        }
        rho.elements += weights[idx] * trace_out_field(*found).elements;
    }
    return rho;
}

}  // namespace nlcavity
