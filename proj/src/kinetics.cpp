#include "nlcavity/kinetics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlcavity {

double SystemParams::K(int n_photons) const {
    if (n_photons < 0) throw std::invalid_argument("photon number must be >= 0");
    if (n_photons == 0) return 0.0;
    return n_photons == 1 ? k1 : eta * k1;
}

void SystemParams::validate() const {
    if (!(std::isfinite(gamma) && std::isfinite(pump) && std::isfinite(k1) &&
          std::isfinite(eta))) {
        throw std::invalid_argument("rates must be finite");
    }
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (pump < 0.0) throw std::invalid_argument("pump must be >= 0");
    if (k1 < 0.0) throw std::invalid_argument("k1 must be >= 0");
    if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
}

void OracleParams::validate() const {
    system.validate();
    if (!(std::isfinite(g) && g > 0.0)) throw std::invalid_argument("g must be > 0");
    if (fock_cutoff < 3) {
        throw std::invalid_argument(
            "fock_cutoff must be >= 3 to hold the three-photon overflow");
    }
}

double OracleParams::validity_ratio() const {
    double fastest = std::max({system.gamma, system.pump, system.k1,
                               system.eta * system.k1});
    return g / fastest;
}

CorrectionFactors correction_factors(const SystemParams& params) {
    params.validate();
    const double G = params.gamma, P = params.pump, K = params.k1, e = params.eta;
    CorrectionFactors f;
    f.alpha = (6.0 * G + K * (3.0 * e + 1.0)) / (6.0 * G + 4.0 * P + K * (3.0 * e + 1.0));
    f.beta = (2.0 * G + K * (e + 1.0)) / (2.0 * (G + P) + K * (e + 1.0));
    return f;
}

double ManifoldPopulations::sum() const {
    return p_g + p_s1 + p_s2 + p_oprime2 + p_dark1 + p_dark2;
}

void ManifoldPopulations::validate() const {
    for (double p : {p_g, p_s1, p_s2, p_oprime2, p_dark1, p_dark2}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            std::ostringstream msg;
            msg << "population " << p << " outside [0, 1]";
            throw std::invalid_argument(msg.str());
        }
    }
    if (std::abs(sum() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "populations sum to " << sum() << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
}

RateMatrix build_rate_matrix(const SystemParams& params, bool corrected) {
    params.validate();
    const double G = params.gamma, P = params.pump, K = params.k1, e = params.eta;
    CorrectionFactors f;
    if (corrected) f = correction_factors(params);

    // Transfer rates between the kinetic states: one-quantum decay through
    // emission and the mirror, pumping up the ladder with the 3/4 : 1/4 split
    // into the two-quantum states, and the two-quantum decay rates scaled by
    // the overflow fractions.
    const double out_s1 = G + 0.5 * K;
    const double out_s2 = f.alpha * (1.5 * G + 0.25 * (e + 2.0) * K);
    const double out_o2 = f.beta * (G + 0.5 * e * K);

    RateMatrix m;
    m.params = params;
    m.corrected = corrected;
    auto& gmat = m.generator;
    gmat(0, 0) = -P;
    gmat(0, 1) = out_s1;
    gmat(1, 0) = P;
    gmat(1, 1) = -out_s1 - P;
    gmat(1, 2) = out_s2;
    gmat(1, 3) = out_o2;
    gmat(2, 1) = 0.75 * P;
    gmat(2, 2) = -out_s2;
    gmat(3, 1) = 0.25 * P;
    gmat(3, 3) = -out_o2;
    return m;
}

ManifoldPopulations steady_state_numeric(const RateMatrix& m) {
    const Eigen::Matrix4d& g = m.generator;
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(g, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double scale = sv(0);
    if (scale == 0.0) {
        throw SteadyStateError(
            "kinetic generator is identically zero; every population vector is "
            "stationary (null space dimension 4)");
    }
    int nullity = 0;
    for (int i = 0; i < 4; ++i) {
        if (sv(i) <= 1e-12 * scale) ++nullity;
    }
    if (nullity != 1) {
        std::ostringstream msg;
        msg << "kinetic generator null space has dimension " << nullity
            << "; the steady state is not unique";
        throw SteadyStateError(msg.str());
    }

    Eigen::Vector4d v = svd.matrixV().col(3);
    if (v.sum() < 0.0) v = -v;
    for (int i = 0; i < 4; ++i) {
        if (v(i) < -1e-10) {
            std::ostringstream msg;
            msg << "null vector has a negative component " << v(i);
            throw SteadyStateError(msg.str());
        }
        v(i) = std::max(v(i), 0.0);
    }
    v /= v.sum();

    double residual = (g * v).cwiseAbs().maxCoeff();
    double bound = 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff());
    if (residual > bound) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual << " exceeds " << bound;
        throw SteadyStateError(msg.str());
    }

    ManifoldPopulations pops;
    pops.p_g = v(0);
    pops.p_s1 = v(1);
    pops.p_s2 = v(2);
    pops.p_oprime2 = v(3);
    return pops;
}

ManifoldPopulations steady_state_closed_form(const SystemParams& params) {
    params.validate();
    const double G = params.gamma, P = params.pump, K = params.k1, e = params.eta;
    const auto [a, b] = correction_factors(params);

    const double P2 = P * P, K2 = K * K, K3 = K2 * K, G2 = G * G, G3 = G2 * G;
    const double e2 = e * e;
    // Normalization polynomial, transcribed term by term; it equals the sum
    // of the four numerators below identically.
    const double norm_poly =
        6.0 * b * e * P2 * K + 12.0 * b * G * P2 + 6.0 * P2 * G * a +
        P2 * a * e * K + 2.0 * P2 * a * K + 24.0 * a * b * G3 +
        16.0 * a * b * e * G2 * K + 20.0 * a * b * G2 * K +
        2.0 * a * b * G * e2 * K2 + 12.0 * a * b * G * e * K2 +
        4.0 * a * b * G * K2 + a * b * e2 * K3 + 2.0 * a * b * e * K3 +
        24.0 * a * b * P * G2 + 16.0 * a * b * e * G * P * K +
        8.0 * a * b * G * P * K + 2.0 * a * b * P * e2 * K2 +
        4.0 * a * b * e * P * K2;
    if (!(norm_poly > 0.0)) {
        std::ostringstream msg;
        msg << "steady-state normalization vanished (value " << norm_poly << ")";
        throw SteadyStateError(msg.str());
    }
    const double n = 1.0 / norm_poly;

    ManifoldPopulations pops;
    pops.p_g = n * b * a * (2.0 * G + K) * (2.0 * G + e * K) * (6.0 * G + (2.0 + e) * K);
    pops.p_s1 = n * 2.0 * P * b * a * (2.0 * G + e * K) * (6.0 * G + (2.0 + e) * K);
    pops.p_s2 = n * 6.0 * P2 * b * (2.0 * G + e * K);
    pops.p_oprime2 = n * P2 * a * (6.0 * G + (2.0 + e) * K);
    return pops;
}

Trajectory evolve(const RateMatrix& m, const ManifoldPopulations& initial,
                  double t_final, double dt, const EvolveOptions& opts) {
    initial.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be >= 0");
    if (opts.record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");

    const Eigen::Matrix4d& g = m.generator;
    Eigen::Vector4d y(initial.p_g, initial.p_s1, initial.p_s2, initial.p_oprime2);

    auto snapshot = [&](double t, const Eigen::Vector4d& v) {
        ManifoldPopulations p;
        p.p_g = v(0);
        p.p_s1 = v(1);
        p.p_s2 = v(2);
        p.p_oprime2 = v(3);
        p.p_dark1 = initial.p_dark1;
        p.p_dark2 = initial.p_dark2;
        if (std::abs(p.sum() - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg << "population sum drifted to " << p.sum() << " at t = " << t;
            throw EvolveError(msg.str());
        }
        return p;
    };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(snapshot(0.0, y));

    const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    double t = 0.0;
    for (long step = 1; step <= steps; ++step) {
        double h = std::min(dt, t_final - t);
        Eigen::Vector4d k1 = g * y;
        Eigen::Vector4d k2 = g * (y + 0.5 * h * k1);
        Eigen::Vector4d k3 = g * (y + 0.5 * h * k2);
        Eigen::Vector4d k4 = g * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;

        for (int i = 0; i < 4; ++i) {
            if (y(i) < -1e-6 || y(i) > 1.0 + 1e-6 || !std::isfinite(y(i))) {
                std::ostringstream msg;
                msg << "population " << y(i) << " left the admissible band at t = "
                    << t << "; reduce dt (currently " << dt << ")";
                throw EvolveError(msg.str());
            }
        }

        bool converged = opts.stop_below > 0.0 &&
                         (g * y).cwiseAbs().maxCoeff() < opts.stop_below;
        if (step % opts.record_stride == 0 || step == steps || converged) {
            traj.times.push_back(t);
            traj.states.push_back(snapshot(t, y));
        }
        if (converged) break;
    }
    return traj;
}

}  // namespace nlcavity
