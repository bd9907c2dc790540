#include "nlcavity/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace nlcavity {

namespace {

using Complex = std::complex<double>;

// Collective lowering operator on the atom pair, basis (|11>, |12>, |21>, |22>).
Eigen::Matrix4d collective_lowering() {
    Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
    j(0, 1) = 1.0;  // |12> -> |11>
    j(0, 2) = 1.0;  // |21> -> |11>
    j(1, 3) = 1.0;  // |22> -> |12>
    j(2, 3) = 1.0;  // |22> -> |21>
    return j;
}

Eigen::MatrixXd annihilation(int nf) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nf, nf);
    for (int c = 1; c < nf; ++c) a(c - 1, c) = std::sqrt(static_cast<double>(c));
    return a;
}

}  // namespace

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

OracleOperators build_operators(const OracleParams& params) {
    params.validate();
    const int nf = params.fock_cutoff + 1;
    const Eigen::MatrixXd id_atom = Eigen::MatrixXd::Identity(4, 4);
    const Eigen::MatrixXd id_fock = Eigen::MatrixXd::Identity(nf, nf);
    const Eigen::MatrixXd jm = collective_lowering();
    const Eigen::MatrixXd a = annihilation(nf);

    OracleOperators ops;
    ops.dim = 4 * nf;
    ops.hamiltonian = params.g * (kron(jm, a.transpose()) + kron(jm.transpose(), a));
    ops.emission = std::sqrt(params.system.gamma) * kron(jm, id_fock);

    Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(nf, nf);
    for (int c = 0; c + 1 < nf; ++c) raise(c + 1, c) = 1.0;
    ops.pump = std::sqrt(params.system.pump) * kron(id_atom, raise);

    Eigen::MatrixXd loss = Eigen::MatrixXd::Zero(nf, nf);
    for (int n = 1; n < nf; ++n) loss(n - 1, n) = std::sqrt(params.system.K(n));
    ops.mirror = kron(id_atom, loss);
    return ops;
}

Eigen::MatrixXcd liouvillian_matrix(const Eigen::MatrixXd& hamiltonian,
                                    const std::vector<Eigen::MatrixXd>& jumps) {
    const Eigen::Index d = hamiltonian.rows();
    if (hamiltonian.cols() != d)
        throw std::invalid_argument("hamiltonian must be square");
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

    const Eigen::MatrixXd commutator =
        kron(id, hamiltonian) - kron(hamiltonian.transpose(), id);
    Eigen::MatrixXd dissipator = Eigen::MatrixXd::Zero(d * d, d * d);
    for (const Eigen::MatrixXd& c : jumps) {
        if (c.rows() != d || c.cols() != d)
            throw std::invalid_argument("jump operator dimension mismatch");
        const Eigen::MatrixXd cc = c.transpose() * c;
        dissipator += kron(c, c) - 0.5 * (kron(id, cc) + kron(cc.transpose(), id));
    }
    return Complex(0.0, -1.0) * commutator.cast<Complex>() +
           dissipator.cast<Complex>();
}

Liouvillian build_liouvillian(const OracleParams& params) {
    const OracleOperators ops = build_operators(params);
    Liouvillian out;
    out.params = params;
    out.matrix =
        liouvillian_matrix(ops.hamiltonian, {ops.emission, ops.pump, ops.mirror});

    // tr(drho/dt) = 0 for every rho is vec(I)^T L = 0; a violation means the
    // generator was assembled wrong.
    Eigen::VectorXcd vec_id = Eigen::VectorXcd::Zero(ops.dim * ops.dim);
    for (int i = 0; i < ops.dim; ++i) vec_id(i * ops.dim + i) = 1.0;
    const double defect = (out.matrix.transpose() * vec_id).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "generator does not preserve the trace (defect " << defect << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

Eigen::MatrixXd symmetric_sector_basis(int fock_cutoff) {
    if (fock_cutoff < 0)
        throw std::invalid_argument("fock_cutoff must be nonnegative");
    const int nf = fock_cutoff + 1;
    Eigen::MatrixXd v_atom = Eigen::MatrixXd::Zero(4, 3);
    v_atom(0, 0) = 1.0;
    v_atom(1, 1) = 1.0 / std::sqrt(2.0);
    v_atom(2, 1) = 1.0 / std::sqrt(2.0);
    v_atom(3, 2) = 1.0;
    return kron(v_atom, Eigen::MatrixXd::Identity(nf, nf));
}

FullDensity oracle_steady_state(const OracleParams& params) {
    const OracleOperators ops = build_operators(params);
    const int ds = 3 * (params.fock_cutoff + 1);
    const Eigen::MatrixXd v = symmetric_sector_basis(params.fock_cutoff);

    // Every channel maps the symmetric sector to itself, so the restricted
    // jump operators generate the sector dynamics exactly.
    const Eigen::MatrixXd hs = v.transpose() * ops.hamiltonian * v;
    const std::vector<Eigen::MatrixXd> jumps_s = {
        v.transpose() * ops.emission * v,
        v.transpose() * ops.pump * v,
        v.transpose() * ops.mirror * v,
    };
    const Eigen::MatrixXcd ls = liouvillian_matrix(hs, jumps_s);

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(ls, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double scale = sv(0);
    if (scale == 0.0)
        throw SteadyStateError("sector generator is identically zero");
    int nullity = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= 1e-10 * scale) ++nullity;
    if (nullity != 1) {
        std::ostringstream msg;
        msg << "sector null space has dimension " << nullity << ", expected 1";
        throw SteadyStateError(msg.str());
    }

    const Eigen::VectorXcd z = svd.matrixV().col(ds * ds - 1);
    Eigen::MatrixXcd rho_s = Eigen::Map<const Eigen::MatrixXcd>(z.data(), ds, ds);
    rho_s = 0.5 * (rho_s + rho_s.adjoint()).eval();
    const double tr = rho_s.trace().real();
    if (std::abs(tr) < 1e-8)
        throw SteadyStateError("sector null vector is traceless, cannot normalize");
    rho_s /= tr;

    FullDensity out;
    out.fock_cutoff = params.fock_cutoff;
    const Eigen::MatrixXcd vc = v.cast<Complex>();
    out.rho = vc * rho_s * vc.transpose();

    // Residual under the full generator in operator form; catches any mismatch
    // between the sector restriction and the complete dynamics.
    const Eigen::MatrixXcd h = ops.hamiltonian.cast<Complex>();
    Eigen::MatrixXcd drho = Complex(0.0, -1.0) * (h * out.rho - out.rho * h);
    for (const Eigen::MatrixXd* c : {&ops.emission, &ops.pump, &ops.mirror}) {
        const Eigen::MatrixXcd cc = (c->transpose() * (*c)).cast<Complex>();
        const Eigen::MatrixXcd cz = c->cast<Complex>();
        drho += cz * out.rho * cz.adjoint() - 0.5 * (cc * out.rho + out.rho * cc);
    }
    const double residual = drho.cwiseAbs().maxCoeff();
    if (residual > 1e-9) {
        std::ostringstream msg;
        msg << "steady-state residual " << residual << " exceeds 1e-9";
        throw SteadyStateError(msg.str());
    }

    const Eigen::VectorXd eigs =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(out.rho).eigenvalues();
    if (eigs.minCoeff() < -1e-9) {
        std::ostringstream msg;
        msg << "steady state is not positive semidefinite (min eigenvalue "
            << eigs.minCoeff() << ")";
        throw SteadyStateError(msg.str());
    }
    return out;
}

TwoQubitDensity reduce_to_atoms(const FullDensity& full) {
    const int nf = full.fock_cutoff + 1;
    if (full.rho.rows() != 4 * nf || full.rho.cols() != 4 * nf)
        throw std::invalid_argument("density matrix shape does not match its cutoff");
    TwoQubitDensity out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < nf; ++c)
                out.elements(a, b) += full.rho(a * nf + c, b * nf + c);
    return out;
}

FullDensity propagate(const Liouvillian& liouvillian, const FullDensity& rho0,
                      double t_final, double dt) {
    const int dim = 4 * (liouvillian.params.fock_cutoff + 1);
    if (rho0.fock_cutoff != liouvillian.params.fock_cutoff)
        throw std::invalid_argument("initial state cutoff does not match the generator");
    if (rho0.rho.rows() != dim || rho0.rho.cols() != dim)
        throw std::invalid_argument("density matrix shape does not match its cutoff");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("propagate needs dt > 0");
    if (t_final < 0.0 || !std::isfinite(t_final))
        throw std::invalid_argument("propagate needs t_final >= 0");

    Eigen::VectorXcd y =
        Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), dim * dim);
    const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    double t = 0.0;
    for (long s = 0; s < steps; ++s) {
        const double h = std::min(dt, t_final - t);
        const Eigen::VectorXcd k1 = liouvillian.matrix * y;
        const Eigen::VectorXcd k2 = liouvillian.matrix * (y + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = liouvillian.matrix * (y + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = liouvillian.matrix * (y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    FullDensity out;
    out.fock_cutoff = rho0.fock_cutoff;
    out.rho = Eigen::Map<const Eigen::MatrixXcd>(y.data(), dim, dim);
    return out;
}

ComparisonReport compare_with_rate_model(const OracleParams& params) {
    params.validate();
    ComparisonReport report;
    report.params = params;
    report.validity_ratio = params.validity_ratio();
    report.validity_warning = report.validity_ratio < 10.0;

    report.rate_pops = steady_state_closed_form(params.system);
    report.rate_concurrence = concurrence_closed_form(report.rate_pops).value;

    const TwoQubitDensity atoms = reduce_to_atoms(oracle_steady_state(params));
    report.oracle_diag = atoms.elements.diagonal().real();
    report.oracle_concurrence = concurrence_general(atoms).value;

    report.cutoff_low = std::max(3, params.fock_cutoff - 1);
    report.cutoff_high = params.fock_cutoff + 1;
    OracleParams lo = params;
    lo.fock_cutoff = report.cutoff_low;
    OracleParams hi = params;
    hi.fock_cutoff = report.cutoff_high;
    const TwoQubitDensity atoms_lo = reduce_to_atoms(oracle_steady_state(lo));
    const TwoQubitDensity atoms_hi = reduce_to_atoms(oracle_steady_state(hi));
    report.cutoff_concurrence_diff =
        std::abs(concurrence_general(atoms_lo).value -
                 concurrence_general(atoms_hi).value);
    report.cutoff_element_diff =
        (atoms_lo.elements - atoms_hi.elements).cwiseAbs().maxCoeff();

    report.assumptions = {
        "emission is a single collective channel: the atoms couple "
        "indistinguishably to the field and the antisymmetric states stay dark",
        "the pump raises the cavity photon number isometrically at its rate, "
        "independent of the photon number",
        "the mirror removes one photon at rate K(n) from every n-photon state",
        "the steady state is solved in the atom-exchange-symmetric sector; the "
        "dark ladder is dynamically isolated and starts unpopulated",
    };

    if (report.cutoff_concurrence_diff > 1e-6) {
        std::ostringstream msg;
        msg << "concurrence changed by " << report.cutoff_concurrence_diff
            << " between fock cutoffs " << report.cutoff_low << " and "
            << report.cutoff_high << "; raise fock_cutoff";
        throw CutoffError(msg.str());
    }
    return report;
}

}  // namespace nlcavity
