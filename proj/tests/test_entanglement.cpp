#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nlcavity/entanglement.hpp"
#include "nlcavity/errors.hpp"

using namespace nlcavity;

namespace {

ManifoldPopulations bright(double g, double s1, double s2, double o2) {
    ManifoldPopulations p;
    p.p_g = g;
    p.p_s1 = s1;
    p.p_s2 = s2;
    p.p_oprime2 = o2;
    return p;
}

ManifoldPopulations random_bright(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double w[4] = {u(rng), u(rng), u(rng), u(rng)};
    double total = w[0] + w[1] + w[2] + w[3];
    return bright(w[0] / total, w[1] / total, w[2] / total,
                  1.0 - w[0] / total - w[1] / total - w[2] / total);
}

TwoQubitDensity random_density(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix4cd a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = std::complex<double>(n(rng), n(rng));
    TwoQubitDensity rho;
    rho.elements = a * a.adjoint();
    rho.elements /= rho.elements.trace();
    return rho;
}

}  // namespace

TEST_CASE("pure-component mixtures reproduce the reduced matrices") {
    auto rho_g = assemble_rho_atoms(bright(1.0, 0.0, 0.0, 0.0));
    Eigen::Matrix4cd eg = Eigen::Matrix4cd::Zero();
    eg(0, 0) = 1.0;
    CHECK((rho_g.elements - eg).cwiseAbs().maxCoeff() < 1e-15);

    auto rho_s1 = assemble_rho_atoms(bright(0.0, 1.0, 0.0, 0.0));
    Eigen::Matrix4cd e1 = Eigen::Matrix4cd::Zero();
    e1(0, 0) = 0.5;
    e1(1, 1) = e1(2, 2) = e1(1, 2) = e1(2, 1) = 0.25;
    CHECK((rho_s1.elements - e1).cwiseAbs().maxCoeff() < 1e-15);

    auto rho_o = assemble_rho_atoms(bright(0.0, 0.0, 0.0, 1.0));
    Eigen::Matrix4cd eo = Eigen::Matrix4cd::Zero();
    eo(0, 0) = eo(3, 3) = 0.5;
    CHECK((rho_o.elements - eo).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dark populations need the explicit override") {
    ManifoldPopulations p = bright(0.5, 0.0, 0.0, 0.0);
    p.p_dark1 = 0.5;
    CHECK_THROWS_AS(assemble_rho_atoms(p), std::invalid_argument);

    auto rho = assemble_rho_atoms(p, true);
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(0, 0) = 0.5;
    expected(1, 1) = expected(2, 2) = 0.25;
    expected(1, 2) = expected(2, 1) = -0.25;
    CHECK((rho.elements - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_NOTHROW(validate_density(rho));
}

TEST_CASE("assembled mixtures are valid density matrices") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial)
        CHECK_NOTHROW(validate_density(assemble_rho_atoms(random_bright(rng))));
}

TEST_CASE("double spin flip is an involution") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto rho = random_density(rng);
        auto twice = spin_flip(spin_flip(rho));
        CHECK((twice.elements - rho.elements).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("spin flip of the one-quantum mixture by hand") {
    auto rho = assemble_rho_atoms(bright(0.0, 1.0, 0.0, 0.0));
    auto flipped = spin_flip(rho);
    // (sy x sy) maps |11><11| to |22><22| and keeps the symmetric coherence.
    Eigen::Matrix4cd expected = Eigen::Matrix4cd::Zero();
    expected(3, 3) = 0.5;
    expected(1, 1) = expected(2, 2) = expected(1, 2) = expected(2, 1) = 0.25;
    CHECK((flipped.elements - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("concurrence of the kinetic components") {
    CHECK(concurrence_general(assemble_rho_atoms(bright(1.0, 0.0, 0.0, 0.0))).value ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(concurrence_general(assemble_rho_atoms(bright(0.0, 1.0, 0.0, 0.0))).value ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(concurrence_general(assemble_rho_atoms(bright(0.0, 0.0, 1.0, 0.0))).value ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(concurrence_general(assemble_rho_atoms(bright(0.0, 0.0, 0.0, 1.0))).value ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("concurrence of maximally entangled states is one") {
    TwoQubitDensity phi;  // (|11> + |22>)/sqrt(2)
    phi.elements(0, 0) = phi.elements(3, 3) = 0.5;
    phi.elements(0, 3) = phi.elements(3, 0) = 0.5;
    CHECK(concurrence_general(phi).value == doctest::Approx(1.0).epsilon(1e-12));

    TwoQubitDensity psi;  // (|12> + |21>)/sqrt(2)
    psi.elements(1, 1) = psi.elements(2, 2) = 0.5;
    psi.elements(1, 2) = psi.elements(2, 1) = 0.5;
    CHECK(concurrence_general(psi).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal densities are separable") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Vector4d d(u(rng), u(rng), u(rng), u(rng));
        d /= d.sum();
        TwoQubitDensity rho;
        rho.elements = d.cast<std::complex<double>>().asDiagonal();
        CHECK(concurrence_general(rho).value == 0.0);
    }
}

TEST_CASE("closed form agrees with the eigenvalue route on the kinetic family") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 500; ++trial) {
        auto pops = random_bright(rng);
        auto general = concurrence_general(assemble_rho_atoms(pops));
        auto closed = concurrence_closed_form(pops);
        CHECK(std::abs(general.value - closed.value) < 1e-12);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(general.lambdas[i] - closed.lambdas[i]) < 1e-10);
    }
}

TEST_CASE("no one-quantum population means no entanglement") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double a = u(rng), b = u(rng), c = u(rng);
        double total = a + b + c;
        auto pops = bright(a / total, 0.0, b / total, 1.0 - a / total - b / total);
        CHECK(concurrence_closed_form(pops).value == 0.0);
        CHECK(concurrence_general(assemble_rho_atoms(pops)).value ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("concurrence methods label their results") {
    auto pops = bright(0.4, 0.3, 0.2, 0.1);
    CHECK(concurrence_closed_form(pops).method == ConcurrenceMethod::closed_form);
    CHECK(concurrence_general(assemble_rho_atoms(pops)).method ==
          ConcurrenceMethod::general);
}

TEST_CASE("concurrence stays within [0, 1] on random densities") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto r = concurrence_general(random_density(rng));
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0 + 1e-12);
        CHECK(r.lambdas[0] >= r.lambdas[1]);
        CHECK(r.lambdas[1] >= r.lambdas[2]);
        CHECK(r.lambdas[2] >= r.lambdas[3]);
        CHECK(r.lambdas[3] >= 0.0);
    }
}

TEST_CASE("concurrence validates its input") {
    TwoQubitDensity bad;
    bad.elements = Eigen::Matrix4cd::Identity();  // trace 4
    CHECK_THROWS_AS(concurrence_general(bad), std::invalid_argument);
    ManifoldPopulations unnormalized;
    unnormalized.p_g = 0.4;
    CHECK_THROWS_AS(concurrence_closed_form(unnormalized), std::invalid_argument);
}

TEST_CASE("the closed form clamps below onset") {
    auto pops = bright(0.9, 0.05, 0.03, 0.02);
    auto closed = concurrence_closed_form(pops);
    CHECK(closed.value == 0.0);
    CHECK(concurrence_general(assemble_rho_atoms(pops)).value == 0.0);
}
