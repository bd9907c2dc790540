#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlcavity/kinetics.hpp"

using namespace nlcavity;

namespace {

SystemParams make(double gamma, double pump, double k1, double eta) {
    return SystemParams{gamma, pump, k1, eta};
}

Eigen::Vector4d as_vector(const ManifoldPopulations& p) {
    return {p.p_g, p.p_s1, p.p_s2, p.p_oprime2};
}

}  // namespace

TEST_CASE("photon-number dependent mirror rate") {
    auto p = make(1.0, 0.5, 2.0, 7.0);
    CHECK(p.K(0) == 0.0);
    CHECK(p.K(1) == 2.0);
    CHECK(p.K(2) == 14.0);
    CHECK(p.K(5) == 14.0);
    CHECK_THROWS_AS(p.K(-1), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(make(1.0, 0.0, 0.0, 0.0).validate());
    CHECK_THROWS_AS(make(0.0, 1.0, 1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make(1.0, -0.1, 1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make(1.0, 1.0, -1.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make(1.0, 1.0, 1.0, -2.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make(1.0, std::nan(""), 1.0, 1.0).validate(),
                    std::invalid_argument);
}

TEST_CASE("population container invariants") {
    ManifoldPopulations p;
    CHECK(p.sum() == 1.0);
    CHECK_NOTHROW(p.validate());
    p.p_g = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.p_s1 = 0.5;
    CHECK_NOTHROW(p.validate());
    p.p_s1 = -0.1;
    p.p_g = 1.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("overflow fractions at the unit point") {
    auto f = correction_factors(make(1.0, 1.0, 1.0, 1.0));
    CHECK(f.alpha == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    CHECK(f.beta == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("overflow fractions are one without pumping") {
    auto f = correction_factors(make(1.0, 0.0, 3.0, 12.0));
    CHECK(f.alpha == 1.0);
    CHECK(f.beta == 1.0);
}

TEST_CASE("overflow fractions agree with the explicit three-quanta balance") {
    // alpha is the n=2 share of a two-level ladder where the pump feeds the
    // n=3 state and that state drains at 3Gamma/2 + K(3eta+1)/4; beta is the
    // analogue for the o' ladder with drain Gamma + K(eta+1)/2.
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double G = u(rng), P = u(rng), K = u(rng), e = 4.0 * u(rng);
        auto f = correction_factors(make(G, P, K, e));

        const double drain_s3 = 1.5 * G + 0.25 * K * (3.0 * e + 1.0);
        Eigen::Matrix2d sys;
        sys << -drain_s3, P, 1.0, 1.0;
        Eigen::Vector2d rhs(0.0, 1.0);
        Eigen::Vector2d sol = sys.fullPivLu().solve(rhs);  // (p_s3, p_s2)
        CHECK(f.alpha == doctest::Approx(sol(1)).epsilon(1e-12));

        const double drain_o3 = G + 0.5 * K * (e + 1.0);
        sys << -drain_o3, P, 1.0, 1.0;
        sol = sys.fullPivLu().solve(rhs);
        CHECK(f.beta == doctest::Approx(sol(1)).epsilon(1e-12));
    }
}

TEST_CASE("generator entries at the unit point") {
    Eigen::Matrix4d expected;
    expected << -1.0, 1.5, 0.0, 0.0,
                 1.0, -2.5, 2.25, 1.5,
                 0.0, 0.75, -2.25, 0.0,
                 0.0, 0.25, 0.0, -1.5;
    auto bare = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0), false);
    CHECK((bare.generator - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_FALSE(bare.corrected);

    auto corr = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0));
    Eigen::Matrix4d scaled = expected;
    scaled.col(2) *= 5.0 / 7.0;
    scaled.col(3) *= 2.0 / 3.0;
    CHECK((corr.generator - scaled).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(corr.corrected);
    CHECK(corr.params.pump == 1.0);
}

TEST_CASE("generator columns sum to zero and transfers are nonnegative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto params = make(std::pow(10.0, u(rng)), std::pow(10.0, u(rng)),
                           std::pow(10.0, u(rng)), 0.1 + 49.9 * (u(rng) + 2.0) / 4.0);
        for (bool corrected : {false, true}) {
            auto m = build_rate_matrix(params, corrected);
            for (int j = 0; j < 4; ++j) {
                CHECK(std::abs(m.generator.col(j).sum()) <=
                      1e-12 * m.generator.cwiseAbs().maxCoeff());
                for (int i = 0; i < 4; ++i)
                    if (i != j) CHECK(m.generator(i, j) >= 0.0);
            }
        }
    }
}

TEST_CASE("steady state at pinned parameter points") {
    struct Anchor {
        SystemParams params;
        Eigen::Vector4d pops;
    };
    const Anchor anchors[] = {
        {make(1.0, 1.0, 1.0, 1.0),
         {0.466321243523316, 0.31088082901554404, 0.1450777202072539,
          0.07772020725388602}},
        {make(1.0, 5.0, 2.0, 10.0),
         {0.1811558372100064, 0.45288959302501586, 0.2930462072514809,
          0.07290836251349687}},
        {make(1.0, 2.0, 0.5, 12.0),
         {0.258150489649188, 0.4130407834387009, 0.25288211230940866,
          0.07592661460270235}},
    };
    for (const auto& a : anchors) {
        auto closed = steady_state_closed_form(a.params);
        CHECK((as_vector(closed) - a.pops).cwiseAbs().maxCoeff() < 1e-14);
        auto numeric = steady_state_numeric(build_rate_matrix(a.params));
        CHECK((as_vector(numeric) - a.pops).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(closed.p_dark1 == 0.0);
        CHECK(closed.p_dark2 == 0.0);
    }
}

TEST_CASE("closed form matches the numeric null space across the rate space") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    std::uniform_real_distribution<double> etad(0.1, 50.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto params = make(1.0, std::pow(10.0, logu(rng)),
                           std::pow(10.0, logu(rng)), etad(rng));
        auto closed = steady_state_closed_form(params);
        auto numeric = steady_state_numeric(build_rate_matrix(params));
        CHECK((as_vector(closed) - as_vector(numeric)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(closed.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("no pump means a pure ground state") {
    auto closed = steady_state_closed_form(make(1.0, 0.0, 2.0, 5.0));
    CHECK(closed.p_g == 1.0);
    CHECK(closed.p_s1 == 0.0);
    CHECK(closed.p_s2 == 0.0);
    CHECK(closed.p_oprime2 == 0.0);
    auto numeric = steady_state_numeric(build_rate_matrix(make(1.0, 0.0, 2.0, 5.0)));
    CHECK((as_vector(numeric) - as_vector(closed)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("steady state without a mirror still balances") {
    auto pops = steady_state_closed_form(make(2.0, 3.0, 0.0, 1.0));
    CHECK(pops.sum() == doctest::Approx(1.0).epsilon(1e-12));
    auto numeric = steady_state_numeric(build_rate_matrix(make(2.0, 3.0, 0.0, 1.0)));
    CHECK((as_vector(pops) - as_vector(numeric)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rate rescaling leaves the distribution unchanged") {
    auto base = steady_state_closed_form(make(1.0, 1.7, 0.6, 9.0));
    auto scaled = steady_state_closed_form(make(3.0, 3.0 * 1.7, 3.0 * 0.6, 9.0));
    CHECK((as_vector(base) - as_vector(scaled)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("degenerate generators are reported, not solved") {
    RateMatrix m;
    m.generator = Eigen::Matrix4d::Zero();
    CHECK_THROWS_AS(steady_state_numeric(m), SteadyStateError);

    // two decoupled blocks, each with its own stationary vector
    m.generator << -1.0, 1.0, 0.0, 0.0,
                    1.0, -1.0, 0.0, 0.0,
                    0.0, 0.0, -2.0, 2.0,
                    0.0, 0.0, 2.0, -2.0;
    CHECK_THROWS_AS(steady_state_numeric(m), SteadyStateError);
}

TEST_CASE("relaxation reaches the steady state") {
    auto params = make(1.0, 1.0, 1.0, 1.0);
    auto m = build_rate_matrix(params);
    ManifoldPopulations ground;
    auto traj = evolve(m, ground, 60.0, 0.01);
    REQUIRE(!traj.states.empty());
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(60.0).epsilon(1e-12));

    auto target = steady_state_closed_form(params);
    CHECK((as_vector(traj.states.back()) - as_vector(target)).cwiseAbs().maxCoeff() <
          1e-8);
    for (size_t i = 0; i < traj.states.size(); ++i)
        CHECK(std::abs(traj.states[i].sum() - 1.0) <= 1e-9);
}

TEST_CASE("dark populations ride along unchanged") {
    ManifoldPopulations initial;
    initial.p_g = 0.3;
    initial.p_s1 = 0.2;
    initial.p_s2 = 0.1;
    initial.p_oprime2 = 0.1;
    initial.p_dark1 = 0.2;
    initial.p_dark2 = 0.1;
    auto traj = evolve(build_rate_matrix(make(1.0, 2.0, 1.0, 5.0)), initial, 30.0,
                       0.01, {10, 0.0});
    for (const auto& s : traj.states) {
        CHECK(s.p_dark1 == 0.2);
        CHECK(s.p_dark2 == 0.1);
        CHECK(std::abs(s.sum() - 1.0) <= 1e-9);
    }
}

TEST_CASE("recording stride thins the trajectory") {
    ManifoldPopulations ground;
    auto m = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0));
    auto dense = evolve(m, ground, 1.0, 0.01);
    auto thin = evolve(m, ground, 1.0, 0.01, {25, 0.0});
    CHECK(dense.times.size() == 101);  // t=0 plus 100 steps
    CHECK(thin.times.size() == 5);     // t=0, 4 strided records incl. the end
    CHECK(thin.times.back() == dense.times.back());
}

TEST_CASE("early stop once the derivative is small") {
    ManifoldPopulations ground;
    auto m = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0));
    auto traj = evolve(m, ground, 500.0, 0.01, {1, 1e-10});
    CHECK(traj.times.back() < 500.0);
    auto target = steady_state_closed_form(make(1.0, 1.0, 1.0, 1.0));
    CHECK((as_vector(traj.states.back()) - as_vector(target)).cwiseAbs().maxCoeff() <
          1e-9);
}

TEST_CASE("a step too large for the rates is diagnosed") {
    ManifoldPopulations ground;
    auto m = build_rate_matrix(make(1.0, 5.0, 5.0, 5.0));
    CHECK_THROWS_AS(evolve(m, ground, 50.0, 5.0), EvolveError);
}

TEST_CASE("evolve validates its inputs") {
    ManifoldPopulations ground;
    auto m = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0));
    CHECK_THROWS_AS(evolve(m, ground, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve(m, ground, -1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(evolve(m, ground, 1.0, 0.1, {0, 0.0}), std::invalid_argument);
    ManifoldPopulations bad;
    bad.p_g = 0.5;
    CHECK_THROWS_AS(evolve(m, bad, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("zero-horizon evolution returns the initial state") {
    ManifoldPopulations ground;
    auto m = build_rate_matrix(make(1.0, 1.0, 1.0, 1.0));
    auto traj = evolve(m, ground, 0.0, 0.1);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.states[0].p_g == 1.0);
}
