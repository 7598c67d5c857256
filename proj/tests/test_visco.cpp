#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "asrmeso/errors.hpp"
#include "asrmeso/rng.hpp"
#include "asrmeso/viscoelastic.hpp"
#include "asrmeso/voigt.hpp"

using namespace asrmeso;

namespace {

// Calibrated paste chain used across the tests.
KelvinChain paste_chain() {
    KelvinChain c;
    c.E0 = 20e9;
    c.E_inf = {12e9, 8e9, 0.7e9};
    c.tau = {5.0, 50.0, 300.0};
    c.alpha = 0.001;
    return c;
}

}

TEST_SUITE_BEGIN("constitutive");

TEST_CASE("closed-form stiffness and compliance match the explicit 6x6 matrices") {
    Rng rng(5);
    for (double nu : {0.0, 0.2, 0.3}) {
        const auto D = oracles::stiffness_matrix(nu);
        const auto C = oracles::compliance_matrix(nu);
        for (int trial = 0; trial < 20; ++trial) {
            Voigt v;
            for (double& x : v)
                x = rng.uniform(-1.0, 1.0);
            const Voigt s1 = unit_stiffness_apply(nu, v);
            const Voigt s2 = oracles::apply(D, v);
            const Voigt e1 = unit_compliance_apply(nu, v);
            const Voigt e2 = oracles::apply(C, v);
            for (int i = 0; i < 6; ++i) {
                CHECK(s1[i] == doctest::Approx(s2[i]).epsilon(1e-12));
                CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-12));
            }
            // Round trip.
            const Voigt back = unit_compliance_apply(nu, s1);
            for (int i = 0; i < 6; ++i)
                CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("compliance maps hydrostatic stress to hydrostatic strain scaled by 1-2nu") {
    const double nu = 0.2;
    const Voigt sig = {3e6, 3e6, 3e6, 0, 0, 0};
    const Voigt eps = unit_compliance_apply(nu, sig);
    for (int i = 0; i < 3; ++i)
        CHECK(eps[i] == doctest::Approx(3e6 * (1.0 - 2.0 * nu)).epsilon(1e-14));
    for (int i = 3; i < 6; ++i)
        CHECK(eps[i] == 0.0);
}

TEST_CASE("solidified volume function") {
    KelvinChain c = paste_chain();
    c.age_offset = 0.0;
    CHECK(solid_volume(c, 1.0) == doctest::Approx(1.0 / (0.001 + 1.0)).epsilon(1e-14));
    CHECK(solid_volume(c, 100.0) == doctest::Approx(1.0 / (0.001 + 0.1)).epsilon(1e-14));
}

TEST_CASE("vanishing step recovers the instantaneous modulus") {
    KelvinChain c = paste_chain();
    const ViscoStep s = begin_step(c, 10.0, 1e-12);
    CHECK(s.E_n == doctest::Approx(c.E0).epsilon(1e-9));
    for (std::size_t mu = 0; mu < c.tau.size(); ++mu) {
        CHECK(s.beta[mu] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.lam[mu] == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(begin_step(c, 1.0, 0.0), NumericalError);
}

TEST_CASE("zero stress history produces zero creep") {
    KelvinChain c = paste_chain();
    ChainState st;
    const ViscoStep s = begin_step(c, 5.0, 0.1);
    const Voigt d = creep_increment(c, s, st, 0.2);
    for (double x : d)
        CHECK(x == 0.0);
}

TEST_CASE("unit stress decay is a semigroup under constant total stress") {
    KelvinChain c = paste_chain();
    ChainState one, two;
    for (std::size_t mu = 0; mu < c.tau.size(); ++mu)
        for (int i = 0; i < 6; ++i)
            one.sigma_mu[mu][i] = two.sigma_mu[mu][i] = 1e6 * (1.0 + double(mu) + 0.1 * i);

    const Voigt zero{};
    const double dt = 2.0;
    update_unit_stresses(c, begin_step(c, 10.0, dt), one, zero);
    update_unit_stresses(c, begin_step(c, 10.0, dt / 2), two, zero);
    update_unit_stresses(c, begin_step(c, 10.0 + dt / 2, dt / 2), two, zero);

    for (std::size_t mu = 0; mu < c.tau.size(); ++mu)
        for (int i = 0; i < 6; ++i)
            CHECK(two.sigma_mu[mu][i] ==
                  doctest::Approx(one.sigma_mu[mu][i]).epsilon(1e-10));
}

TEST_CASE("instantaneous loading charges the dashpots with the full stress") {
    KelvinChain c = paste_chain();
    ChainState st;
    const Voigt sig = {0, 0, -5e6, 0, 0, 0};
    const ViscoStep jump = begin_instantaneous_step(c);
    CHECK(jump.E_n == c.E0);
    const Voigt d = creep_increment(c, jump, st, 0.2);
    for (double x : d)
        CHECK(x == 0.0);
    update_unit_stresses(c, jump, st, sig);
    for (std::size_t mu = 0; mu < c.tau.size(); ++mu)
        CHECK(st.sigma_mu[mu][2] == -5e6);
}

TEST_CASE("creep curve converges against a 100x finer reference") {
    KelvinChain c = paste_chain();
    const std::vector<double> t_q = {10, 100, 350};
    const auto coarse = oracles::creep_axial_curve(c, 0.2, -5e6, 0.5, t_q);
    const auto fine = oracles::creep_axial_curve(c, 0.2, -5e6, 0.005, t_q);
    REQUIRE(coarse.size() == 3);
    REQUIRE(fine.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(coarse[i] - fine[i]) <= 0.005 * std::abs(fine[i]));
        CHECK(coarse[i] < 0.0);  // compression
    }
    // Creep strain grows in magnitude.
    CHECK(std::abs(fine[2]) > std::abs(fine[1]));
    CHECK(std::abs(fine[1]) > std::abs(fine[0]));
}

TEST_CASE("creep response is linear in the applied stress") {
    KelvinChain c = paste_chain();
    const std::vector<double> t_q = {10, 100, 350};
    const auto five = oracles::creep_axial_curve(c, 0.2, -5e6, 0.25, t_q);
    const auto ten = oracles::creep_axial_curve(c, 0.2, -10e6, 0.25, t_q);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(ten[i] - 2.0 * five[i]) <= 1e-6 * std::abs(ten[i]));
}

TEST_CASE("chain validation") {
    KelvinChain c = paste_chain();
    c.tau.pop_back();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = paste_chain();
    c.E0 = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = paste_chain();
    c.E_inf[1] = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_SUITE_END();
