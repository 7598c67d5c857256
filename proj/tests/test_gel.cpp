#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "asrmeso/errors.hpp"
#include "asrmeso/gel.hpp"

using namespace asrmeso;

namespace {

GelKinetics base_kinetics() {
    GelKinetics k;
    k.K = 2500;
    k.C = 50e-5;
    k.E_a = 43500;
    k.R = 8.1344;
    return k;
}

constexpr double kT30 = 303.15;

double integrate(const GelKinetics& k, double T, double t_end, long steps) {
    GelState st;
    const double dt = t_end / steps;
    for (long i = 0; i < steps; ++i)
        gel_strain_step(k, st, T, dt);
    return st.eps_gel;
}

}

TEST_SUITE_BEGIN("constitutive");

TEST_CASE("full reactant at start, first-order depletion afterwards") {
    GelKinetics k = base_kinetics();
    GelState st;
    const double rate = gel_rate_factor(k, kT30);
    CHECK(rate == doctest::Approx(2.1822858847896157e-08).epsilon(1e-12));

    const double dt = 1.0;
    gel_strain_step(k, st, kT30, dt);
    // One step: A evaluated after the reactant update.
    const double expected = k.K * (1.0 - rate * dt / k.C) * rate * dt;
    CHECK(st.eps_gel == doctest::Approx(expected).epsilon(1e-12));
    CHECK(st.s_acc == doctest::Approx(rate * dt).epsilon(1e-12));
}

TEST_CASE("eigen-strain saturates at K*C/2") {
    GelKinetics k = base_kinetics();
    k.K = 1000;
    k.C = 1e-5;
    const double t_sat = k.C / gel_rate_factor(k, kT30);  // about 458 days
    const double plateau = k.K * k.C / 2.0;               // 0.5 percent
    CHECK(plateau == doctest::Approx(0.005).epsilon(1e-12));

    const double got = integrate(k, kT30, 1.5 * t_sat, 10000);
    CHECK(std::abs(got - plateau) <= 0.01 * plateau);
}

TEST_CASE("forward Euler converges at first order") {
    GelKinetics k = base_kinetics();
    k.K = 1000;
    k.C = 1e-5;
    const double t_end = 1.2 * k.C / gel_rate_factor(k, kT30);
    const double exact = gel_strain_closed_form(k, gel_rate_factor(k, kT30) * t_end);
    const double e1 = std::abs(integrate(k, kT30, t_end, 400) - exact);
    const double e2 = std::abs(integrate(k, kT30, t_end, 800) - exact);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("450-day strain at 30 C matches the closed form") {
    GelKinetics k = base_kinetics();
    const double rate = gel_rate_factor(k, kT30);
    const double exact = gel_strain_closed_form(k, rate * 450.0);
    CHECK(exact == doctest::Approx(0.024309621137433731).epsilon(1e-12));

    const double got = integrate(k, kT30, 450.0, 20000);
    CHECK(std::abs(got - exact) <= 0.005 * exact);
}

TEST_CASE("reaction stops once the reactant is exhausted") {
    GelKinetics k = base_kinetics();
    k.C = 1e-7;  // saturates within a few one-day steps
    GelState st;
    for (int i = 0; i < 100; ++i)
        gel_strain_step(k, st, kT30, 1.0);
    const double frozen = st.eps_gel;
    CHECK(frozen > 0.0);
    CHECK(st.s_acc > k.C);
    for (int i = 0; i < 10; ++i)
        gel_strain_step(k, st, kT30, 1.0);
    CHECK(st.eps_gel == frozen);
}

TEST_CASE("gel stress vanishes at free expansion and matches the 6x6 oracle") {
    ElasticParams gel{10e9, 0.2};
    const double eg = 0.01;

    const Voigt free_exp = {eg, eg, eg, 0, 0, 0};
    for (double s : gel_stress(gel, free_exp, eg))
        CHECK(s == doctest::Approx(0.0).epsilon(1e-20));

    // Fully constrained: isotropic compressive stress E*eps/(1-2nu).
    const Voigt zero{};
    const Voigt s = gel_stress(gel, zero, eg);
    for (int i = 0; i < 3; ++i)
        CHECK(s[i] == doctest::Approx(-10e9 * eg / 0.6).epsilon(1e-12));
    for (int i = 3; i < 6; ++i)
        CHECK(s[i] == 0.0);

    // Cross-check against the explicit matrix form.
    const auto D = oracles::stiffness_matrix(gel.nu);
    Voigt eps = {0.003, -0.001, 0.002, 4e-4, -2e-4, 1e-4};
    Voigt shifted = eps;
    for (int i = 0; i < 3; ++i)
        shifted[i] -= eg;
    Voigt want = oracles::apply(D, shifted);
    for (double& w : want)
        w *= gel.E;
    const Voigt got = gel_stress(gel, eps, eg);
    for (int i = 0; i < 6; ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("kinetics validation") {
    GelKinetics k = base_kinetics();
    k.C = 0;
    CHECK_THROWS_AS(k.validate(), ConfigError);
    k = base_kinetics();
    k.R = -1;
    CHECK_THROWS_AS(k.validate(), ConfigError);
    CHECK_THROWS_AS(gel_rate_factor(base_kinetics(), -5.0), ConfigError);
}

TEST_SUITE_END();
