#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "asrmeso/errors.hpp"
#include "asrmeso/mazars.hpp"
#include "asrmeso/rng.hpp"

using namespace asrmeso;

namespace {

MazarsParams paste_damage() {
    MazarsParams p;
    p.k0 = 2e-4;
    p.A_t = 0.65;
    p.B_t = 3100;
    p.A_c = 1.00;
    p.B_c = 2300;
    return p;
}

MazarsParams aggregate_damage() {
    MazarsParams p;
    p.k0 = 1.67e-4;
    p.A_t = 0.65;
    p.B_t = 3550;
    p.A_c = 1.20;
    p.B_c = 1800;
    return p;
}

// Drives a fresh element along a monotone uniaxial-stress strain path (the
// lateral contraction -nu*eps keeps the transverse stress at zero for any
// scalar damage level) and returns the largest axial stress seen.
double simulated_peak(const MazarsParams& p, double E, double nu) {
    MazarsState st;
    double peak = 0.0;
    std::vector<double> grid;
    for (int i = 1; i <= 4000; ++i)
        grid.push_back(5.0 / p.B_t * i / 4000.0);
    grid.push_back(1.0 / p.B_t);  // analytic argmax of the tension curve
    std::sort(grid.begin(), grid.end());
    for (double eps : grid) {
        const Voigt e = {eps, -nu * eps, -nu * eps, 0, 0, 0};
        const MazarsResult r = mazars_update(p, st, e, E, nu);
        peak = std::max(peak, r.stress[0]);
    }
    return peak;
}

// Rotation of a symmetric tensor by an axis-angle rotation matrix.
Voigt rotate_strain(const Voigt& eps, const std::array<std::array<double, 3>, 3>& R) {
    const Sym3 t = strain_to_tensor(eps);
    const double m[3][3] = {{t.xx, t.xy, t.xz}, {t.xy, t.yy, t.yz}, {t.xz, t.yz, t.zz}};
    double rm[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                rm[i][j] += R[i][k] * m[k][j];
    double out[3][3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                out[i][j] += rm[i][k] * R[j][k];
    return {out[0][0], out[1][1], out[2][2],
            2.0 * out[1][2], 2.0 * out[0][2], 2.0 * out[0][1]};
}

std::array<std::array<double, 3>, 3> axis_angle(double ux, double uy, double uz, double th) {
    const double n = std::sqrt(ux * ux + uy * uy + uz * uz);
    ux /= n;
    uy /= n;
    uz /= n;
    const double c = std::cos(th), s = std::sin(th), t = 1 - c;
    return {{{c + ux * ux * t, ux * uy * t - uz * s, ux * uz * t + uy * s},
             {uy * ux * t + uz * s, c + uy * uy * t, uy * uz * t - ux * s},
             {uz * ux * t - uy * s, uz * uy * t + ux * s, c + uz * uz * t}}};
}

}

TEST_SUITE_BEGIN("constitutive");

TEST_CASE("principal values solve the characteristic polynomial") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Sym3 m = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                  rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto e = principal_values(m);
        CHECK(e[0] >= e[1]);
        CHECK(e[1] >= e[2]);
        CHECK(e[0] + e[1] + e[2] == doctest::Approx(m.xx + m.yy + m.zz).epsilon(1e-9));
        for (double lam : e) {
            const double a = m.xx - lam, b = m.yy - lam, c = m.zz - lam;
            const double det = a * (b * c - m.yz * m.yz) - m.xy * (m.xy * c - m.yz * m.xz) +
                               m.xz * (m.xy * m.yz - b * m.xz);
            CHECK(std::abs(det) < 1e-9);
        }
    }
    // Triple eigenvalue (hydrostatic).
    const auto e = principal_values({2e-4, 2e-4, 2e-4, 0, 0, 0});
    CHECK(e[0] == doctest::Approx(2e-4).epsilon(1e-14));
    CHECK(e[2] == doctest::Approx(2e-4).epsilon(1e-14));
}

TEST_CASE("effective strain uses only positive principal strains") {
    CHECK(effective_strain({2e-4, -1e-4, -3e-4}) == doctest::Approx(2e-4).epsilon(1e-14));
    CHECK(effective_strain({-1e-4, -1e-4, -1e-4}) == 0.0);
    const double e = 3e-4;
    CHECK(effective_strain({e, e, e}) == doctest::Approx(std::sqrt(3.0) * e).epsilon(1e-14));
}

TEST_CASE("damage onset: at the threshold strain the response is still elastic") {
    const MazarsParams p = paste_damage();
    MazarsState st;
    const double nu = 0.2, E = 20e9;
    const Voigt eps = {p.k0, -nu * p.k0, -nu * p.k0, 0, 0, 0};
    const MazarsResult r = mazars_update(p, st, eps, E, nu);
    CHECK(r.D == 0.0);
    CHECK(r.stress[0] == doctest::Approx(E * p.k0).epsilon(1e-12));  // 4 MPa for paste
    // Lateral stresses vanish only up to roundoff of the axial scale.
    CHECK(std::abs(r.stress[1]) < 1e-12 * E * p.k0);
    CHECK(std::abs(r.stress[2]) < 1e-12 * E * p.k0);
}

TEST_CASE("uniaxial tension peak matches the closed form and the strength scale") {
    // Closed form: max of (1-D_t(e))*E*e at e = 1/B_t.
    auto closed_peak = [](const MazarsParams& p, double E) {
        return E * (p.k0 * (1 - p.A_t) + p.A_t / p.B_t * std::exp(p.B_t * p.k0 - 1.0));
    };

    const double paste_cf = closed_peak(paste_damage(), 20e9);
    CHECK(paste_cf == doctest::Approx(4267805.9096).epsilon(1e-6));
    const double paste_sim = simulated_peak(paste_damage(), 20e9, 0.2);
    CHECK(std::abs(paste_sim - paste_cf) <= 1e-6 * paste_cf);
    CHECK(std::abs(paste_sim - 4e6) <= 0.10 * 4e6);

    const double agg_cf = closed_peak(aggregate_damage(), 60e9);
    CHECK(agg_cf == doctest::Approx(10818613.9987).epsilon(1e-6));
    const double agg_sim = simulated_peak(aggregate_damage(), 60e9, 0.2);
    CHECK(std::abs(agg_sim - agg_cf) <= 1e-6 * agg_cf);
    CHECK(std::abs(agg_sim - 10e6) <= 0.10 * 10e6);
}

TEST_CASE("tension weight is exact for uniaxial states") {
    const double nu = 0.2;
    // Uniaxial tension: alpha_t = 1.
    CHECK(tension_weight({3e-4, -nu * 3e-4, -nu * 3e-4}, nu) == 1.0);
    // Uniaxial compression: no positive principal stress, alpha_t = 0.
    CHECK(tension_weight({nu * 3e-4, nu * 3e-4, -3e-4}, nu) == 0.0);
    // No positive principal strain at all.
    CHECK(tension_weight({-1e-4, -2e-4, -3e-4}, nu) == 0.0);
}

TEST_CASE("tension and compression weights add to one") {
    const double nu = 0.2;
    const double lam = nu / ((1 + nu) * (1 - 2 * nu));
    const double mu = 0.5 / (1 + nu);
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<double, 3> e = {rng.uniform(-5e-4, 5e-4), rng.uniform(-5e-4, 5e-4),
                                   rng.uniform(-5e-4, 5e-4)};
        const double et2 = std::pow(std::max(e[0], 0.0), 2) + std::pow(std::max(e[1], 0.0), 2) +
                           std::pow(std::max(e[2], 0.0), 2);
        if (et2 == 0.0)
            continue;
        // Independent computation of both weights from stress sign splits.
        const double tr = e[0] + e[1] + e[2];
        double a_t = 0.0, a_c = 0.0;
        double sp[3], sn[3], trp = 0, trn = 0;
        for (int i = 0; i < 3; ++i) {
            const double s = lam * tr + 2 * mu * e[i];
            sp[i] = std::max(s, 0.0);
            sn[i] = std::min(s, 0.0);
            trp += sp[i];
            trn += sn[i];
        }
        for (int i = 0; i < 3; ++i) {
            const double ep = std::max(e[i], 0.0);
            a_t += ((1 + nu) * sp[i] - nu * trp) * ep;
            a_c += ((1 + nu) * sn[i] - nu * trn) * ep;
        }
        a_t /= et2;
        a_c /= et2;
        CHECK(a_t + a_c == doctest::Approx(1.0).epsilon(1e-10));
        const double impl = tension_weight(e, nu);
        CHECK(impl == doctest::Approx(std::clamp(a_t, 0.0, 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("damage and effective strain are basis independent") {
    const MazarsParams p = paste_damage();
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        Voigt eps;
        for (double& x : eps)
            x = rng.uniform(-6e-4, 6e-4);
        const auto R = axis_angle(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                                  rng.uniform(0, 3.14));
        const Voigt rot = rotate_strain(eps, R);

        MazarsState a, b;
        const MazarsResult ra = mazars_update(p, a, eps, 20e9, 0.2);
        const MazarsResult rb = mazars_update(p, b, rot, 20e9, 0.2);
        CHECK(a.kappa == doctest::Approx(b.kappa).epsilon(1e-9));
        CHECK(ra.D == doctest::Approx(rb.D).epsilon(1e-9));
    }
}

TEST_CASE("damage never decreases along random strain walks") {
    const MazarsParams p = paste_damage();
    Rng rng(47);
    for (int walk = 0; walk < 10; ++walk) {
        MazarsState st;
        Voigt eps{};
        double last_D = 0.0, last_kappa = 0.0;
        for (int step = 0; step < 200; ++step) {
            for (double& x : eps)
                x += rng.uniform(-1e-4, 1e-4);
            const MazarsResult r = mazars_update(p, st, eps, 20e9, 0.2);
            CHECK(r.D >= last_D);
            CHECK(st.kappa >= last_kappa);
            if (r.D > 0.0)
                CHECK(st.kappa >= p.k0);
            CHECK(r.D <= 1.0);
            last_D = r.D;
            last_kappa = st.kappa;
        }
    }
}

TEST_CASE("hydrostatic compression never damages") {
    const MazarsParams p = paste_damage();
    MazarsState st;
    for (int i = 1; i <= 100; ++i) {
        const double e = -1e-3 * i;
        const MazarsResult r = mazars_update(p, st, {e, e, e, 0, 0, 0}, 20e9, 0.2);
        CHECK(r.D == 0.0);
    }
}

TEST_CASE("reaching eps_ult caps damage at one with exactly zero stress") {
    MazarsParams p = paste_damage();
    p.eps_ult = 0.02;
    MazarsState st;
    const double nu = 0.2;
    MazarsResult r{};
    for (double e = 1e-4; e < 0.021; e += 1e-4)
        r = mazars_update(p, st, {e, -nu * e, -nu * e, 0, 0, 0}, 20e9, nu);
    CHECK(r.D == 1.0);
    for (double s : r.stress)
        CHECK(s == 0.0);
    // Unloading afterwards keeps D = 1.
    r = mazars_update(p, st, {1e-5, 0, 0, 0, 0, 0}, 20e9, nu);
    CHECK(r.D == 1.0);
}

TEST_CASE("crack band calibration dissipates G_f over the band") {
    const double E = 20e9, G_f = 60.0, h = 0.002;
    const MazarsParams p = paste_damage();
    const double eps_ult = crack_band_eps_ult(p, E, G_f, h);
    CHECK(eps_ult == doctest::Approx(0.0198).epsilon(0.15));

    // Independent quadrature of the stress-strain curve, split at the kink.
    auto sigma = [&](double e) { return uniaxial_tension_stress(p, E, e); };
    const double area = oracles::simpson(sigma, 0.0, p.k0, 2000) +
                        oracles::simpson(sigma, p.k0, eps_ult, 200000);
    CHECK(h * area == doctest::Approx(G_f).epsilon(1e-4));

    // Finer bands need larger ultimate strains to dissipate the same energy.
    const double eps_ult_fine = crack_band_eps_ult(p, E, G_f, 0.001);
    CHECK(eps_ult_fine == doctest::Approx(0.042).epsilon(0.15));
    CHECK(eps_ult_fine > eps_ult);

    const MazarsParams pa = aggregate_damage();
    const double agg = crack_band_eps_ult(pa, 60e9, 150.0, 0.002);
    CHECK(agg == doctest::Approx(0.0199).epsilon(0.15));
    auto sigma_a = [&](double e) { return uniaxial_tension_stress(pa, 60e9, e); };
    const double agg_area = oracles::simpson(sigma_a, 0.0, pa.k0, 2000) +
                            oracles::simpson(sigma_a, pa.k0, agg, 200000);
    CHECK(0.002 * agg_area == doctest::Approx(150.0).epsilon(1e-4));
}

TEST_CASE("unreachable fracture energy is a calibration error") {
    MazarsParams p = paste_damage();
    p.A_t = 1.0;  // bounded dissipation
    CHECK_THROWS_AS(crack_band_eps_ult(p, 20e9, 1e6, 0.002), CalibrationError);
}

TEST_SUITE_END();
