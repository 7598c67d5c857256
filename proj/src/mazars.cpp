#include "asrmeso/mazars.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "asrmeso/errors.hpp"

namespace asrmeso {

void MazarsParams::validate() const {
    if (!(k0 > 0.0))
        throw ConfigError("damage: onset strain k0 must be positive");
    if (!(B_t > 0.0) || !(B_c > 0.0))
        throw ConfigError("damage: B_t and B_c must be positive");
    if (A_t < 0.0 || A_c < 0.0)
        throw ConfigError("damage: A_t and A_c must be >= 0");
    if (eps_ult != 0.0 && eps_ult <= k0)
        throw ConfigError("damage: eps_ult must exceed k0");
}

double effective_strain(const std::array<double, 3>& principal) {
    double s = 0.0;
    for (double e : principal) {
        const double ep = std::max(e, 0.0);
        s += ep * ep;
    }
    return std::sqrt(s);
}

double tension_weight(const std::array<double, 3>& principal, double nu) {
    const double lam = nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = 0.5 / (1.0 + nu);
    const double tr = principal[0] + principal[1] + principal[2];

    double et2 = 0.0;
    std::array<double, 3> sig_pos;
    double tr_pos = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ep = std::max(principal[i], 0.0);
        et2 += ep * ep;
        sig_pos[i] = std::max(lam * tr + 2.0 * mu * principal[i], 0.0);
        tr_pos += sig_pos[i];
    }
    if (et2 == 0.0)
        return 0.0;

    // Strains that the positive part of the principal stress would produce;
    // their projection on the positive principal strains defines the weight.
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double eps_t = (1.0 + nu) * sig_pos[i] - nu * tr_pos;
        acc += eps_t * std::max(principal[i], 0.0);
    }
    return std::clamp(acc / et2, 0.0, 1.0);
}

namespace {

double damage_branch(double k0, double A, double B, double et) {
    const double d = 1.0 - k0 * (1.0 - A) / et - A * std::exp(-B * (et - k0));
    return std::clamp(d, 0.0, 1.0);
}

}

MazarsResult mazars_update(const MazarsParams& p, MazarsState& state,
                           const Voigt& eps_elastic, double E, double nu) {
    const Sym3 t = strain_to_tensor(eps_elastic);
    const double thresh = std::max(state.kappa, p.k0);

    // Frobenius norm bounds the effective strain from above; below the
    // threshold no damage growth is possible and the eigensolve is skipped.
    if (tensor_norm2(t) > thresh * thresh) {
        const auto principal = principal_values(t);
        const double et = effective_strain(principal);
        if (et > thresh) {
            state.kappa = et;
            const double d_t = damage_branch(p.k0, p.A_t, p.B_t, et);
            const double d_c = damage_branch(p.k0, p.A_c, p.B_c, et);
            const double a_t = tension_weight(principal, nu);
            state.D = std::max(state.D, a_t * d_t + (1.0 - a_t) * d_c);
        }
    }
    if (p.eps_ult > 0.0 && state.kappa >= p.eps_ult)
        state.D = 1.0;

    MazarsResult r;
    r.D = state.D;
    r.stress = unit_stiffness_apply(nu, eps_elastic);
    const double factor = (1.0 - state.D) * E;
    for (double& c : r.stress)
        c *= factor;
    return r;
}

double uniaxial_tension_stress(const MazarsParams& p, double E, double eps) {
    if (eps <= p.k0)
        return E * eps;
    const double d = damage_branch(p.k0, p.A_t, p.B_t, eps);
    return (1.0 - d) * E * eps;
}

namespace {

// Closed-form integral of the uncapped uniaxial tension curve from 0 to x,
// for unit modulus. The exponential tail integrates exactly; the residual
// plateau k0*(1-A_t) makes the integral unbounded whenever A_t < 1.
double tension_area_unit(const MazarsParams& p, double x) {
    const double k0 = p.k0, A = p.A_t, B = p.B_t;
    if (x <= k0)
        return 0.5 * x * x;
    const double tail = (k0 / B + 1.0 / (B * B)) -
                        (x / B + 1.0 / (B * B)) * std::exp(-B * (x - k0));
    return 0.5 * k0 * k0 + k0 * (1.0 - A) * (x - k0) + A * tail;
}

}

double crack_band_eps_ult(const MazarsParams& p, double E, double G_f, double h_m) {
    if (!(E > 0.0) || !(G_f > 0.0) || !(h_m > 0.0))
        throw ConfigError("crack band calibration needs positive E, G_f, h");
    if (p.A_t > 1.0)
        throw CalibrationError("crack band calibration requires A_t <= 1");

    const double want = G_f / (h_m * E);  // target area for unit modulus
    if (p.A_t == 1.0) {
        const double asymptote = 0.5 * p.k0 * p.k0 +
                                 p.A_t * (p.k0 / p.B_t + 1.0 / (p.B_t * p.B_t));
        if (asymptote <= want) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "fracture energy not reachable: dissipation asymptote %.6g J/m^3 "
                          "below G_f/h = %.6g J/m^3",
                          asymptote * E, want * E);
            throw CalibrationError(msg);
        }
    }

    if (tension_area_unit(p, p.k0) >= want)
        throw CalibrationError(
            "fracture energy below the elastic-branch dissipation; eps_ult would not exceed k0");

    double lo = p.k0, hi = 2.0 * p.k0;
    while (tension_area_unit(p, hi) < want) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6)
            throw CalibrationError("crack band calibration failed to bracket eps_ult");
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (tension_area_unit(p, mid) < want ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}
