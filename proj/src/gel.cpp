#include "asrmeso/gel.hpp"

#include <algorithm>
#include <cmath>

#include "asrmeso/errors.hpp"

namespace asrmeso {

void GelKinetics::validate() const {
    if (!(K >= 0.0))
        throw ConfigError("gel kinetics: rate constant K must be >= 0");
    if (!(C > 0.0))
        throw ConfigError("gel kinetics: saturation constant C must be positive");
    if (!(E_a > 0.0) || !(R > 0.0))
        throw ConfigError("gel kinetics: activation energy and gas constant must be positive");
}

double gel_rate_factor(const GelKinetics& k, double T_kelvin) {
    if (!(T_kelvin > 0.0))
        throw ConfigError("gel kinetics: temperature must be above absolute zero");
    return std::exp(-k.E_a / (k.R * T_kelvin));
}

void gel_strain_step(const GelKinetics& k, GelState& state, double T_kelvin, double dt_real) {
    const double rate = gel_rate_factor(k, T_kelvin);
    state.s_acc += rate * dt_real;
    const double A = std::max((k.C - state.s_acc) / k.C, 0.0);
    state.eps_gel += k.K * A * rate * dt_real;
}

double gel_strain_closed_form(const GelKinetics& k, double s_acc) {
    const double s = std::min(s_acc, k.C);
    return k.K * (s - s * s / (2.0 * k.C));
}

Voigt gel_stress(const ElasticParams& gel, const Voigt& eps_total, double eps_gel) {
    Voigt eps = eps_total;
    eps[0] -= eps_gel;
    eps[1] -= eps_gel;
    eps[2] -= eps_gel;
    Voigt s = unit_stiffness_apply(gel.nu, eps);
    for (double& c : s)
        c *= gel.E;
    return s;
}

}
