#pragma once

#include "asrmeso/materials.hpp"
#include "asrmeso/voigt.hpp"

namespace asrmeso {

// Reaction state of one gel pocket. s_acc integrates the thermal factor
// exp(-E_a/(R T)) over real time; the remaining reactant fraction is
// A = max((C - s_acc)/C, 0), so the eigen-strain saturates at K*C/2 once
// the reactant is exhausted.
struct GelState {
    double eps_gel = 0.0;  // isotropic eigen-strain component
    double s_acc = 0.0;    // days
};

// Thermal rate factor exp(-E_a/(R T)) for a temperature in kelvin.
double gel_rate_factor(const GelKinetics& k, double T_kelvin);

// One forward-Euler step of the kinetics over dt_real days at constant
// temperature. First order in dt_real.
void gel_strain_step(const GelKinetics& k, GelState& state, double T_kelvin, double dt_real);

// Closed-form eigen-strain at accumulated thermal time s (constant
// temperature): K * (s - s^2 / (2C)) up to saturation. Oracle for tests and
// reporting.
double gel_strain_closed_form(const GelKinetics& k, double s_acc);

// Stress in a gel element: linear elasticity against the eigen-strain,
// sigma = E * D_nu * (eps_total - eps_gel * I). Gel neither creeps nor
// damages.
Voigt gel_stress(const ElasticParams& gel, const Voigt& eps_total, double eps_gel);

}
