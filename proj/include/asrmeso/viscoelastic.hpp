#pragma once

#include <array>
#include <vector>

#include "asrmeso/materials.hpp"
#include "asrmeso/voigt.hpp"

namespace asrmeso {

// Exponential-algorithm integration of the solidifying Kelvin chain. The
// per-unit internal variable sigma_mu is the dashpot stress; for constant
// total stress its decay over a step is exact, so halving the step changes
// nothing (semigroup property). Per-step coefficients depend only on
// (dt_real, t_real), never on element state, so they are computed once per
// step and shared across all paste elements.

// Solidified volume function v(t), t in days since casting.
double solid_volume(const KelvinChain& chain, double t_days);

struct ViscoStep {
    double E_n = 0.0;            // incremental modulus for this step, Pa
    double v_half = 0.0;         // v(t) at mid-step
    std::vector<double> beta;    // exp(-dt_r / tau_mu)
    std::vector<double> lam;     // (1 - beta) * tau_mu / dt_r
    // 1-beta and 1-lam kept separately: forming them by subtraction loses
    // all precision once dt_r << tau_mu.
    std::vector<double> beta_c;
    std::vector<double> lam_c;
    bool instantaneous = false;  // dt_real -> 0 limit (preload phase)
};

// Coefficients for one step from t_real to t_real + dt_real (days, measured
// from simulation start; the chain's age_offset is added internally).
// Throws NumericalError for dt_real <= 0.
ViscoStep begin_step(const KelvinChain& chain, double t_real, double dt_real);

// Limit dt_real -> 0: beta = lam = 1, E_n = E0, zero creep increment. Used
// to apply loads "statically" before the physical clock starts.
ViscoStep begin_instantaneous_step(const KelvinChain& chain);

struct ChainState {
    std::array<Voigt, 8> sigma_mu{};  // dashpot stress per unit, Pa
};

// Creep strain increment for this step given the unit stresses at t_n.
// sigma_mu points at one Voigt per chain unit (the solver stores them in a
// flat per-element array; ChainState is the convenient fixed-size wrapper).
Voigt creep_increment(const KelvinChain& chain, const ViscoStep& step,
                      const Voigt* sigma_mu, double nu);
Voigt creep_increment(const KelvinChain& chain, const ViscoStep& step,
                      const ChainState& state, double nu);

// Advances the unit stresses once the total stress increment of the step is
// known: sigma_mu <- lam * d_sigma + beta * sigma_mu.
void update_unit_stresses(const KelvinChain& chain, const ViscoStep& step,
                          Voigt* sigma_mu, const Voigt& d_sigma);
void update_unit_stresses(const KelvinChain& chain, const ViscoStep& step,
                          ChainState& state, const Voigt& d_sigma);

}
