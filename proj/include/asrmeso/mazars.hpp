#pragma once

#include "asrmeso/materials.hpp"
#include "asrmeso/voigt.hpp"

namespace asrmeso {

// Scalar damage state of one element. kappa tracks the largest effective
// strain seen (effective threshold is max(kappa, k0), so zero-initialized
// states behave as undamaged); D only ever grows.
struct MazarsState {
    double kappa = 0.0;
    double D = 0.0;
};

struct MazarsResult {
    double D = 0.0;
    Voigt stress{};  // (1 - D) * E * D_nu * eps_elastic, exactly zero at D = 1
};

// Effective strain: root of the sum of squared positive principal strains.
double effective_strain(const std::array<double, 3>& principal);

// Tension weight alpha_t of the current principal strain state. The
// companion weight is 1 - alpha_t by construction. Returns 0 for a state
// with no positive principal strain.
double tension_weight(const std::array<double, 3>& principal, double nu);

// One damage update on the elastic strain (total minus creep minus eigen).
// Loading beyond the previous maximum evaluates the tension/compression
// damage pair at the new effective strain and combines them with the
// current-state weights; unloading leaves D frozen. kappa >= eps_ult snaps
// D to 1 (crack-band cap).
MazarsResult mazars_update(const MazarsParams& p, MazarsState& state,
                           const Voigt& eps_elastic, double E, double nu);

// Uniaxial tension response sigma(eps) implied by the tension damage law,
// without the eps_ult cap. Used by the crack-band calibration and tests.
double uniaxial_tension_stress(const MazarsParams& p, double E, double eps);

// Solves for eps_ult so that h * integral_0^eps_ult sigma(eps) deps = G_f
// (monotone bracketing + bisection, 1e-6 relative). h in metres, G_f in N/m.
// Throws CalibrationError when the curve's dissipation asymptote stays below
// G_f / h.
double crack_band_eps_ult(const MazarsParams& p, double E, double G_f, double h_m);

}
