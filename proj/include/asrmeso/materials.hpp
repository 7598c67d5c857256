#pragma once

#include <vector>

namespace asrmeso {

// All moduli in Pa, times in days unless noted.

// Solidifying Kelvin chain for the cement paste: a lone spring E0 in series
// with Kelvin units (E_mu, tau_mu) whose stiffness grows with the solidified
// volume v(t) = 1 / (alpha + sqrt(lambda0 / t)). age_offset shifts the
// solidification clock so that a simulation starting at t_real = 0 sees
// material of that age.
struct KelvinChain {
    double E0 = 0.0;
    std::vector<double> E_inf;  // asymptotic unit moduli
    std::vector<double> tau;    // retardation times, days
    double alpha = 0.001;
    double lambda0 = 1.0;       // days
    double age_offset = 28.0;   // days

    void validate() const;
};

// Isotropic damage driven by the positive principal elastic strains.
// eps_ult is the strain at which the element is considered fully cracked;
// it comes from the crack-band calibration, not from the data sheet.
struct MazarsParams {
    double k0 = 0.0;   // damage onset strain
    double A_t = 0.0, B_t = 0.0;
    double A_c = 0.0, B_c = 0.0;
    double eps_ult = 0.0;

    void validate() const;
};

struct ElasticParams {
    double E = 0.0;
    double nu = 0.0;
};

// First-order reaction producing an isotropic gel eigen-strain:
//   deps_gel/dt = K * A(t) * exp(-E_a / (R T)),
// where A(t) is the remaining reactant fraction and the integral of the
// thermal factor saturates at C. R is configurable and kept at the value
// used for the reference calibration.
struct GelKinetics {
    double K = 0.0;     // 1/day
    double C = 0.0;     // days
    double E_a = 43500; // J/mol
    double R = 8.1344;  // J/(mol K)

    void validate() const;
};

}
