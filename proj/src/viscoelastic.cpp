#include "asrmeso/viscoelastic.hpp"

#include <cmath>

#include "asrmeso/errors.hpp"

namespace asrmeso {

void KelvinChain::validate() const {
    if (!(E0 > 0.0))
        throw ConfigError("kelvin chain: E0 must be positive");
    if (E_inf.size() != tau.size())
        throw ConfigError("kelvin chain: unit modulus and retardation lists differ in length");
    if (E_inf.size() > 8)
        throw ConfigError("kelvin chain: at most 8 units supported");
    for (double e : E_inf)
        if (!(e > 0.0))
            throw ConfigError("kelvin chain: unit moduli must be positive");
    for (double t : tau)
        if (!(t > 0.0))
            throw ConfigError("kelvin chain: retardation times must be positive");
    if (!(alpha > 0.0) || !(lambda0 > 0.0))
        throw ConfigError("kelvin chain: alpha and lambda0 must be positive");
    if (age_offset < 0.0)
        throw ConfigError("kelvin chain: age offset must be >= 0");
}

double solid_volume(const KelvinChain& chain, double t_days) {
    return 1.0 / (chain.alpha + std::sqrt(chain.lambda0 / t_days));
}

ViscoStep begin_step(const KelvinChain& chain, double t_real, double dt_real) {
    if (!(dt_real > 0.0))
        throw NumericalError("viscoelastic step requires dt_real > 0");
    ViscoStep s;
    const std::size_t n = chain.E_inf.size();
    s.beta.resize(n);
    s.lam.resize(n);
    s.beta_c.resize(n);
    s.lam_c.resize(n);
    s.v_half = solid_volume(chain, chain.age_offset + t_real + 0.5 * dt_real);
    double compliance = 1.0 / chain.E0;
    for (std::size_t mu = 0; mu < n; ++mu) {
        const double x = dt_real / chain.tau[mu];
        const double em = -std::expm1(-x);  // 1 - e^-x without cancellation
        s.beta[mu] = 1.0 - em;
        s.lam[mu] = em / x;
        s.beta_c[mu] = em;
        // 1 - (1-e^-x)/x = x/2 - x^2/6 + ...; the direct form cancels badly
        // for small x, the series is exact enough below the switch point.
        s.lam_c[mu] = x < 1e-3 ? x * (0.5 - x * (1.0 / 6.0 - x / 24.0))
                               : 1.0 - s.lam[mu];
        compliance += s.lam_c[mu] / (s.v_half * chain.E_inf[mu]);
    }
    s.E_n = 1.0 / compliance;
    return s;
}

ViscoStep begin_instantaneous_step(const KelvinChain& chain) {
    ViscoStep s;
    const std::size_t n = chain.E_inf.size();
    s.beta.assign(n, 1.0);
    s.lam.assign(n, 1.0);
    s.beta_c.assign(n, 0.0);
    s.lam_c.assign(n, 0.0);
    s.v_half = 0.0;
    s.E_n = chain.E0;
    s.instantaneous = true;
    return s;
}

Voigt creep_increment(const KelvinChain& chain, const ViscoStep& step,
                      const Voigt* sigma_mu, double nu) {
    Voigt acc{};
    if (step.instantaneous)
        return acc;
    for (std::size_t mu = 0; mu < chain.E_inf.size(); ++mu) {
        const double w = step.beta_c[mu] / (step.v_half * chain.E_inf[mu]);
        for (int i = 0; i < 6; ++i)
            acc[i] += w * sigma_mu[mu][i];
    }
    return unit_compliance_apply(nu, acc);
}

Voigt creep_increment(const KelvinChain& chain, const ViscoStep& step,
                      const ChainState& state, double nu) {
    return creep_increment(chain, step, state.sigma_mu.data(), nu);
}

void update_unit_stresses(const KelvinChain& chain, const ViscoStep& step,
                          Voigt* sigma_mu, const Voigt& d_sigma) {
    for (std::size_t mu = 0; mu < chain.E_inf.size(); ++mu)
        for (int i = 0; i < 6; ++i)
            sigma_mu[mu][i] = step.lam[mu] * d_sigma[i] + step.beta[mu] * sigma_mu[mu][i];
}

void update_unit_stresses(const KelvinChain& chain, const ViscoStep& step,
                          ChainState& state, const Voigt& d_sigma) {
    update_unit_stresses(chain, step, state.sigma_mu.data(), d_sigma);
}

}
