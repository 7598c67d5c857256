#include "asrmeso/sieve.hpp"

#include <cmath>
#include <string>

#include "asrmeso/errors.hpp"

namespace asrmeso {

void SieveCurve::validate() const {
    if (!(d_min > 0.0) || !(d_min < d_max))
        throw ConfigError("sieve curve: need 0 < d_min < d_max, got d_min=" +
                          std::to_string(d_min) + " d_max=" + std::to_string(d_max));
    if (!(n_f > 0.0))
        throw ConfigError("sieve curve: grading exponent n_f must be > 0");
    if (!(v0_agg > 0.0) || !(v0_agg < 1.0))
        throw ConfigError("sieve curve: batch fraction v0_agg must be in (0,1)");
}

double SieveCurve::v_agg() const {
    return v0_agg * (1.0 - std::pow(d_min / d_max, n_f));
}

double sample_diameter(const SieveCurve& curve, double u) {
    const double p_min = std::pow(curve.d_min / curve.d_max, curve.n_f);
    const double p = u * (1.0 - p_min) + p_min;
    return curve.d_max * std::pow(p, 1.0 / curve.n_f);
}

}
