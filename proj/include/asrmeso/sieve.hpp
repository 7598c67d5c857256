#pragma once

namespace asrmeso {

// Power-law grading curve P(d) = (d/d_max)^n_f describing the cumulative
// passing fraction by weight of the aggregate batch. Only diameters inside
// [d_min, d_max] are realized as spheres, so the simulated volume fraction
// is v0_agg scaled by the covered part of the curve.
struct SieveCurve {
    double d_min = 0;   // smallest simulated diameter, mm
    double d_max = 0;   // largest sieve diameter, mm
    double n_f = 0.5;   // grading exponent
    double v0_agg = 0;  // total aggregate volume fraction of the batch

    // Throws ConfigError unless 0 < d_min < d_max, n_f > 0, 0 < v0_agg < 1.
    void validate() const;

    // Simulated aggregate fraction: v0_agg * (1 - (d_min/d_max)^n_f).
    double v_agg() const;
};

// Inverse-CDF sampling of a diameter: u uniform in [0,1) maps to d in
// [d_min, d_max] so that the passing fraction of the sample population
// reproduces the renormalized grading curve. Monotone in u; u=0 -> d_min.
double sample_diameter(const SieveCurve& curve, double u);

}
