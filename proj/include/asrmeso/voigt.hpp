#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace asrmeso {

// Voigt vector convention used throughout: (xx, yy, zz, yz, xz, xy) with
// engineering shear strain (gamma = 2*eps). Stress uses plain tensor shear
// components in the same slots. Isotropic stiffness and compliance are
// applied in closed form for a unit Young's modulus; the caller scales by E.

using Voigt = std::array<double, 6>;

struct Sym3 {
    double xx = 0, yy = 0, zz = 0, yz = 0, xz = 0, xy = 0;
};

inline Sym3 strain_to_tensor(const Voigt& e) {
    return {e[0], e[1], e[2], 0.5 * e[3], 0.5 * e[4], 0.5 * e[5]};
}

inline Sym3 stress_to_tensor(const Voigt& s) {
    return {s[0], s[1], s[2], s[3], s[4], s[5]};
}

inline double trace(const Voigt& v) { return v[0] + v[1] + v[2]; }

// sigma = D_nu * eps for unit E: normal rows mix through the Lame constant,
// shear rows see the engineering strain times the unit shear modulus.
inline Voigt unit_stiffness_apply(double nu, const Voigt& eps) {
    const double lam = nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    const double mu = 0.5 / (1.0 + nu);
    const double tr = trace(eps);
    return {lam * tr + 2.0 * mu * eps[0],
            lam * tr + 2.0 * mu * eps[1],
            lam * tr + 2.0 * mu * eps[2],
            mu * eps[3],
            mu * eps[4],
            mu * eps[5]};
}

// eps = C_nu * sigma for unit E.
inline Voigt unit_compliance_apply(double nu, const Voigt& sig) {
    const double tr = trace(sig);
    return {(1.0 + nu) * sig[0] - nu * tr,
            (1.0 + nu) * sig[1] - nu * tr,
            (1.0 + nu) * sig[2] - nu * tr,
            2.0 * (1.0 + nu) * sig[3],
            2.0 * (1.0 + nu) * sig[4],
            2.0 * (1.0 + nu) * sig[5]};
}

// Squared Frobenius norm of the strain tensor built from a Voigt strain.
// Upper bound for the sum of squared positive principal strains, used to
// skip the eigenvalue solve when no damage growth is possible.
inline double tensor_norm2(const Sym3& t) {
    return t.xx * t.xx + t.yy * t.yy + t.zz * t.zz +
           2.0 * (t.yz * t.yz + t.xz * t.xz + t.xy * t.xy);
}

// Eigenvalues of a symmetric 3x3 tensor, descending order. Trigonometric
// (Cardano) form; the shifted, scaled matrix keeps it well conditioned for
// strain magnitudes from 1e-12 to 1.
inline std::array<double, 3> principal_values(const Sym3& m) {
    const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    if (p1 == 0.0) {
        std::array<double, 3> e = {m.xx, m.yy, m.zz};
        std::sort(e.begin(), e.end(), std::greater<double>());
        return e;
    }
    const double q = (m.xx + m.yy + m.zz) / 3.0;
    const double p2 = (m.xx - q) * (m.xx - q) + (m.yy - q) * (m.yy - q) +
                      (m.zz - q) * (m.zz - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    const double bxx = (m.xx - q) / p, byy = (m.yy - q) / p, bzz = (m.zz - q) / p;
    const double bxy = m.xy / p, bxz = m.xz / p, byz = m.yz / p;
    const double detb = bxx * (byy * bzz - byz * byz) - bxy * (bxy * bzz - byz * bxz) +
                        bxz * (bxy * byz - byy * bxz);
    double r = detb / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    return {e1, e2, e3};
}

}
