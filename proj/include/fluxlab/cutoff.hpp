#pragma once

#include <cmath>

namespace fluxlab {

enum class CutoffProfile { poly_smooth, exp_bump };

// Smooth cutoff chi_r with chi_r = 1 on B_r(pi - 2 eta), supp chi_r inside
// B_r(pi - eta), 0 <= chi_r <= 1; chi_l is the reflection chi_r(pi - s).
// poly_smooth uses a degree-7 C^3 polynomial ramp, exp_bump the standard
// e^{-1/x} glue (C^infinity).
struct CutoffSpec {
    double eta = 0.3;
    CutoffProfile profile = CutoffProfile::poly_smooth;

    double chi_r(double s) const;
    double chi_r_d1(double s) const;
    double chi_r_d2(double s) const;

    double chi_l(double s) const;
    double chi_l_d1(double s) const;
    double chi_l_d2(double s) const;

    double plateau_edge() const { return M_PI - 2.0 * eta; } // chi_r = 1 inside
    double support_edge() const { return M_PI - eta; }       // chi_r = 0 outside
};

CutoffSpec build_cutoff(double eta, CutoffProfile profile = CutoffProfile::poly_smooth);

} // namespace fluxlab
