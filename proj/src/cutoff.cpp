#include "fluxlab/cutoff.hpp"
#include "fluxlab/errors.hpp"

namespace fluxlab {

namespace {

// Ramp from 0 at x=0 to 1 at x=1 with vanishing low-order derivatives at the
// ends; value/d1/d2.

// Degree-7 "smootherstep": 35x^4 - 84x^5 + 70x^6 - 20x^7 (C^3 join).
void poly_ramp(double x, double& f, double& d1, double& d2) {
    if (x <= 0.0) { f = 0.0; d1 = 0.0; d2 = 0.0; return; }
    if (x >= 1.0) { f = 1.0; d1 = 0.0; d2 = 0.0; return; }
    const double x2 = x * x, x3 = x2 * x;
    f = x3 * x * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)));
    d1 = x3 * (140.0 + x * (-420.0 + x * (420.0 - 140.0 * x)));
    d2 = x2 * (420.0 + x * (-1680.0 + x * (2100.0 - 840.0 * x)));
}

// exp(-1/x) partition: g = a/(a+b), a = e^{-1/x}, b = e^{-1/(1-x)}.
void bump_ramp(double x, double& f, double& d1, double& d2) {
    if (x <= 1e-12) { f = 0.0; d1 = 0.0; d2 = 0.0; return; }
    if (x >= 1.0 - 1e-12) { f = 1.0; d1 = 0.0; d2 = 0.0; return; }
    const double y = 1.0 - x;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / y);
    const double ap = a / (x * x), bp = -b / (y * y);
    const double app = a * (1.0 - 2.0 * x) / (x * x * x * x);
    const double bpp = b * (1.0 - 2.0 * y) / (y * y * y * y);
    const double s = a + b, sp = ap + bp, spp = app + bpp;
    f = a / s;
    d1 = (ap * s - a * sp) / (s * s);
    d2 = (app * s - a * spp) / (s * s) - 2.0 * sp * d1 / s;
}

void ramp(CutoffProfile p, double x, double& f, double& d1, double& d2) {
    if (p == CutoffProfile::poly_smooth)
        poly_ramp(x, f, d1, d2);
    else
        bump_ramp(x, f, d1, d2);
}

} // namespace

CutoffSpec build_cutoff(double eta, CutoffProfile profile) {
    if (eta <= 0.0 || eta >= M_PI / 4.0)
        throw ParameterError("build_cutoff: eta must be in (0, pi/4)");
    return CutoffSpec{eta, profile};
}

// chi_r(s): 1 for |s| <= pi-2eta, ramp down to 0 at |s| = pi-eta.
double CutoffSpec::chi_r(double s) const {
    const double x = (support_edge() - std::abs(s)) / eta;
    double f, d1, d2;
    ramp(profile, x, f, d1, d2);
    return f;
}

double CutoffSpec::chi_r_d1(double s) const {
    const double sgn = (s >= 0.0) ? 1.0 : -1.0;
    const double x = (support_edge() - std::abs(s)) / eta;
    double f, d1, d2;
    ramp(profile, x, f, d1, d2);
    return -sgn * d1 / eta;
}

double CutoffSpec::chi_r_d2(double s) const {
    const double x = (support_edge() - std::abs(s)) / eta;
    double f, d1, d2;
    ramp(profile, x, f, d1, d2);
    return d2 / (eta * eta);
}

// chi_l = U chi_r: chi_l(s) = chi_r(pi - s), 2pi-periodic.
namespace {
double fold_pi(double s) {
    double t = M_PI - s;
    while (t > M_PI) t -= 2.0 * M_PI;
    while (t < -M_PI) t += 2.0 * M_PI;
    return t;
}
} // namespace

double CutoffSpec::chi_l(double s) const { return chi_r(fold_pi(s)); }
double CutoffSpec::chi_l_d1(double s) const { return -chi_r_d1(fold_pi(s)); }
double CutoffSpec::chi_l_d2(double s) const { return chi_r_d2(fold_pi(s)); }

} // namespace fluxlab
