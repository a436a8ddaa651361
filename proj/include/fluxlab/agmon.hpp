#pragma once

#include "fluxlab/logscalar.hpp"
#include "fluxlab/potential.hpp"

#include <complex>
#include <string>

namespace fluxlab {

enum class Well { right, left };

// Agmon distance to the chosen well:
//   Phi_r(s) = int_{[0,s]} sqrt(V),   s in [-pi, pi]
//   Phi_l(s) = int_{[pi,s]} sqrt(V),  s in [0, 2pi]
// Both are >= 0 and vanish at the well center; |Phi'|^2 = V.
double phase_profile(const PotentialSpec& spec, double s, Well well = Well::right);

// Signed exponent integral int_0^s (d_sigma sqrt(V) - sign(sigma) kappa) / sqrt(V).
// The integrand has a removable singularity at sigma = 0, handled by a Taylor
// expansion on [0, delta] (see agmon_constants).  Shared by the amplitude
// constants A_u, A_d and the WKB transport amplitude.
double amplitude_exponent_integral(const PotentialSpec& spec, double s,
                                   double quad_tol = 1e-12);

// Every scalar entering the leading-order gap formula.
struct AgmonConstants {
    double kappa = 0.0;
    double S_u = 0.0, S_d = 0.0, S = 0.0; // Agmon actions, upper/lower half-circle
    double A_u = 0.0, A_d = 0.0;          // amplitude constants
    double V_half_up = 0.0;               // V(pi/2)
    double V_half_down = 0.0;             // V(-pi/2)
    bool is_even = false;                 // carried from the potential, not serialized

    std::string to_json() const;
};

AgmonConstants agmon_constants(const PotentialSpec& spec, double quad_tol = 1e-12);

// Leading interaction coefficient and gap prediction:
//   w0 = 2 h^{1/2} sqrt(kappa/pi) ( A_u sqrt(V(pi/2))  e^{(i xi0 pi - S_u)/h}
//                                 + A_d sqrt(V(-pi/2)) e^{(-i xi0 pi - S_d)/h} )
struct GapPrediction {
    LogComplex w0;
    std::complex<double> w0_value; // plain value; underflows outside double range
    double gap_leading = 0.0;      // 2 |w0|
    double gap_leading_log = 0.0;  // natural log of 2|w0| (-inf when zero)
    double remainder_scale = 0.0;  // h^{3/2} e^{-S/h}, coefficient unknown
    double remainder_log = 0.0;
};

GapPrediction leading_interaction(const AgmonConstants& c, double h, double xi0);

// Even-potential closed form (equals 2|w0| for even V):
//   8 h^{1/2} A sqrt(V(pi/2)) sqrt(kappa/pi) |cos(xi0 pi / h)| e^{-S/h}
double predicted_gap_even(const AgmonConstants& c, double h, double xi0);
double predicted_gap_even_log(const AgmonConstants& c, double h, double xi0);

} // namespace fluxlab
