#pragma once

#include "fluxlab/cutoff.hpp"
#include "fluxlab/potential.hpp"

#include <utility>

namespace fluxlab {

// Leading transport amplitude of the WKB Ansatz,
//   a0(s) = (kappa/pi)^{1/4} exp( - int_0^s (Phi'' - kappa) / (2 Phi') ),
// solving Phi' a0' + (Phi' a0)' = kappa a0 with a0(0) = (kappa/pi)^{1/4}.
double transport_amplitude(const PotentialSpec& spec, double s);

// First WKB quasimode psi(s) = chi_r(s) h^{-1/4} e^{-Phi_r(s)/h} a0(s) with
// quasi-eigenvalue mu = kappa h (truncation order j = 0).
class WkbQuasimode {
public:
    WkbQuasimode(PotentialSpec spec, double h, CutoffSpec cutoff);

    double h() const { return h_; }
    double mu() const { return mu_; }                 // kappa h
    const CutoffSpec& cutoff() const { return cutoff_; }

    double phase(double s) const;                     // Phi_r(s)
    double amplitude(double s) const;                 // a0(s)
    double eval(double s) const;                      // psi(s)
    double deriv(double s) const;                     // psi'(s), exact product rule

    // e^{Phi/h}-weighted value and derivative (no exponentials involved);
    // these are the natural quantities for tail-resolved comparisons.
    double weighted(double s) const;
    double weighted_deriv(double s) const;

    // e^{Phi/h} (h^2 D^2 + V - mu) psi at s, all derivatives analytic.
    double weighted_residual(double s) const;

private:
    PotentialSpec spec_;
    double h_ = 0.0, mu_ = 0.0, kappa_ = 0.0, a0_scale_ = 0.0;
    CutoffSpec cutoff_;
    double g0_ = 0.0, g1_ = 0.0; // Taylor of the transport integrand at 0

    double transport_g(double s) const;    // a0'/a0 = -g/2
    double transport_g_d1(double s) const; // g'
};

WkbQuasimode build_quasimode(const PotentialSpec& spec, double h, const CutoffSpec& cutoff);

// sup over [k_lo, k_hi] of the weighted residual; scales like h^{7/4} at
// truncation order 0.
double wkb_residual(const PotentialSpec& spec, double h, const CutoffSpec& cutoff,
                    double k_lo, double k_hi, int samples = 201);

struct WkbComparison {
    double sup_err_value = 0.0;
    double sup_err_deriv = 0.0;
    double scale_value = 0.0; // h^{-1/4} (kappa/pi)^{1/4}, for relative reporting
};

// Weighted sup distance between the Dirichlet ground state and the rescaled
// quasimode (matched at s = 0) over [k_lo, k_hi].
WkbComparison wkb_vs_numeric(const PotentialSpec& spec, double h, double k_lo, double k_hi,
                             int samples = 201, int grid_n = 4097);

} // namespace fluxlab
