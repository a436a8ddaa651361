#pragma once

#include "fluxlab/agmon.hpp"
#include "fluxlab/cutoff.hpp"
#include "fluxlab/logscalar.hpp"
#include "fluxlab/potential.hpp"
#include "fluxlab/spectral.hpp"

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace fluxlab {

// Pair of gauge-dressed quasimodes on the circle,
//   f_r = chi_r e^{-i xi0 s / h} phi_r,
//   f_l = chi_l e^{+-i xi0 pi / h} e^{-i xi0 s / h} phi_l,
// with the branch sign of the xi0 pi phase following the piecewise convention
// of the left eigenfunction on (-pi, pi).
struct QuasimodeBasis {
    std::shared_ptr<const RefinedWavefunction> phi;
    CutoffSpec cutoff;
    double h = 0.0;
    double xi0 = 0.0;

    std::complex<double> f_r(double s) const;
    std::complex<double> f_l(double s) const;
    // log magnitude and phase split, for tail-resolved quadrature
    LogComplex f_r_log(double s) const;
    LogComplex f_l_log(double s) const;
};

QuasimodeBasis quasimode_basis(std::shared_ptr<const RefinedWavefunction> phi_r,
                               const CutoffSpec& cutoff, double h, double xi0);

struct InteractionData {
    LogComplex T;                // overlap <f_r, f_l>
    double norm_r = 0.0;         // <f_r, f_r>
    double norm_l = 0.0;
    LogComplex w_lr;             // interaction coefficient
    LogComplex w_rl;             // independently computed partner
    LogComplex w_up, w_down;     // path-resolved components of w_lr
    double gap = 0.0;            // 2 |w_lr|
    double gap_log = 0.0;        // natural log
};

// Overlap entries of the Gram matrix T (off-diagonal) and the quasimode
// norms, by log-rescaled panel quadrature.
InteractionData overlap_matrix(const QuasimodeBasis& basis);

// Interaction coefficient from the boundary Wronskian expression
//   w_lr = 2 h^2 ( e^{i xi0 pi/h} phi(pi/2) phi'(pi/2)
//                - e^{-i xi0 pi/h} phi(-pi/2) phi'(-pi/2) ),
// with tail-refined values of phi, phi' at +-pi/2.
InteractionData interaction_wronskian(const RefinedWavefunction& phi, double h, double xi0);

// Same coefficient through the raw commutator integrals
// w_{alpha,beta} = <[L, chi_alpha] phi_alpha, f_beta>; independent of the
// Wronskian algebra and the source of the Hermiticity check.
LogComplex interaction_commutator(const QuasimodeBasis& basis, Well alpha);

// Relative standard deviation of Wronsk(s) = phi_l phi_r' - phi_l' phi_r
// sampled across [a, b].  phi_l is the reflection U phi_l_source.
double wronskian_constancy(const RefinedWavefunction& phi_r,
                           const RefinedWavefunction& phi_l_source, double a, double b,
                           int samples = 33);

struct SplittingConfig {
    int K = -1;            // Fourier modes; <= 0 selects the default
    int n = 4097;          // Dirichlet interior points
    double eta = 0.3;
    double quad_tol = 1e-12;
    bool route_direct = true;
    bool route_wronskian = true;
    bool route_leading = true;
    // Optional caches for sweeps (xi0-independent work).
    const AgmonConstants* constants = nullptr;
    const RefinedWavefunction* wavefunction = nullptr;
};

struct SplittingResult {
    double h = 0.0, xi0 = 0.0;

    double gap_direct = 0.0;
    bool direct_below_floor = false;
    double lambda1 = 0.0, lambda2 = 0.0;

    LogComplex w_lr, w_up, w_down;
    double gap_wronskian = 0.0;
    double gap_wronskian_log10 = 0.0;

    double gap_leading = 0.0;
    double log10_gap_leading = 0.0;
    double w_up_log10 = 0.0, w_down_log10 = 0.0;
    double phase_up = 0.0, phase_down = 0.0;

    double lambda_single_well = 0.0;     // Dirichlet ground energy (extrapolated)
    double interaction_lambda1 = 0.0;    // eigenvalues of the 2x2 D + W
    double interaction_lambda2 = 0.0;

    std::vector<std::string> flags;
    std::string flags_joined() const;
};

SplittingResult splitting_estimate(const PotentialSpec& spec, double h, double xi0,
                                   const SplittingConfig& config = {});

} // namespace fluxlab
