#pragma once

#include <functional>
#include <vector>

namespace fluxlab::quad {

// Adaptive Gauss-Kronrod integration of f over [a,b] to relative tolerance
// rel_tol.  Throws QuadratureError (with the achieved residual) when the
// error estimate does not meet the target; an absolute estimate below
// abs_floor is always accepted (the estimate saturates at a rounding floor
// for small-measure panels and near removable singularities).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_floor = 0.0);

// Same, but the domain is pre-split at the interior points in `splits`
// (used across kinks of sqrt(V) at zeros of V).
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> splits, double rel_tol = 1e-12,
                       double abs_floor = 0.0);

// Fixed-order Gauss-Legendre nodes/weights on [-1,1], by Newton iteration on
// the Legendre recurrence.  Used for panel quadrature of wavefunction
// overlap integrals.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Nodes/weights mapped to [a,b].
void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights);

} // namespace fluxlab::quad
