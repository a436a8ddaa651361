#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fluxlab {

// A double-well potential on the circle, parametrized by arclength
// s in [-pi, pi).  Wells sit at s = 0 and s = pi with V(0) = V(pi) = 0,
// and V satisfies the mirror symmetry V(pi - s) = V(s).
//
// Immutable after construction; all evaluations are pure and safe to share
// across threads.
struct PotentialSpec {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv1;
    std::function<double(double)> deriv2;
    bool is_even = false;               // V(-s) = V(s)
    bool analytic_derivatives = false;  // derivatives are closed-form, not FD

    double operator()(double s) const { return eval(s); }
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationReport {
    bool passed = false;
    std::vector<CheckResult> checks;
};

// Built-in families:
//   sin2                 V(s) = sin^2 s
//   scaled_sin2 [c]      V(s) = c sin^2 s, c > 0
//   tilted_sin2 [c]      V(s) = sin^2(s) (1 + c sin s), |c| < 1
PotentialSpec builtin_potential(const std::string& name,
                                const std::vector<double>& params = {});

// Potential from tabulated (s, V) samples on [-pi, pi), interpolated by a
// periodic cubic spline.  Requires at least 4096 rows.
PotentialSpec potential_from_samples(std::vector<double> s, std::vector<double> v,
                                     const std::string& name = "tabulated");
PotentialSpec load_potential_csv(const std::string& path);

// Grid checks of the double-well requirements (wells at 0 and pi,
// non-degenerate, V >= 0, mirror symmetry, periodicity).  Failures are
// reported, not thrown.
ValidationReport validate_double_well(const PotentialSpec& spec, double tol = 1e-9);

// Well curvature constant sqrt(V''(0)/2).  Throws DegenerateWellError when
// V''(0) <= 0, ValidationError when the two wells disagree grossly.
double kappa(const PotentialSpec& spec);

} // namespace fluxlab
