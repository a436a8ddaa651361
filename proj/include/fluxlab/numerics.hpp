#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace fluxlab {

// Centered finite difference with one Richardson extrapolation step
// (fourth-order accurate).  Step default balances truncation against
// rounding for double precision.
double fd_derivative1(const std::function<double(double)>& f, double s,
                      double step = 1e-5);
double fd_derivative2(const std::function<double(double)>& f, double s,
                      double step = 1e-5);

// Local Lagrange interpolation of tabulated data on a sorted grid.
// Uses the `points` nearest samples; returns value and derivative at x.
std::pair<double, double> interp_local(const std::vector<double>& xs,
                                       const std::vector<double>& ys, double x,
                                       int points = 6);

// C2 cubic spline with periodic boundary on [x0, x0 + period).
// Sample abscissae must be strictly increasing inside one period.
class PeriodicCubicSpline {
public:
    PeriodicCubicSpline(std::vector<double> xs, std::vector<double> ys, double period);

    double eval(double x) const;
    double deriv1(double x) const;
    double deriv2(double x) const;

private:
    std::vector<double> xs_, ys_, m_; // m_: second derivatives at knots
    double period_;
    std::size_t locate(double& x) const;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace fluxlab
