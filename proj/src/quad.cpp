#include "fluxlab/quad.hpp"
#include "fluxlab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace fluxlab::quad {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_floor) {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, rel_tol, &error, &l1);
    const double scale = std::max(l1, 1e-300);
    if (error > rel_tol * scale && error > 1e-15 * scale && error > abs_floor) {
        throw QuadratureError("adaptive quadrature did not reach tolerance", error / scale);
    }
    return value;
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> splits, double rel_tol, double abs_floor) {
    const double sgn = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    std::vector<double> pts{lo};
    std::sort(splits.begin(), splits.end());
    for (double p : splits)
        if (p > lo + 1e-15 && p < hi - 1e-15) pts.push_back(p);
    pts.push_back(hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate(f, pts[i], pts[i + 1], rel_tol, abs_floor);
    return sgn * total;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess for the i-th positive root.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

void gauss_legendre_ab(int n, double a, double b,
                       std::vector<double>& nodes, std::vector<double>& weights) {
    gauss_legendre(n, nodes, weights);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
}

} // namespace fluxlab::quad
