#include "fluxlab/numerics.hpp"
#include "fluxlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fluxlab {

double fd_derivative1(const std::function<double(double)>& f, double s, double step) {
    auto d = [&](double h) { return (f(s + h) - f(s - h)) / (2.0 * h); };
    const double c = d(step), fine = d(step / 2.0);
    return (4.0 * fine - c) / 3.0;
}

double fd_derivative2(const std::function<double(double)>& f, double s, double step) {
    auto d = [&](double h) { return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h); };
    const double c = d(step), fine = d(step / 2.0);
    return (4.0 * fine - c) / 3.0;
}

std::pair<double, double> interp_local(const std::vector<double>& xs,
                                       const std::vector<double>& ys, double x,
                                       int points) {
    const int n = static_cast<int>(xs.size());
    if (n < 2) throw ParameterError("interp_local: need at least two samples");
    points = std::min(points, n);
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    int idx = static_cast<int>(it - xs.begin());
    int lo = std::clamp(idx - points / 2, 0, n - points);

    // Lagrange polynomial through xs[lo..lo+points); value and derivative.
    double value = 0.0, deriv = 0.0;
    for (int i = 0; i < points; ++i) {
        const double xi = xs[lo + i];
        double li = 1.0;   // L_i(x)
        double dli = 0.0;  // L_i'(x)
        for (int j = 0; j < points; ++j) {
            if (j == i) continue;
            const double xj = xs[lo + j];
            const double term = (x - xj) / (xi - xj);
            dli = dli * term + li / (xi - xj);
            li *= term;
        }
        value += ys[lo + i] * li;
        deriv += ys[lo + i] * dli;
    }
    return {value, deriv};
}

PeriodicCubicSpline::PeriodicCubicSpline(std::vector<double> xs, std::vector<double> ys,
                                         double period)
    : xs_(std::move(xs)), ys_(std::move(ys)), period_(period) {
    const std::size_t n = xs_.size();
    if (n < 8) throw ParameterError("periodic spline: too few samples");
    if (ys_.size() != n) throw ParameterError("periodic spline: size mismatch");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (xs_[i + 1] <= xs_[i])
            throw ParameterError("periodic spline: abscissae must be increasing");
    if (xs_.back() - xs_.front() >= period_)
        throw ParameterError("periodic spline: samples exceed one period");

    // Cyclic tridiagonal system for knot second derivatives, solved by
    // Sherman-Morrison on top of the Thomas algorithm.
    const std::size_t N = n;
    std::vector<double> h(N);
    for (std::size_t i = 0; i + 1 < N; ++i) h[i] = xs_[i + 1] - xs_[i];
    h[N - 1] = (xs_[0] + period_) - xs_[N - 1];

    auto y_at = [&](std::size_t i) { return ys_[i % N]; };
    std::vector<double> a(N), b(N), c(N), d(N);
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t im = (i + N - 1) % N;
        a[i] = h[im];
        b[i] = 2.0 * (h[im] + h[i]);
        c[i] = h[i];
        const double dy1 = (y_at(i + 1) - y_at(i)) / h[i];
        const double dy0 = (y_at(i) - y_at(i + N - 1)) / h[im];
        d[i] = 6.0 * (dy1 - dy0);
    }

    auto thomas = [&](std::vector<double> diag, const std::vector<double>& rhs) {
        std::vector<double> x(N), cp(N);
        cp[0] = c[0] / diag[0];
        x[0] = rhs[0] / diag[0];
        for (std::size_t i = 1; i < N; ++i) {
            const double m = diag[i] - a[i] * cp[i - 1];
            cp[i] = c[i] / m;
            x[i] = (rhs[i] - a[i] * x[i - 1]) / m;
        }
        for (std::size_t i = N - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
        return x;
    };

    // Corner entries: A[0][N-1] = a[0], A[N-1][0] = c[N-1].
    const double alpha = a[0], beta = c[N - 1];
    const double gamma = -b[0];
    std::vector<double> bmod = b;
    bmod[0] -= gamma;
    bmod[N - 1] -= alpha * beta / gamma;
    std::vector<double> u(N, 0.0);
    u[0] = gamma;
    u[N - 1] = beta;

    // Solve on the modified system (rows 1..N-2 keep their sub/super diags).
    std::vector<double> x(N), z(N);
    {
        // Temporarily zero the cyclic couplings for the Thomas sweeps.
        const double a0 = a[0], cl = c[N - 1];
        a[0] = 0.0;
        c[N - 1] = 0.0;
        x = thomas(bmod, d);
        z = thomas(bmod, u);
        a[0] = a0;
        c[N - 1] = cl;
    }
    const double vx = x[0] + (alpha / gamma) * x[N - 1];
    const double vz = z[0] + (alpha / gamma) * z[N - 1];
    const double factor = vx / (1.0 + vz);
    m_.resize(N);
    for (std::size_t i = 0; i < N; ++i) m_[i] = x[i] - factor * z[i];
}

std::size_t PeriodicCubicSpline::locate(double& x) const {
    const double x0 = xs_.front();
    x = x0 + std::fmod(x - x0, period_);
    if (x < x0) x += period_;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i >= xs_.size()) i = xs_.size() - 1;
    return i;
}

double PeriodicCubicSpline::eval(double x) const {
    const std::size_t N = xs_.size();
    const std::size_t i = locate(x);
    const std::size_t j = (i + 1) % N;
    const double hi = (j == 0 ? xs_[0] + period_ : xs_[j]) - xs_[i];
    const double t = x - xs_[i];
    const double A = (hi - t) / hi, B = t / hi;
    return A * ys_[i] + B * ys_[j] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[j]) * hi * hi / 6.0;
}

double PeriodicCubicSpline::deriv1(double x) const {
    const std::size_t N = xs_.size();
    const std::size_t i = locate(x);
    const std::size_t j = (i + 1) % N;
    const double hi = (j == 0 ? xs_[0] + period_ : xs_[j]) - xs_[i];
    const double t = x - xs_[i];
    const double A = (hi - t) / hi, B = t / hi;
    return (ys_[j] - ys_[i]) / hi +
           ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[j]) * hi / 6.0;
}

double PeriodicCubicSpline::deriv2(double x) const {
    const std::size_t N = xs_.size();
    const std::size_t i = locate(x);
    const std::size_t j = (i + 1) % N;
    const double hi = (j == 0 ? xs_[0] + period_ : xs_[j]) - xs_[i];
    const double t = x - xs_[i];
    const double A = (hi - t) / hi, B = t / hi;
    return A * m_[i] + B * m_[j];
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) throw ParameterError("linear_fit: need >= 2 points");
    const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - xm) * (xs[i] - xm);
        sxy += (xs[i] - xm) * (ys[i] - ym);
        syy += (ys[i] - ym) * (ys[i] - ym);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace fluxlab
