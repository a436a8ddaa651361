#include "fluxlab/spectral.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fluxlab {

namespace {

constexpr double kMatchFraction = 1e-3; // |phi(s_m)| >= 1e-3 |phi|_inf
constexpr double kInnerStop = 0.02;     // tail coverage reaches this close to the well
constexpr double kStep = 1e-4;          // RK4 step for the tail ODE
constexpr int kRecordEvery = 5;

// One inward integration of h^2 u'' = (V - lambda) u from the Dirichlet
// boundary (u = 0, |u'| = 1), renormalized to avoid overflow.  Integrating
// toward the well follows the dominant (decaying-outward) solution, so the
// profile keeps full relative accuracy however small e^{-Phi/h} gets.
TailSide integrate_side(const PotentialSpec& spec, double h, double lambda,
                        double boundary, double inner_stop) {
    TailSide side;
    side.boundary = boundary;
    const double dir = (boundary > 0.0) ? -1.0 : 1.0; // inward step direction
    const double ds = dir * kStep;
    const long steps = std::lround((std::abs(boundary - inner_stop)) / kStep);

    auto q = [&](double s) { return (spec.eval(s) - lambda) / (h * h); };

    double s = boundary;
    double u = 0.0, du = dir; // u > 0 just inside
    double log_off = 0.0;

    std::vector<double> ss, ll, rr;
    ss.reserve(steps / kRecordEvery + 2);
    ll.reserve(steps / kRecordEvery + 2);
    rr.reserve(steps / kRecordEvery + 2);

    for (long i = 0; i < steps; ++i) {
        // RK4 on (u, u')
        const double k1u = du, k1d = q(s) * u;
        const double k2u = du + 0.5 * ds * k1d, k2d = q(s + 0.5 * ds) * (u + 0.5 * ds * k1u);
        const double k3u = du + 0.5 * ds * k2d, k3d = q(s + 0.5 * ds) * (u + 0.5 * ds * k2u);
        const double k4u = du + ds * k3d, k4d = q(s + ds) * (u + ds * k3u);
        u += ds / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += ds / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        s += ds;

        if (u <= 0.0)
            throw RefinementError("tail_refine: wavefunction crossed zero inside the domain");
        if (u > 1e100) {
            u *= 1e-100;
            du *= 1e-100;
            log_off += 100.0 * std::log(10.0);
        }
        if (i % kRecordEvery == 0 || i + 1 == steps) {
            ss.push_back(s);
            ll.push_back(std::log(u) + log_off);
            rr.push_back(h * du / u);
        }
    }
    if (dir < 0.0) { // recorded in decreasing s; store ascending
        std::reverse(ss.begin(), ss.end());
        std::reverse(ll.begin(), ll.end());
        std::reverse(rr.begin(), rr.end());
    }
    side.s = std::move(ss);
    side.log_abs = std::move(ll);
    side.r = std::move(rr);
    return side;
}

} // namespace

bool TailSide::covers(double x) const {
    return !s.empty() && x >= s.front() - 1e-12 && x <= s.back() + 1e-12;
}

double TailSide::log_abs_at(double x) const {
    if (!covers(x)) throw ParameterError("TailSide: point outside refined range");
    return interp_local(s, log_abs, x, 6).first;
}

double TailSide::r_at(double x) const {
    if (!covers(x)) throw ParameterError("TailSide: point outside refined range");
    return interp_local(s, r, x, 6).first;
}

TailProfile tail_refine(const PotentialSpec& spec, double h, double eigval,
                        const EigenSolution& sol, const std::vector<double>& s_targets) {
    if (sol.basis != EigenSolution::Basis::grid)
        throw ParameterError("tail_refine: grid (Dirichlet) solution required");
    for (double t : s_targets)
        if (spec.eval(t) <= eigval)
            throw ParameterError("tail_refine: target not in the classically forbidden region");

    const int n = static_cast<int>(sol.grid.size());
    double max_abs = 0.0;
    for (int i = 0; i < n; ++i)
        max_abs = std::max(max_abs, std::abs(sol.grid_vectors(i, 0)));

    TailProfile profile;
    profile.h = h;
    profile.eigenvalue = eigval;
    profile.right = integrate_side(spec, h, eigval, sol.domain_b, kInnerStop);
    profile.left = integrate_side(spec, h, eigval, sol.domain_a, -kInnerStop);

    // Amplitude matching at the outermost grid points where the dense solve
    // still has full relative accuracy.
    int im_r = -1, im_l = -1;
    for (int i = n - 1; i >= 0; --i)
        if (sol.grid[i] > 0.0 && std::abs(sol.grid_vectors(i, 0)) >= kMatchFraction * max_abs) {
            im_r = i;
            break;
        }
    for (int i = 0; i < n; ++i)
        if (sol.grid[i] < 0.0 && std::abs(sol.grid_vectors(i, 0)) >= kMatchFraction * max_abs) {
            im_l = i;
            break;
        }
    if (im_r < 0 || im_l < 0)
        throw RefinementError("tail_refine: no matching point found");

    auto match = [&](TailSide& side, int idx) {
        const double v = sol.grid_vectors(idx, 0);
        if (v <= 0.0)
            throw RefinementError("tail_refine: non-positive value at matching point");
        side.s_match = sol.grid[idx];
        const double offset = std::log(v) - side.log_abs_at(side.s_match);
        for (double& l : side.log_abs) l += offset;
    };
    match(profile.right, im_r);
    match(profile.left, im_l);

    for (double t : s_targets) {
        const TailSide& side = profile.side(t);
        if (!side.covers(t))
            throw ParameterError("tail_refine: target outside refined coverage");
    }
    return profile;
}

RefinedWavefunction::RefinedWavefunction(const PotentialSpec& spec, double h, double eta, int n)
    : spec_(spec), h_(h), eta_(eta) {
    const DirichletOperator op = assemble_dirichlet(spec, h, eta, n);
    sol_ = ground_state_single_well(op);
    lambda_grid_ = sol_.eigenvalues[0];
    lambda_ = sol_.eigenvalues_extrapolated[0];
    tails_ = tail_refine(spec, h, lambda_, sol_, {M_PI / 2.0, -M_PI / 2.0});
    max_abs_ = sol_.grid_vectors.col(0).cwiseAbs().maxCoeff();
    grid_switch_ = 1e-3 * max_abs_;
}

namespace {
// Points this close to a Dirichlet endpoint are treated as the boundary
// itself: phi vanishes there, the cutoff ramps are flat (chi', chi'' -> 0),
// and the tail recording grid cannot resolve the log-divergence of log|phi|.
constexpr double kBoundaryGuard = 1e-3;
} // namespace

double RefinedWavefunction::log_abs(double s) const {
    if (s <= sol_.domain_a + kBoundaryGuard || s >= sol_.domain_b - kBoundaryGuard)
        return -std::numeric_limits<double>::infinity();
    if (s >= tails_.right.s_match || s <= tails_.left.s_match)
        return tails_.side(s).log_abs_at(s);
    const double v = evaluate_wavefunction(sol_, s).first.real();
    return std::log(std::abs(v));
}

double RefinedWavefunction::value(double s) const {
    if (s <= sol_.domain_a + kBoundaryGuard || s >= sol_.domain_b - kBoundaryGuard)
        return 0.0; // extended by zero
    if (s >= tails_.right.s_match || s <= tails_.left.s_match)
        return std::exp(tails_.side(s).log_abs_at(s));
    return evaluate_wavefunction(sol_, s).first.real();
}

double RefinedWavefunction::derivative(double s) const {
    if (s <= sol_.domain_a + kBoundaryGuard || s >= sol_.domain_b - kBoundaryGuard) return 0.0;
    if (s >= tails_.right.s_match || s <= tails_.left.s_match) {
        const TailSide& side = tails_.side(s);
        return std::exp(side.log_abs_at(s)) * side.r_at(s) / h_;
    }
    return evaluate_wavefunction(sol_, s).second.real();
}

double RefinedWavefunction::fold_left(double s) const {
    // phi_l(s) = phi_r(pi - s) on B_l(pi - eta) = (eta, 2pi - eta); accept the
    // principal representative s in (-pi, pi].
    return (s <= -eta_) ? (-M_PI - s) : (M_PI - s);
}

double RefinedWavefunction::value_left(double s) const { return value(fold_left(s)); }

double RefinedWavefunction::derivative_left(double s) const {
    return -derivative(fold_left(s));
}

double RefinedWavefunction::log_abs_left(double s) const { return log_abs(fold_left(s)); }

} // namespace fluxlab
