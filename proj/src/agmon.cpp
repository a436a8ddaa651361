#include "fluxlab/agmon.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/numerics.hpp"
#include "fluxlab/quad.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace fluxlab {

namespace {

constexpr double kSingularSplit = 1e-3; // Taylor window around the well center

double sqrt_v(const PotentialSpec& spec, double s) {
    return std::sqrt(std::max(0.0, spec.eval(s)));
}

// Taylor coefficients of the amplitude integrand near sigma = 0.
// With V = kappa^2 s^2 (1 + b1 s + b2 s^2 + ...):
//   (d sqrt(V) - sign(s) kappa)/sqrt(V) = g0 + g1 s + O(s^2),
//   g0 = b1, g1 = 3 b2 / 2 - 7 b1^2 / 8,
// valid on both sides of the well.
void integrand_taylor(const PotentialSpec& spec, double& g0, double& g1) {
    const double vpp = spec.deriv2(0.0);
    if (vpp <= 0.0) throw DegenerateWellError("amplitude integral: V''(0) <= 0");
    const double kap2 = vpp / 2.0;
    const double v3 = fd_derivative1(spec.deriv2, 0.0, 1e-3);
    const double v4 = fd_derivative2(spec.deriv2, 0.0, 1e-3);
    const double b1 = v3 / (6.0 * kap2);
    const double b2 = v4 / (24.0 * kap2);
    g0 = b1;
    g1 = 1.5 * b2 - 7.0 / 8.0 * b1 * b1;
}

} // namespace

double phase_profile(const PotentialSpec& spec, double s, Well well) {
    const double center = (well == Well::right) ? 0.0 : M_PI;
    if (well == Well::right) {
        if (s < -M_PI - 1e-12 || s > M_PI + 1e-12)
            throw ParameterError("phase_profile: right-well domain is [-pi, pi]");
    } else {
        if (s < -1e-12 || s > 2.0 * M_PI + 1e-12)
            throw ParameterError("phase_profile: left-well domain is [0, 2pi]");
    }
    auto f = [&spec](double sigma) { return sqrt_v(spec, sigma); };
    // sqrt(V) kinks at the zeros of V; split panels there.
    const double value =
        quad::integrate_split(f, center, s, {-M_PI, 0.0, M_PI, 2.0 * M_PI}, 1e-12, 1e-13);
    return std::abs(value);
}

double amplitude_exponent_integral(const PotentialSpec& spec, double s, double quad_tol) {
    const double kap = kappa(spec);
    double g0, g1;
    integrand_taylor(spec, g0, g1);

    auto taylor_part = [&](double x) { return g0 * x + 0.5 * g1 * x * x; };
    if (std::abs(s) <= kSingularSplit) return taylor_part(s);

    const double sgn = (s > 0.0) ? 1.0 : -1.0;
    auto g = [&](double sigma) {
        const double sv = sqrt_v(spec, sigma);
        const double dsv = spec.deriv1(sigma) / (2.0 * sv);
        return (dsv - sgn * kap) / sv;
    };
    const double delta = sgn * kSingularSplit;
    return taylor_part(delta) + quad::integrate(g, delta, s, quad_tol, 2e-9);
}

AgmonConstants agmon_constants(const PotentialSpec& spec, double quad_tol) {
    if (quad_tol <= 0.0) throw ParameterError("agmon_constants: quad_tol must be positive");
    AgmonConstants c;
    c.kappa = kappa(spec);
    c.is_even = spec.is_even;

    auto f = [&spec](double sigma) { return sqrt_v(spec, sigma); };
    c.S_u = quad::integrate(f, 0.0, M_PI, quad_tol);
    c.S_d = quad::integrate(f, -M_PI, 0.0, quad_tol);
    c.S = std::min(c.S_u, c.S_d);

    c.A_u = std::exp(-amplitude_exponent_integral(spec, M_PI / 2.0, quad_tol));
    c.A_d = std::exp(-amplitude_exponent_integral(spec, -M_PI / 2.0, quad_tol));

    c.V_half_up = spec.eval(M_PI / 2.0);
    c.V_half_down = spec.eval(-M_PI / 2.0);
    return c;
}

std::string AgmonConstants::to_json() const {
    nlohmann::ordered_json j;
    j["kappa"] = kappa;
    j["S_u"] = S_u;
    j["S_d"] = S_d;
    j["S"] = S;
    j["A_u"] = A_u;
    j["A_d"] = A_d;
    j["V_half_up"] = V_half_up;
    j["V_half_down"] = V_half_down;
    return j.dump(2);
}

GapPrediction leading_interaction(const AgmonConstants& c, double h, double xi0) {
    if (h <= 0.0 || h >= 1.0) throw ParameterError("leading_interaction: h must be in (0,1)");
    const double prefactor = 2.0 * std::sqrt(h) * std::sqrt(c.kappa / M_PI);
    const LogComplex up{std::log(prefactor * c.A_u * std::sqrt(c.V_half_up)) - c.S_u / h,
                        xi0 * M_PI / h};
    const LogComplex down{std::log(prefactor * c.A_d * std::sqrt(c.V_half_down)) - c.S_d / h,
                          -xi0 * M_PI / h};
    GapPrediction p;
    p.w0 = up + down;
    p.w0_value = p.w0.value();
    p.gap_leading_log = p.w0.log_mag + std::log(2.0);
    p.gap_leading = p.w0.is_zero() ? 0.0 : 2.0 * p.w0.abs();
    p.remainder_log = 1.5 * std::log(h) - c.S / h;
    p.remainder_scale = std::exp(p.remainder_log);
    return p;
}

double predicted_gap_even_log(const AgmonConstants& c, double h, double xi0) {
    if (!c.is_even)
        throw ParameterError("predicted_gap_even: potential is not even");
    if (h <= 0.0 || h >= 1.0) throw ParameterError("predicted_gap_even: h must be in (0,1)");
    const double cosine = std::cos(xi0 * M_PI / h);
    if (cosine == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(8.0 * std::sqrt(h) * c.A_u * std::sqrt(c.V_half_up) *
                    std::sqrt(c.kappa / M_PI) * std::abs(cosine)) -
           c.S / h;
}

double predicted_gap_even(const AgmonConstants& c, double h, double xi0) {
    const double lg = predicted_gap_even_log(c, h, xi0);
    return std::isinf(lg) ? 0.0 : std::exp(lg);
}

} // namespace fluxlab
