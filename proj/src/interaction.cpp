#include "fluxlab/interaction.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace fluxlab {

namespace {

// Signed log-rescaled panel quadrature: integrand supplied as
// (log_magnitude, sign); returns the integral as a LogComplex with phase 0
// or pi.  Panels x nodes Gauss-Legendre, shared peak rescaling.
LogComplex log_panel_integral(const std::function<std::pair<double, double>(double)>& f,
                              double a, double b, int panels = 24, int nodes = 24) {
    std::vector<double> xs, ws, logs, signs;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        std::vector<double> nx, nw;
        quad::gauss_legendre_ab(nodes, pa, pb, nx, nw);
        for (int i = 0; i < nodes; ++i) {
            auto [lm, sg] = f(nx[i]);
            if (sg == 0.0 || std::isinf(lm)) continue;
            xs.push_back(nx[i]);
            ws.push_back(nw[i]);
            logs.push_back(lm);
            signs.push_back(sg);
        }
    }
    if (logs.empty()) return LogComplex::zero();
    const double peak = *std::max_element(logs.begin(), logs.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i)
        acc += ws[i] * signs[i] * std::exp(logs[i] - peak);
    if (acc == 0.0) return LogComplex::zero();
    return {peak + std::log(std::abs(acc)), acc > 0.0 ? 0.0 : M_PI};
}

double wrap_phase(double p) {
    p = std::fmod(p, 2.0 * M_PI);
    if (p > M_PI) p -= 2.0 * M_PI;
    if (p <= -M_PI) p += 2.0 * M_PI;
    return p;
}

// log |phi'| and sign of phi' without leaving the log domain.
std::pair<double, double> log_derivative(const RefinedWavefunction& phi, double s) {
    if (std::isinf(phi.log_abs(s)))
        return {-std::numeric_limits<double>::infinity(), 0.0}; // boundary guard zone
    const TailSide& side = phi.tails().side(s);
    const bool in_tail = (s >= 0.0 && s >= side.s_match) || (s < 0.0 && s <= side.s_match);
    if (in_tail) {
        const double r = side.r_at(s);
        return {side.log_abs_at(s) + std::log(std::abs(r) / phi.h()),
                r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0)};
    }
    const double d = phi.derivative(s);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    return {std::log(std::abs(d)), d > 0.0 ? 1.0 : -1.0};
}

std::pair<double, double> log_derivative_left(const RefinedWavefunction& phi, double s) {
    const double t = (s <= -phi.eta()) ? (-M_PI - s) : (M_PI - s);
    auto [lm, sg] = log_derivative(phi, t);
    return {lm, -sg}; // chain rule, dt/ds = -1
}

} // namespace

QuasimodeBasis quasimode_basis(std::shared_ptr<const RefinedWavefunction> phi_r,
                               const CutoffSpec& cutoff, double h, double xi0) {
    if (!phi_r) throw ParameterError("quasimode_basis: missing right-well eigenfunction");
    return QuasimodeBasis{std::move(phi_r), cutoff, h, xi0};
}

std::complex<double> QuasimodeBasis::f_r(double s) const {
    const LogComplex l = f_r_log(s);
    return l.value();
}

std::complex<double> QuasimodeBasis::f_l(double s) const {
    const LogComplex l = f_l_log(s);
    return l.value();
}

LogComplex QuasimodeBasis::f_r_log(double s) const {
    const double chi = cutoff.chi_r(s);
    if (chi <= 0.0) return LogComplex::zero();
    return {std::log(chi) + phi->log_abs(s), -xi0 * s / h};
}

LogComplex QuasimodeBasis::f_l_log(double s) const {
    // Piecewise gauge branch of phi_{h,l} on (-pi, pi):
    //   e^{+i xi0 pi/h} for s in (eta, pi), e^{-i xi0 pi/h} for s in (-pi, -eta),
    //   zero in between.
    const double chi = cutoff.chi_l(s);
    if (chi <= 0.0) return LogComplex::zero();
    if (std::abs(s) <= cutoff.eta) return LogComplex::zero();
    const double branch = (s > 0.0) ? 1.0 : -1.0;
    return {std::log(chi) + phi->log_abs_left(s), (branch * M_PI - s) * xi0 / h};
}

InteractionData overlap_matrix(const QuasimodeBasis& basis) {
    const double eta = basis.cutoff.eta;
    const auto& phi = *basis.phi;

    // <f_r, f_l> = e^{-i xi0 pi/h} I_up + e^{+i xi0 pi/h} I_down with real
    // I_alpha: the e^{-i xi0 s/h} factors cancel pointwise.
    auto upper = [&](double s) -> std::pair<double, double> {
        const double c = basis.cutoff.chi_r(s) * basis.cutoff.chi_l(s);
        if (c <= 0.0) return {0.0, 0.0};
        return {std::log(c) + phi.log_abs(s) + phi.log_abs_left(s), 1.0};
    };
    const LogComplex i_up = log_panel_integral(upper, eta, M_PI - eta);
    const LogComplex i_down = log_panel_integral(upper, -(M_PI - eta), -eta);

    InteractionData data;
    const double theta = basis.xi0 * M_PI / basis.h;
    data.T = LogComplex{i_up.log_mag, i_up.phase - theta} +
             LogComplex{i_down.log_mag, i_down.phase + theta};

    // Norm deficits 1 - int (1 - chi^2) phi^2: computed against the exact
    // normalization so the exponentially small deficit keeps relative accuracy.
    auto deficit_r = [&](double s) -> std::pair<double, double> {
        const double chi = basis.cutoff.chi_r(s);
        const double w = 1.0 - chi * chi;
        if (w <= 0.0) return {0.0, 0.0};
        return {std::log(w) + 2.0 * phi.log_abs(s), 1.0};
    };
    const double edge = basis.cutoff.plateau_edge();
    const double sup = basis.cutoff.support_edge();
    const LogComplex d_right = log_panel_integral(deficit_r, edge, sup, 8, 24);
    const LogComplex d_left = log_panel_integral(deficit_r, -sup, -edge, 8, 24);
    data.norm_r = 1.0 - d_right.abs() - d_left.abs();
    data.norm_l = data.norm_r; // unitary reflection
    return data;
}

InteractionData interaction_wronskian(const RefinedWavefunction& phi, double h, double xi0) {
    const double theta = xi0 * M_PI / h;
    InteractionData data;

    auto component = [&](double s, double phase_sign) {
        const double lv = phi.log_abs(s);
        auto [ld, sg] = log_derivative(phi, s);
        if (sg == 0.0)
            throw PrecisionError("interaction_wronskian: vanishing derivative at +-pi/2");
        // 2 h^2 e^{+-i theta} phi(s) phi'(s); phi > 0, sign carried by phi'.
        double phase = phase_sign * theta;
        if (sg < 0.0) phase += M_PI;
        if (phase_sign < 0.0) phase += M_PI; // the down path enters with a minus sign
        return LogComplex{std::log(2.0 * h * h) + lv + ld, wrap_phase(phase)};
    };

    data.w_up = component(M_PI / 2.0, +1.0);
    data.w_down = component(-M_PI / 2.0, -1.0);
    data.w_lr = data.w_up + data.w_down;
    data.w_rl = data.w_lr.conj();
    data.gap_log = std::log(2.0) + data.w_lr.log_mag;
    data.gap = data.w_lr.is_zero() ? 0.0 : 2.0 * data.w_lr.abs();
    return data;
}

LogComplex interaction_commutator(const QuasimodeBasis& basis, Well alpha) {
    const auto& phi = *basis.phi;
    const double h = basis.h;
    const double eta = basis.cutoff.eta;
    const double theta = basis.xi0 * M_PI / h;

    // After the gauge phases cancel, both coefficients reduce to real window
    // integrals dressed with e^{+-i xi0 pi/h}:
    //   w_lr = <[L, chi_l] phi_{h,l}, f_r>,  windows (eta, 2eta), (-2eta, -eta)
    //   w_rl = <[L, chi_r] phi_{h,r}, f_l>,  windows +-(pi - 2eta, pi - eta)
    // |integrand| = h^2 |chi'' phi_a + 2 chi' phi_a'| phi_b with an overall
    // minus sign; phi_a > 0, the derivative sign rides with phi_a'.
    auto integrand = [&](double s) -> std::pair<double, double> {
        double d1, d2, log_a, log_b;
        std::pair<double, double> ld;
        if (alpha == Well::left) {
            d1 = basis.cutoff.chi_l_d1(s);
            d2 = basis.cutoff.chi_l_d2(s);
            if (d1 == 0.0 && d2 == 0.0) return {0.0, 0.0};
            log_a = phi.log_abs_left(s);
            ld = log_derivative_left(phi, s);
            log_b = phi.log_abs(s);
        } else {
            d1 = basis.cutoff.chi_r_d1(s);
            d2 = basis.cutoff.chi_r_d2(s);
            if (d1 == 0.0 && d2 == 0.0) return {0.0, 0.0};
            log_a = phi.log_abs(s);
            ld = log_derivative(phi, s);
            log_b = phi.log_abs_left(s);
        }
        LogComplex sum = LogComplex::zero();
        if (d2 != 0.0)
            sum = sum + LogComplex{std::log(std::abs(d2)) + log_a, d2 > 0.0 ? 0.0 : M_PI};
        if (d1 != 0.0 && ld.second != 0.0) {
            const double sgn = (d1 > 0.0 ? 1.0 : -1.0) * ld.second;
            sum = sum + LogComplex{std::log(2.0 * std::abs(d1)) + ld.first,
                                   sgn > 0.0 ? 0.0 : M_PI};
        }
        if (sum.is_zero()) return {0.0, 0.0};
        return {std::log(h * h) + sum.log_mag + log_b, -std::cos(sum.phase)};
    };

    double up_a, up_b, dn_a, dn_b, up_phase, dn_phase;
    if (alpha == Well::left) {
        up_a = eta;
        up_b = 2.0 * eta;
        dn_a = -2.0 * eta;
        dn_b = -eta;
        up_phase = theta;   // e^{+i xi0 pi/h} branch of phi_{h,l}
        dn_phase = -theta;
    } else {
        up_a = M_PI - 2.0 * eta;
        up_b = M_PI - eta;
        dn_a = -(M_PI - eta);
        dn_b = -(M_PI - 2.0 * eta);
        up_phase = -theta;  // conj of f_l's e^{+i xi0 pi/h} branch
        dn_phase = theta;
    }
    const LogComplex i_up = log_panel_integral(integrand, up_a, up_b);
    const LogComplex i_dn = log_panel_integral(integrand, dn_a, dn_b);
    return LogComplex{i_up.log_mag, wrap_phase(i_up.phase + up_phase)} +
           LogComplex{i_dn.log_mag, wrap_phase(i_dn.phase + dn_phase)};
}

double wronskian_constancy(const RefinedWavefunction& phi_r,
                           const RefinedWavefunction& phi_l_source, double a, double b,
                           int samples) {
    const double scale = std::max(std::abs(phi_r.eigenvalue()), std::abs(phi_l_source.eigenvalue()));
    if (std::abs(phi_r.eigenvalue() - phi_l_source.eigenvalue()) > 1e-9 * scale)
        throw ValidationError("wronskian_constancy: eigenvalue mismatch between wells");

    std::vector<double> logs;
    double sign0 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double s = a + (b - a) * (i + 0.5) / samples;
        const double l_pl = phi_l_source.log_abs_left(s);
        const double l_pr = phi_r.log_abs(s);
        auto [ld_r, sd_r] = log_derivative(phi_r, s);
        auto [ld_l, sd_l] = log_derivative_left(phi_l_source, s);
        const LogComplex t1{l_pl + ld_r, sd_r > 0 ? 0.0 : M_PI};
        const LogComplex t2{l_pr + ld_l, sd_l > 0 ? 0.0 : M_PI};
        const LogComplex w = t1 - t2;
        if (w.is_zero()) throw PrecisionError("wronskian_constancy: vanishing Wronskian");
        const double sgn = std::cos(w.phase) > 0 ? 1.0 : -1.0;
        if (i == 0) sign0 = sgn;
        if (sgn != sign0)
            throw PrecisionError("wronskian_constancy: Wronskian changed sign across region");
        logs.push_back(w.log_mag);
    }
    const double peak = *std::max_element(logs.begin(), logs.end());
    std::vector<double> vals(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) vals[i] = std::exp(logs[i] - peak);
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= vals.size();
    return std::sqrt(var) / mean;
}

std::string SplittingResult::flags_joined() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) os << ';';
        os << flags[i];
    }
    return os.str();
}

SplittingResult splitting_estimate(const PotentialSpec& spec, double h, double xi0,
                                   const SplittingConfig& config) {
    const ValidationReport report = validate_double_well(spec);
    if (!report.passed)
        throw ValidationError("splitting_estimate: potential fails the double-well requirements");
    if (h <= 0.0 || h >= 1.0) throw ParameterError("splitting_estimate: h must be in (0,1)");

    SplittingResult res;
    res.h = h;
    res.xi0 = xi0;

    AgmonConstants local_constants;
    const AgmonConstants* constants = config.constants;
    if (!constants && (config.route_leading || config.route_wronskian)) {
        local_constants = agmon_constants(spec, config.quad_tol);
        constants = &local_constants;
    }

    if (config.route_leading) {
        const GapPrediction pred = leading_interaction(*constants, h, xi0);
        res.gap_leading = pred.gap_leading;
        res.log10_gap_leading = pred.gap_leading_log / std::log(10.0);
        if (pred.w0.is_zero()) res.flags.push_back("leading_zero");
    }

    if (config.route_direct) {
        const CircleGap g = circle_gap(spec, h, xi0, config.K);
        res.lambda1 = g.lambda1;
        res.lambda2 = g.lambda2;
        res.gap_direct = g.gap;
        res.direct_below_floor = g.below_floor;
        if (g.below_floor) res.flags.push_back("direct_below_floor");
        if (g.resolution_warning) res.flags.push_back("k_resolution");
    }

    if (config.route_wronskian) {
        std::shared_ptr<const RefinedWavefunction> phi;
        if (config.wavefunction) {
            phi = std::shared_ptr<const RefinedWavefunction>(config.wavefunction,
                                                             [](const RefinedWavefunction*) {});
        } else {
            phi = std::make_shared<RefinedWavefunction>(spec, h, config.eta, config.n);
        }
        const InteractionData data = interaction_wronskian(*phi, h, xi0);
        res.w_lr = data.w_lr;
        res.w_up = data.w_up;
        res.w_down = data.w_down;
        res.gap_wronskian = data.gap;
        res.gap_wronskian_log10 = data.gap_log / std::log(10.0);
        res.w_up_log10 = data.w_up.log10_abs();
        res.w_down_log10 = data.w_down.log10_abs();
        res.phase_up = wrap_phase(data.w_up.phase);
        res.phase_down = wrap_phase(data.w_down.phase);
        res.lambda_single_well = phi->eigenvalue();
        // 2x2 interaction-matrix diagnostic: eigenvalues of D + W.
        const double w_abs = data.w_lr.is_zero() ? 0.0 : data.w_lr.abs();
        res.interaction_lambda1 = phi->eigenvalue() - w_abs;
        res.interaction_lambda2 = phi->eigenvalue() + w_abs;
    }

    // Cross-route consistency: loud flag when the Wronskian and direct gaps
    // separate beyond the 35% band plus the remainder scale h^{3/2} e^{-S/h}
    // (near-crossings are remainder-dominated and must not trip it).
    if (config.route_direct && config.route_wronskian && !res.direct_below_floor) {
        double remainder = 0.0;
        if (constants) remainder = std::exp(1.5 * std::log(h) - constants->S / h);
        if (std::abs(res.gap_wronskian - res.gap_direct) >
            0.35 * res.gap_direct + 10.0 * remainder)
            res.flags.push_back("route_disagreement");
    }
    return res;
}

} // namespace fluxlab
