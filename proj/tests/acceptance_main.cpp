// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in code next to each check.

#include "fluxlab/agmon.hpp"
#include "fluxlab/interaction.hpp"
#include "fluxlab/numerics.hpp"
#include "fluxlab/potential.hpp"
#include "fluxlab/spectral.hpp"
#include "fluxlab/sweep.hpp"
#include "fluxlab/wkb.hpp"
#include "oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace fluxlab;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

bool within(double value, double target, double rel_tol) {
    return std::abs(value - target) <= rel_tol * std::abs(target);
}

PotentialSpec zero_potential() {
    PotentialSpec spec;
    spec.name = "zero";
    spec.eval = [](double) { return 0.0; };
    spec.deriv1 = [](double) { return 0.0; };
    spec.deriv2 = [](double) { return 0.0; };
    spec.is_even = true;
    return spec;
}

// shared sweep for criteria 4 and 6
struct GapTable {
    std::vector<double> h, gap_direct, gap_wronskian, gap_leading;
    std::vector<bool> below_floor;
};

GapTable run_gap_table(const PotentialSpec& spec, const std::vector<double>& hs) {
    GapTable t;
    const AgmonConstants c = agmon_constants(spec);
    for (double h : hs) {
        SplittingConfig cfg;
        cfg.constants = &c;
        const SplittingResult r = splitting_estimate(spec, h, 0.0, cfg);
        t.h.push_back(h);
        t.gap_direct.push_back(r.gap_direct);
        t.gap_wronskian.push_back(r.gap_wronskian);
        t.gap_leading.push_back(r.gap_leading);
        t.below_floor.push_back(r.direct_below_floor);
    }
    return t;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i)
        v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    return v;
}

// fit-decay convention: slope of log(gap) - (1/2) log h against 1/h
double decay_slope(const std::vector<double>& hs, const std::vector<double>& gaps) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(gaps[i] > 0.0)) continue;
        xs.push_back(1.0 / hs[i]);
        ys.push_back(std::log(gaps[i]) - 0.5 * std::log(hs[i]));
    }
    return linear_fit(xs, ys).slope;
}

bool criterion1(std::string& detail) {
    const PotentialSpec spec = builtin_potential("sin2");
    const AgmonConstants c = agmon_constants(spec);

    // independent oracle: high-node Gauss-Legendre actions and the analytic
    // antiderivative -2 ln cos(sigma/2) for the amplitude integrand
    const double su_oracle =
        oracle::integrate([](double t) { return std::abs(std::sin(t)); }, 0.0, M_PI, 1, 10000);
    const double au_oracle = std::exp(2.0 * std::log(std::cos(M_PI / 4.0)) * (-1.0));

    bool ok = true;
    ok &= within(c.kappa, 1.0, 1e-10);
    ok &= within(c.S_u, 2.0, 1e-10) && within(c.S_u, su_oracle, 1e-10);
    ok &= within(c.S_d, 2.0, 1e-10);
    ok &= within(c.A_u, 2.0, 1e-10) && within(c.A_u, au_oracle, 1e-10);
    ok &= within(c.A_d, 2.0, 1e-10);
    ok &= within(c.V_half_up, 1.0, 1e-12) && within(c.V_half_down, 1.0, 1e-12);
    std::ostringstream os;
    os << "kappa=" << c.kappa << " S_u=" << c.S_u << " A_u=" << c.A_u << " A_d=" << c.A_d;
    detail = os.str();
    return ok;
}

bool criterion2(std::string& detail) {
    const CircleOperator op = assemble_circle(zero_potential(), 0.5, 0.2, 16);
    const EigenSolution sol = hermitian_eigs(op.matrix, 33);
    std::vector<double> ladder;
    for (int k = -16; k <= 16; ++k) ladder.push_back((0.5 * k + 0.2) * (0.5 * k + 0.2));
    std::sort(ladder.begin(), ladder.end());
    double worst = 0.0;
    for (int j = 0; j < 33; ++j)
        worst = std::max(worst, std::abs(sol.eigenvalues[j] - ladder[j]));
    detail = "max |lambda_j - ladder_j| = " + std::to_string(worst);
    return worst <= 1e-12;
}

bool criterion3(std::string& detail) {
    const PotentialSpec spec = builtin_potential("sin2");
    std::ostringstream os;
    bool ok = true;
    double prev_dev = -1.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const DirichletOperator op = assemble_dirichlet(spec, h, 0.3, 4097);
        const EigenSolution sol = ground_state_single_well(op);
        const double dev = std::abs(sol.eigenvalues_extrapolated[0] / h - 1.0);
        ok &= dev <= 1.5 * std::sqrt(h);
        if (prev_dev >= 0.0) ok &= dev < prev_dev; // decreasing in h
        prev_dev = dev;
        os << " h=" << h << " |lambda/h-1|=" << dev;
    }
    detail = os.str();
    return ok;
}

GapTable g_table_sin2; // criteria 4 and 6 share it

bool criterion4(std::string& detail) {
    const PotentialSpec spec = builtin_potential("sin2");
    g_table_sin2 = run_gap_table(spec, log_spaced(0.09, 0.2, 8));
    bool ok = true;
    double worst_ratio_lo = 1e9, worst_ratio_hi = 0.0;
    for (std::size_t i = 0; i < g_table_sin2.h.size(); ++i) {
        const double ratio = g_table_sin2.gap_direct[i] / g_table_sin2.gap_leading[i];
        worst_ratio_lo = std::min(worst_ratio_lo, ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, ratio);
        ok &= ratio >= 0.6 && ratio <= 1.4;
        ok &= !g_table_sin2.below_floor[i];
    }
    const double slope = decay_slope(g_table_sin2.h, g_table_sin2.gap_direct);
    ok &= std::abs(slope + 2.0) <= 0.03 * 2.0;
    std::ostringstream os;
    os << "direct/leading in [" << worst_ratio_lo << ", " << worst_ratio_hi << "], slope=" << slope;
    detail = os.str();
    return ok;
}

bool criterion5(std::string& detail) {
    const PotentialSpec spec = builtin_potential("sin2");
    const double h = 0.12;
    const AgmonConstants c = agmon_constants(spec);
    std::vector<double> xi, gap;
    for (int i = 0; i < 97; ++i) {
        const double x = 0.24 * i / 96.0;
        SplittingConfig cfg;
        cfg.constants = &c;
        cfg.route_wronskian = false;
        cfg.route_leading = false;
        const SplittingResult r = splitting_estimate(spec, h, x, cfg);
        xi.push_back(x);
        gap.push_back(r.gap_direct);
    }
    const double step = 0.24 / 96.0;
    double gmin = 1e300, gmax = 0.0;
    for (double g : gap) {
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
    }
    bool ok = gmin / gmax <= 0.3;

    for (double zero : {0.06, 0.18}) {
        double best = 1e9;
        for (std::size_t i = 1; i + 1 < xi.size(); ++i)
            if (gap[i] <= gap[i - 1] && gap[i] < gap[i + 1])
                best = std::min(best, std::abs(xi[i] - zero));
        ok &= best <= step + 1e-12;
    }
    std::ostringstream os;
    os << "min/max=" << gmin / gmax << " (97 points, h=0.12)";
    detail = os.str();
    return ok;
}

bool criterion6(std::string& detail) {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < g_table_sin2.h.size(); ++i) {
        if (g_table_sin2.below_floor[i]) continue;
        const double dev = std::abs(g_table_sin2.gap_wronskian[i] - g_table_sin2.gap_direct[i]) /
                           g_table_sin2.gap_direct[i];
        worst = std::max(worst, dev);
        ok &= dev <= 0.35;
    }
    // Wronskian route stays finite and slope-correct down to h = 0.05
    const PotentialSpec spec = builtin_potential("sin2");
    std::vector<double> hs = log_spaced(0.05, 0.2, 8), gaps;
    for (double h : hs) {
        const RefinedWavefunction phi(spec, h, 0.3, 4097);
        const InteractionData data = interaction_wronskian(phi, h, 0.0);
        ok &= std::isfinite(data.gap_log);
        gaps.push_back(std::exp(data.gap_log));
    }
    const double slope = decay_slope(hs, gaps);
    ok &= std::abs(slope + 2.0) <= 0.03 * 2.0;
    std::ostringstream os;
    os << "max |wronskian-direct|/direct = " << worst << ", slope(0.05..0.2) = " << slope;
    detail = os.str();
    return ok;
}

bool criterion7(std::string& detail) {
    const PotentialSpec spec = builtin_potential("tilted_sin2", {0.3});
    const AgmonConstants c = agmon_constants(spec);
    const double h = 0.12;
    double gmin = 1e300, gmax = 0.0;
    for (int i = 0; i < 97; ++i) {
        SplittingConfig cfg;
        cfg.constants = &c;
        cfg.route_wronskian = false;
        cfg.route_leading = false;
        const SplittingResult r = splitting_estimate(spec, h, 0.24 * i / 96.0, cfg);
        gmin = std::min(gmin, r.gap_direct);
        gmax = std::max(gmax, r.gap_direct);
    }
    bool ok = (gmax - gmin) / gmax <= 0.10;

    // decay slope against the oracle-quadrature value of S_d
    const double sd_oracle = oracle::integrate(
        [](double t) { return std::sin(t) * std::sqrt(1.0 - 0.3 * std::sin(t)); }, 0.0, M_PI, 64,
        40);
    std::vector<double> hs = log_spaced(0.09, 0.2, 8), gaps;
    for (double hv : hs) {
        SplittingConfig cfg;
        cfg.constants = &c;
        cfg.route_wronskian = false;
        cfg.route_leading = false;
        gaps.push_back(splitting_estimate(spec, hv, 0.0, cfg).gap_direct);
    }
    const double slope = decay_slope(hs, gaps);
    ok &= std::abs(slope + sd_oracle) <= 0.05 * sd_oracle;
    std::ostringstream os;
    os << "flux variation=" << (gmax - gmin) / gmax << ", slope=" << slope
       << " vs -S_d=" << -sd_oracle;
    detail = os.str();
    return ok;
}

bool criterion8(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    const PotentialSpec sin2 = builtin_potential("sin2");
    const PotentialSpec tilt = builtin_potential("tilted_sin2", {0.3});

    // Hermiticity of assembled operators (1e-15 * |A|)
    for (const auto* spec : {&sin2, &tilt}) {
        const CircleOperator op = assemble_circle(*spec, 0.1, 0.033, 64);
        double norm = 0.0, asym = 0.0;
        for (int i = 0; i < op.matrix.rows(); ++i) {
            double row = 0.0;
            for (int j = 0; j < op.matrix.cols(); ++j) row += std::abs(op.matrix(i, j));
            norm = std::max(norm, row);
        }
        for (int i = 0; i < op.matrix.rows(); ++i)
            for (int j = 0; j < op.matrix.cols(); ++j)
                asym = std::max(asym, std::abs(op.matrix(i, j) - std::conj(op.matrix(j, i))));
        ok &= asym <= 1e-15 * norm;
    }
    os << "hermiticity ok=" << ok;

    // flux periodicity / parity of spectra (1e-10 / 1e-12 * |A|)
    {
        const double h = 0.15, xi0 = 0.021;
        const CircleOperator op0 = assemble_circle(sin2, h, xi0, 64);
        const CircleOperator op1 = assemble_circle(sin2, h, xi0 + h, 66);
        const CircleOperator opm = assemble_circle(sin2, h, -xi0, 64);
        double norm = 0.0;
        for (int i = 0; i < op0.matrix.rows(); ++i) {
            double row = 0.0;
            for (int j = 0; j < op0.matrix.cols(); ++j) row += std::abs(op0.matrix(i, j));
            norm = std::max(norm, row);
        }
        const EigenSolution e0 = hermitian_eigs(op0.matrix, 3);
        const EigenSolution e1 = hermitian_eigs(op1.matrix, 3);
        const EigenSolution em = hermitian_eigs(opm.matrix, 3);
        for (int j = 0; j < 3; ++j) {
            ok &= std::abs(e0.eigenvalues[j] - e1.eigenvalues[j]) <= 1e-10 * norm;
            ok &= std::abs(e0.eigenvalues[j] - em.eigenvalues[j]) <= 1e-12 * norm;
        }
        os << ", flux struct ok=" << ok;
    }

    // eikonal and transport residuals (1e-8), via finite differences
    {
        double worst_eik = 0.0, worst_tr = 0.0;
        const double kap = kappa(tilt);
        auto a0 = [&](double s) { return transport_amplitude(tilt, s); };
        auto flux = [&](double s) {
            const double sgn = (s >= 0.0) ? 1.0 : -1.0;
            return sgn * std::sqrt(tilt.eval(s)) * a0(s);
        };
        for (int i = 1; i < 60; ++i) {
            const double s = 0.15 + (2.4 - 0.15) * i / 60.0;
            const double dphi =
                (phase_profile(tilt, s + 5e-6) - phase_profile(tilt, s - 5e-6)) / 1e-5;
            worst_eik = std::max(worst_eik, std::abs(dphi * dphi - tilt.eval(s)));
            const double res = std::sqrt(tilt.eval(s)) * oracle::deriv1_r4(a0, s, 1e-4) +
                               oracle::deriv1_r4(flux, s, 1e-4) - kap * a0(s);
            worst_tr = std::max(worst_tr, std::abs(res) / a0(s));
        }
        ok &= worst_eik <= 1e-8;
        ok &= worst_tr <= 1e-8;
        os << ", eikonal=" << worst_eik << ", transport=" << worst_tr;
    }

    // Wronskian constancy (rel std <= 1e-5)
    {
        const RefinedWavefunction phi(sin2, 0.15, 0.3, 4097);
        const double rel_std = wronskian_constancy(phi, phi, 0.3, 0.6);
        ok &= rel_std <= 1e-5;
        os << ", wronskian rel std=" << rel_std;
    }

    // amplitude bridge a0(+-pi/2)^2 sqrt(pi/kappa) = A_{u,d} (1e-8)
    for (const auto* spec : {&sin2, &tilt}) {
        const AgmonConstants c = agmon_constants(*spec);
        const double up =
            std::pow(transport_amplitude(*spec, M_PI / 2), 2) * std::sqrt(M_PI / c.kappa);
        const double dn =
            std::pow(transport_amplitude(*spec, -M_PI / 2), 2) * std::sqrt(M_PI / c.kappa);
        ok &= within(up, c.A_u, 1e-8) && within(dn, c.A_d, 1e-8);
    }

    // Hermitian interaction: w_rl = conj(w_lr) to 1e-12 relative
    {
        const double h = 0.12, xi0 = 0.037;
        auto phi = std::make_shared<RefinedWavefunction>(sin2, h, 0.3, 4097);
        const QuasimodeBasis basis = quasimode_basis(phi, build_cutoff(0.3), h, xi0);
        const LogComplex w_lr = interaction_commutator(basis, Well::left);
        const LogComplex w_rl = interaction_commutator(basis, Well::right);
        const double mag_dev = std::abs(std::exp(w_rl.log_mag - w_lr.log_mag) - 1.0);
        const double phase_dev = std::abs(std::remainder(w_rl.phase + w_lr.phase, 2.0 * M_PI));
        ok &= mag_dev <= 1e-12 && phase_dev <= 1e-12;
        os << ", w_rl/conj(w_lr) dev=(" << mag_dev << "," << phase_dev << ")";
    }
    detail = os.str();
    return ok;
}

bool criterion9(std::string& detail) {
    const PotentialSpec spec = builtin_potential("sin2");
    const CutoffSpec cutoff = build_cutoff(0.3);
    const double r_ratio = wkb_residual(spec, 0.1, cutoff, -1.8, 1.8) /
                           wkb_residual(spec, 0.2, cutoff, -1.8, 1.8);
    bool ok = r_ratio >= 0.15 && r_ratio <= 0.40;

    const WkbComparison c2 = wkb_vs_numeric(spec, 0.2, -1.8, 1.8, 121);
    const WkbComparison c1 = wkb_vs_numeric(spec, 0.1, -1.8, 1.8, 121);
    const double shrink = c1.sup_err_value / c2.sup_err_value;
    ok &= shrink >= 0.3 && shrink <= 0.7;
    std::ostringstream os;
    os << "residual ratio=" << r_ratio << ", sup-err shrink=" << shrink;
    detail = os.str();
    return ok;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "derived-constants oracle (sin^2)", criterion1},
        {2, "free-operator exactness", criterion2},
        {3, "harmonic leading order", criterion3},
        {4, "splitting magnitude", criterion4},
        {5, "flux oscillation", criterion5},
        {6, "route agreement", criterion6},
        {7, "asymmetric regime", criterion7},
        {8, "structural invariant suite", criterion8},
        {9, "WKB convergence orders", criterion9},
    };

    int failures = 0;
    for (auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all 9 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
