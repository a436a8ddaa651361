#include "fluxlab/potential.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace fluxlab {

PotentialSpec builtin_potential(const std::string& name, const std::vector<double>& params) {
    PotentialSpec spec;
    spec.name = name;
    spec.analytic_derivatives = true;
    if (name == "sin2" || name == "scaled_sin2") {
        double c = 1.0;
        if (name == "sin2") {
            if (!params.empty()) throw ParameterError("sin2 takes no parameters");
        } else {
            if (params.size() != 1) throw ParameterError("scaled_sin2 takes one parameter");
            c = params[0];
            if (c <= 0.0) throw ParameterError("scaled_sin2: scale must be positive");
        }
        spec.eval = [c](double s) { const double x = std::sin(s); return c * x * x; };
        spec.deriv1 = [c](double s) { return c * std::sin(2.0 * s); };
        spec.deriv2 = [c](double s) { return 2.0 * c * std::cos(2.0 * s); };
        spec.is_even = true;
        return spec;
    }
    if (name == "tilted_sin2") {
        if (params.size() != 1) throw ParameterError("tilted_sin2 takes one parameter");
        const double c = params[0];
        if (std::abs(c) >= 1.0)
            throw ParameterError("tilted_sin2: |c| < 1 required (minima degeneracy risk)");
        spec.eval = [c](double s) {
            const double x = std::sin(s);
            return x * x * (1.0 + c * x);
        };
        spec.deriv1 = [c](double s) {
            const double x = std::sin(s), y = std::cos(s);
            return std::sin(2.0 * s) + 3.0 * c * x * x * y;
        };
        spec.deriv2 = [c](double s) {
            const double x = std::sin(s), y = std::cos(s);
            return 2.0 * std::cos(2.0 * s) + 3.0 * c * x * (2.0 * y * y - x * x);
        };
        spec.is_even = (c == 0.0);
        return spec;
    }
    throw ParameterError("unknown potential '" + name + "'");
}

PotentialSpec potential_from_samples(std::vector<double> s, std::vector<double> v,
                                     const std::string& name) {
    if (s.size() < 4096)
        throw ParameterError("tabulated potential requires at least 4096 rows");
    auto spline = std::make_shared<PeriodicCubicSpline>(std::move(s), std::move(v), 2.0 * M_PI);
    PotentialSpec spec;
    spec.name = name;
    spec.analytic_derivatives = false;
    spec.eval = [spline](double x) { return spline->eval(x); };
    spec.deriv1 = [spline](double x) { return spline->deriv1(x); };
    spec.deriv2 = [spline](double x) { return spline->deriv2(x); };
    double asym = 0.0;
    for (int i = 0; i <= 256; ++i) {
        const double x = -M_PI + 2.0 * M_PI * i / 257.0;
        asym = std::max(asym, std::abs(spline->eval(x) - spline->eval(-x)));
    }
    spec.is_even = asym < 1e-9;
    return spec;
}

PotentialSpec load_potential_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open potential CSV: " + path);
    std::vector<double> s, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a, b;
        if (row >> a >> b) {
            s.push_back(a);
            v.push_back(b);
        }
    }
    return potential_from_samples(std::move(s), std::move(v), path);
}

ValidationReport validate_double_well(const PotentialSpec& spec, double tol) {
    if (tol <= 0.0) throw ParameterError("validation tolerance must be positive");
    ValidationReport report;
    auto add = [&report](const std::string& name, double residual, double tolerance) {
        report.checks.push_back({name, residual, tolerance, residual <= tolerance});
    };

    add("V(0) = 0", std::abs(spec.eval(0.0)), tol);
    add("V(pi) = 0", std::abs(spec.eval(M_PI)), tol);
    add("periodicity", std::abs(spec.eval(-M_PI) - spec.eval(M_PI - 1e-12)), tol);

    // Curvature: positive beyond noise scale, reported as a residual of
    // max(0, tol - V'') so that "passed" keeps its residual <= tolerance form.
    const double c0 = spec.deriv2(0.0), cpi = spec.deriv2(M_PI);
    add("V''(0) > 0", c0 > tol ? 0.0 : tol - c0, tol / 2.0);
    add("V''(pi) > 0", cpi > tol ? 0.0 : tol - cpi, tol / 2.0);

    constexpr int grid_n = 2048; // >= 1024 per contract
    double min_v = 0.0, sym = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        const double s = -M_PI + 2.0 * M_PI * i / grid_n;
        min_v = std::min(min_v, spec.eval(s));
        sym = std::max(sym, std::abs(spec.eval(M_PI - s) - spec.eval(s)));
    }
    add("V >= 0", std::max(0.0, -min_v), tol);
    add("V(pi - s) = V(s)", sym, tol);

    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.passed; });
    return report;
}

double kappa(const PotentialSpec& spec) {
    const double c0 = spec.deriv2(0.0);
    if (c0 <= 0.0)
        throw DegenerateWellError("kappa: V''(0) <= 0, well at s=0 is degenerate");
    const double cpi = spec.deriv2(M_PI);
    if (cpi <= 0.0)
        throw DegenerateWellError("kappa: V''(pi) <= 0, well at s=pi is degenerate");
    const double k0 = std::sqrt(c0 / 2.0), kpi = std::sqrt(cpi / 2.0);
    if (std::abs(k0 - kpi) > 1e-6 * std::max(k0, kpi))
        throw ValidationError("kappa: wells at 0 and pi have different curvature");
    return k0;
}

} // namespace fluxlab
