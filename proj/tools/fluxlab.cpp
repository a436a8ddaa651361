// fluxlab - spectral analysis of (h D_s + xi0)^2 + V(s) on the circle:
// double-well validation, Agmon constants, exact spectra, WKB comparison,
// and flux-resolved tunneling-gap sweeps.

#include "fluxlab/agmon.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/interaction.hpp"
#include "fluxlab/potential.hpp"
#include "fluxlab/spectral.hpp"
#include "fluxlab/sweep.hpp"
#include "fluxlab/wkb.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace fluxlab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitConfig = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct PotentialArgs {
    std::string name = "sin2";
    std::vector<double> params;
    std::string csv;

    PotentialSpec make() const {
        if (!csv.empty()) return load_potential_csv(csv);
        return builtin_potential(name, params);
    }
};

void add_potential_options(CLI::App* cmd, PotentialArgs& args) {
    cmd->add_option("--potential", args.name, "builtin potential name")
        ->default_str("sin2");
    cmd->add_option("--params", args.params, "potential parameters")->delimiter(',');
    cmd->add_option("--potential-csv", args.csv,
                    "tabulated (s,V) CSV, periodic cubic spline (>= 4096 rows)");
}

double env_quad_tol() {
    if (const char* env = std::getenv("FLUXLAB_QUAD_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
            throw ParameterError("FLUXLAB_QUAD_TOL is not a number");
        }
    }
    return 1e-12;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ParameterError("cannot open output file: " + path);
    return file;
}

int cmd_validate(const PotentialArgs& pot, double tol) {
    const PotentialSpec spec = pot.make();
    const ValidationReport report = validate_double_well(spec, tol);
    for (const auto& c : report.checks) {
        std::printf("%-18s residual %.3e  tol %.3e  %s\n", c.name.c_str(), c.residual,
                    c.tolerance, c.passed ? "ok" : "FAILED");
    }
    std::printf("%s: %s\n", spec.name.c_str(), report.passed ? "PASSED" : "FAILED");
    return report.passed ? kExitOk : kExitValidation;
}

int cmd_constants(const PotentialArgs& pot, double quad_tol, const std::string& out) {
    const PotentialSpec spec = pot.make();
    const ValidationReport report = validate_double_well(spec);
    if (!report.passed) throw ValidationError("potential fails the double-well requirements");
    const AgmonConstants c = agmon_constants(spec, quad_tol);
    std::ofstream file;
    open_out(out, file) << c.to_json() << "\n";
    return kExitOk;
}

int cmd_spectrum(const PotentialArgs& pot, double h, double xi0, int K, int n, double eta,
                 int m, const std::string& op_kind, const std::string& format,
                 const std::string& out, const std::string& dump_matrix,
                 const std::string& samples, int samples_n) {
    const PotentialSpec spec = pot.make();
    std::vector<double> values;
    EigenSolution sol;
    nlohmann::ordered_json dump;

    if (op_kind == "circle") {
        const CircleOperator op = assemble_circle(spec, h, xi0, K > 0 ? K : default_fourier_modes(h));
        sol = hermitian_eigs(op.matrix, std::min<int>(m, op.matrix.rows()));
        values = sol.eigenvalues;
        if (!dump_matrix.empty()) {
            nlohmann::ordered_json jm;
            jm["kind"] = "circle";
            jm["h"] = h;
            jm["xi0"] = xi0;
            jm["K"] = op.K;
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (int i = 0; i < op.matrix.rows(); ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (int j = 0; j < op.matrix.cols(); ++j)
                    row.push_back({op.matrix(i, j).real(), op.matrix(i, j).imag()});
                rows.push_back(std::move(row));
            }
            jm["matrix"] = std::move(rows);
            nlohmann::ordered_json vecs = nlohmann::ordered_json::array();
            for (int j = 0; j < sol.fourier_vectors.cols(); ++j) {
                nlohmann::ordered_json col = nlohmann::ordered_json::array();
                for (int i = 0; i < sol.fourier_vectors.rows(); ++i)
                    col.push_back({sol.fourier_vectors(i, j).real(),
                                   sol.fourier_vectors(i, j).imag()});
                vecs.push_back(std::move(col));
            }
            jm["eigenvalues"] = values;
            jm["eigenvectors"] = std::move(vecs);
            std::ofstream f(dump_matrix);
            if (!f) throw ParameterError("cannot open " + dump_matrix);
            f << jm.dump(2) << "\n";
        }
    } else if (op_kind == "dirichlet") {
        const DirichletOperator op = assemble_dirichlet(spec, h, eta, n);
        sol = dirichlet_eigs(op, m);
        values = sol.eigenvalues_extrapolated;
    } else {
        throw ParameterError("operator must be circle or dirichlet");
    }

    std::ofstream file;
    std::ostream& os = open_out(out, file);
    if (format == "json") {
        nlohmann::ordered_json j;
        j["h"] = h;
        j["xi0"] = xi0;
        j["operator"] = op_kind;
        j["eigenvalues"] = values;
        os << j.dump(2) << "\n";
    } else {
        os << "index,eigenvalue\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            os << i << ',' << fmt17(values[i]) << "\n";
    }

    if (!samples.empty()) {
        std::ofstream f(samples);
        if (!f) throw ParameterError("cannot open " + samples);
        f << "s,re,im,d_re,d_im\n";
        const double a = (op_kind == "dirichlet") ? sol.domain_a : -M_PI;
        const double b = (op_kind == "dirichlet") ? sol.domain_b : M_PI;
        for (int i = 0; i < samples_n; ++i) {
            const double s = a + (b - a) * i / (samples_n - 1);
            const auto [v, d] = evaluate_wavefunction(sol, s);
            f << fmt17(s) << ',' << fmt17(v.real()) << ',' << fmt17(v.imag()) << ','
              << fmt17(d.real()) << ',' << fmt17(d.imag()) << "\n";
        }
    }
    return kExitOk;
}

int cmd_sweep(const SweepConfig& cfg) {
    const auto rows = run_sweep(cfg);
    std::ofstream file;
    std::ostream& os = open_out(cfg.out, file);
    if (cfg.format == "json")
        write_sweep_json(rows, os);
    else
        write_sweep_csv(rows, os);
    return kExitOk;
}

std::vector<SweepRow> load_rows(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParameterError("cannot open sweep CSV: " + path);
    return read_sweep_csv(f);
}

int cmd_fit_decay(const std::string& csv_in, const std::vector<std::string>& columns,
                  const std::string& out) {
    const auto rows = load_rows(csv_in);
    nlohmann::ordered_json j;
    for (const auto& col : columns) {
        const DecayFit fit = fit_decay(rows, col);
        j[col] = {{"slope", fit.slope},
                  {"intercept", fit.intercept},
                  {"r2", fit.r2},
                  {"points", fit.points}};
    }
    std::ofstream file;
    open_out(out, file) << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_crossings(const std::string& csv_in, double h, const std::string& out) {
    const auto rows = load_rows(csv_in);
    const CrossingReport rep = find_crossings(rows, h);
    std::ofstream file;
    open_out(out, file) << rep.to_json() << "\n";
    return kExitOk;
}

int cmd_wkb_compare(const PotentialArgs& pot, double h, double eta, double k_lo, double k_hi,
                    int n, const std::string& samples, const std::string& out) {
    const PotentialSpec spec = pot.make();
    const ValidationReport report = validate_double_well(spec);
    if (!report.passed) throw ValidationError("potential fails the double-well requirements");

    const CutoffSpec cutoff = build_cutoff(eta);
    const double resid_h = wkb_residual(spec, h, cutoff, k_lo, k_hi);
    const double resid_2h = wkb_residual(spec, std::min(0.99, 2.0 * h), cutoff, k_lo, k_hi);
    const WkbComparison cmp = wkb_vs_numeric(spec, h, k_lo, k_hi, 201, n);

    nlohmann::ordered_json j;
    j["h"] = h;
    j["interval"] = {k_lo, k_hi};
    j["residual_sup"] = resid_h;
    j["residual_ratio_h_2h"] = resid_h / resid_2h;
    j["sup_err_value"] = cmp.sup_err_value;
    j["sup_err_deriv"] = cmp.sup_err_deriv;
    j["scale_value"] = cmp.scale_value;
    std::ofstream file;
    open_out(out, file) << j.dump(2) << "\n";

    if (!samples.empty()) {
        const WkbQuasimode psi = build_quasimode(spec, h, cutoff);
        std::ofstream f(samples);
        if (!f) throw ParameterError("cannot open " + samples);
        f << "s,phase,amplitude,psi,dpsi\n";
        // sample the cutoff support; the transport amplitude diverges like
        // V^{-1/4} toward the opposite well
        const double edge = cutoff.support_edge();
        const int count = 401;
        for (int i = 0; i < count; ++i) {
            const double s = -edge + 2.0 * edge * i / (count - 1);
            f << fmt17(s) << ',' << fmt17(psi.phase(s)) << ',' << fmt17(psi.amplitude(s)) << ','
              << fmt17(psi.eval(s)) << ',' << fmt17(psi.deriv(s)) << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical double-well spectra and flux-resolved tunneling gaps on the circle"};
    // long-only help so the spec's --h flag stays available
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    auto subcommand = [&app](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "print help");
        return cmd;
    };

    PotentialArgs pot;
    double quad_tol = 1e-12;
    bool quad_tol_set = false;

    // validate
    auto* validate = subcommand("validate", "check the double-well requirements");
    add_potential_options(validate, pot);
    double tol = 1e-9;
    validate->add_option("--tol", tol, "validation tolerance");

    // constants
    auto* constants = subcommand("constants", "Agmon constants as JSON");
    add_potential_options(constants, pot);
    std::string constants_out;
    constants->add_option("--out", constants_out, "output path (default stdout)");
    constants->add_option("--quad-tol", quad_tol, "quadrature tolerance")
        ->each([&](const std::string&) { quad_tol_set = true; });

    // spectrum
    auto* spectrum = subcommand("spectrum", "low eigenvalues of the discretized operators");
    add_potential_options(spectrum, pot);
    double h = 0.12, xi0 = 0.0, eta = 0.3;
    int K = -1, n = 4097, m = 6, samples_n = 512;
    std::string op_kind = "circle", format = "csv", out, dump_matrix, samples;
    spectrum->add_option("--h", h, "semiclassical parameter")->required();
    spectrum->add_option("--xi0", xi0, "circulation");
    spectrum->add_option("--K", K, "Fourier modes (default max(64, 12/sqrt(h)))");
    spectrum->add_option("--n", n, "Dirichlet interior points");
    spectrum->add_option("--eta", eta, "Dirichlet margin");
    spectrum->add_option("--m", m, "number of eigenvalues");
    spectrum->add_option("--operator", op_kind, "circle | dirichlet");
    spectrum->add_option("--format", format, "csv | json");
    spectrum->add_option("--out", out, "output path (default stdout)");
    spectrum->add_option("--dump-matrix", dump_matrix, "debug JSON with matrix and eigenpairs");
    spectrum->add_option("--samples", samples, "wavefunction samples CSV (s,re,im,d_re,d_im)");
    spectrum->add_option("--samples-n", samples_n, "number of sample points");

    // sweep
    auto* sweep = subcommand("sweep", "gap routes over an (h, xi0) grid");
    add_potential_options(sweep, pot);
    std::string sweep_config, h_grid = "0.12", xi0_grid = "0";
    std::string routes = "direct,wronskian,leading";
    std::string sweep_out, sweep_format = "csv";
    int jobs = 1, sweep_K = -1, sweep_n = 4097;
    double sweep_eta = 0.3;
    sweep->add_option("--config", sweep_config,
                      "flat key = value sweep config; explicit flags override");
    auto* opt_h_grid =
        sweep->add_option("--h-grid", h_grid, "min:max:count[:log] or comma list");
    auto* opt_xi0_grid =
        sweep->add_option("--xi0-grid", xi0_grid, "min:max:count[:log] or comma list");
    auto* opt_routes = sweep->add_option("--routes", routes, "subset of direct,wronskian,leading");
    auto* opt_K = sweep->add_option("--K", sweep_K, "Fourier modes");
    auto* opt_n = sweep->add_option("--n", sweep_n, "Dirichlet interior points");
    auto* opt_eta = sweep->add_option("--eta", sweep_eta, "Dirichlet margin");
    auto* opt_jobs = sweep->add_option("--jobs", jobs, "worker threads");
    auto* opt_out = sweep->add_option("--out", sweep_out, "output path (default stdout)");
    auto* opt_format = sweep->add_option("--format", sweep_format, "csv | json");
    auto* opt_quad_tol = sweep->add_option("--quad-tol", quad_tol, "quadrature tolerance")
                             ->each([&](const std::string&) { quad_tol_set = true; });

    // fit-decay
    auto* fit = subcommand("fit-decay", "regress log(gap) - log(sqrt h) against 1/h");
    std::string fit_csv, fit_out;
    std::vector<std::string> fit_columns{"gap_direct", "gap_wronskian", "gap_leading"};
    fit->add_option("csv", fit_csv, "sweep CSV")->required();
    fit->add_option("--columns", fit_columns, "gap columns to fit")->delimiter(',');
    fit->add_option("--out", fit_out, "output path (default stdout)");

    // crossings
    auto* crossings = subcommand("crossings", "near-crossing report for one h");
    std::string crossings_csv, crossings_out;
    double crossings_h = 0.12;
    crossings->add_option("csv", crossings_csv, "sweep CSV")->required();
    crossings->add_option("--h", crossings_h, "h value to analyze")->required();
    crossings->add_option("--out", crossings_out, "output path (default stdout)");

    // wkb-compare
    auto* wkb = subcommand("wkb-compare", "WKB residual and quasimode-vs-numeric errors");
    add_potential_options(wkb, pot);
    double wkb_h = 0.1, wkb_eta = 0.3, k_lo = -1.8, k_hi = 1.8;
    int wkb_n = 4097;
    std::string wkb_samples, wkb_out;
    wkb->add_option("--h", wkb_h, "semiclassical parameter")->required();
    wkb->add_option("--eta", wkb_eta, "cutoff margin");
    wkb->add_option("--k-lo", k_lo, "compact interval lower end");
    wkb->add_option("--k-hi", k_hi, "compact interval upper end");
    wkb->add_option("--n", wkb_n, "Dirichlet interior points");
    wkb->add_option("--samples", wkb_samples, "quasimode samples CSV (s,phase,amplitude,psi,dpsi)");
    wkb->add_option("--out", wkb_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (!quad_tol_set) quad_tol = env_quad_tol();

        if (validate->parsed()) return cmd_validate(pot, tol);
        if (constants->parsed()) return cmd_constants(pot, quad_tol, constants_out);
        if (spectrum->parsed())
            return cmd_spectrum(pot, h, xi0, K, n, eta, m, op_kind, format, out, dump_matrix,
                                samples, samples_n);
        if (sweep->parsed()) {
            SweepConfig cfg;
            if (!sweep_config.empty()) {
                std::ifstream f(sweep_config);
                if (!f) throw ParameterError("cannot open config file: " + sweep_config);
                std::ostringstream buf;
                buf << f.rdbuf();
                cfg = SweepConfig::parse(buf.str());
            }
            if (sweep->count("--potential") || sweep_config.empty()) cfg.potential = pot.name;
            if (sweep->count("--params")) cfg.params = pot.params;
            if (sweep->count("--potential-csv")) cfg.potential_csv = pot.csv;
            if (opt_h_grid->count() || sweep_config.empty())
                cfg.h_grid = GridSpec::parse(h_grid);
            if (opt_xi0_grid->count() || sweep_config.empty())
                cfg.xi0_grid = GridSpec::parse(xi0_grid);
            if (opt_routes->count() || sweep_config.empty()) cfg.set_routes(routes);
            if (opt_K->count() || sweep_config.empty()) cfg.K = sweep_K;
            if (opt_n->count() || sweep_config.empty()) cfg.n = sweep_n;
            if (opt_eta->count() || sweep_config.empty()) cfg.eta = sweep_eta;
            if (opt_quad_tol->count() || sweep_config.empty()) cfg.quad_tol = quad_tol;
            if (opt_jobs->count() || sweep_config.empty()) cfg.jobs = jobs;
            if (opt_out->count() || sweep_config.empty()) cfg.out = sweep_out;
            if (opt_format->count() || sweep_config.empty()) cfg.format = sweep_format;
            for (double hv : cfg.h_grid.values)
                if (hv <= 0.0 || hv >= 1.0)
                    throw ParameterError("h grid values must lie in (0,1)");
            return cmd_sweep(cfg);
        }
        if (fit->parsed()) return cmd_fit_decay(fit_csv, fit_columns, fit_out);
        if (crossings->parsed()) return cmd_crossings(crossings_csv, crossings_h, crossings_out);
        if (wkb->parsed())
            return cmd_wkb_compare(pot, wkb_h, wkb_eta, k_lo, k_hi, wkb_n, wkb_samples, wkb_out);
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
