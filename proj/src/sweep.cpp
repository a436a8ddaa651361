#include "fluxlab/sweep.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace fluxlab {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    g.text = trim(text);
    if (g.text.empty()) throw ParameterError("empty grid specification");
    if (g.text.find(':') != std::string::npos) {
        const auto parts = split(g.text, ':');
        if (parts.size() < 3 || parts.size() > 4)
            throw ParameterError("grid must be min:max:count[:log]");
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const int count = std::stoi(parts[2]);
        const bool log_spaced = parts.size() == 4 && trim(parts[3]) == "log";
        if (count < 1) throw ParameterError("grid count must be >= 1");
        if (count == 1) {
            g.values.push_back(lo);
            return g;
        }
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(i) / (count - 1);
            g.values.push_back(log_spaced ? lo * std::pow(hi / lo, t)
                                          : lo + (hi - lo) * t);
        }
        return g;
    }
    for (const auto& part : split(g.text, ','))
        if (!trim(part).empty()) g.values.push_back(std::stod(trim(part)));
    if (g.values.empty()) throw ParameterError("empty grid specification");
    return g;
}

GridSpec GridSpec::single(double v) {
    GridSpec g;
    g.text = fmt17(v);
    g.values = {v};
    return g;
}

PotentialSpec SweepConfig::make_potential() const {
    if (!potential_csv.empty()) return load_potential_csv(potential_csv);
    return builtin_potential(potential, params);
}

std::string SweepConfig::routes_text() const {
    std::vector<std::string> r;
    if (route_direct) r.push_back("direct");
    if (route_wronskian) r.push_back("wronskian");
    if (route_leading) r.push_back("leading");
    std::string out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ",";
        out += r[i];
    }
    return out;
}

void SweepConfig::set_routes(const std::string& routes_csv) {
    route_direct = route_wronskian = route_leading = false;
    for (const auto& r : split(routes_csv, ',')) {
        const std::string name = trim(r);
        if (name == "direct")
            route_direct = true;
        else if (name == "wronskian")
            route_wronskian = true;
        else if (name == "leading")
            route_leading = true;
        else if (!name.empty())
            throw ParameterError("unknown route '" + name + "'");
    }
    if (!route_direct && !route_wronskian && !route_leading)
        throw ParameterError("at least one route must be requested");
}

SweepConfig SweepConfig::parse(const std::string& text) {
    SweepConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "potential")
            cfg.potential = value;
        else if (key == "params") {
            cfg.params.clear();
            for (const auto& p : split(value, ','))
                if (!trim(p).empty()) cfg.params.push_back(std::stod(trim(p)));
        } else if (key == "potential_csv")
            cfg.potential_csv = value;
        else if (key == "h_grid")
            cfg.h_grid = GridSpec::parse(value);
        else if (key == "xi0_grid")
            cfg.xi0_grid = GridSpec::parse(value);
        else if (key == "routes")
            cfg.set_routes(value);
        else if (key == "K")
            cfg.K = std::stoi(value);
        else if (key == "n")
            cfg.n = std::stoi(value);
        else if (key == "eta")
            cfg.eta = std::stod(value);
        else if (key == "quad_tol")
            cfg.quad_tol = std::stod(value);
        else if (key == "jobs")
            cfg.jobs = std::stoi(value);
        else if (key == "out")
            cfg.out = value;
        else if (key == "format")
            cfg.format = value;
        else
            throw ParameterError("unknown config key '" + key + "'");
    }
    if (cfg.format != "csv" && cfg.format != "json")
        throw ParameterError("format must be csv or json");
    for (double h : cfg.h_grid.values)
        if (h <= 0.0 || h >= 1.0) throw ParameterError("h grid values must lie in (0,1)");
    return cfg;
}

std::string SweepConfig::serialize() const {
    std::ostringstream os;
    os << "potential = " << potential << "\n";
    if (!params.empty()) {
        os << "params = ";
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i) os << ",";
            os << fmt17(params[i]);
        }
        os << "\n";
    }
    if (!potential_csv.empty()) os << "potential_csv = " << potential_csv << "\n";
    os << "h_grid = " << h_grid.text << "\n";
    os << "xi0_grid = " << xi0_grid.text << "\n";
    os << "routes = " << routes_text() << "\n";
    os << "K = " << K << "\n";
    os << "n = " << n << "\n";
    os << "eta = " << fmt17(eta) << "\n";
    os << "quad_tol = " << fmt17(quad_tol) << "\n";
    os << "jobs = " << jobs << "\n";
    if (!out.empty()) os << "out = " << out << "\n";
    os << "format = " << format << "\n";
    return os.str();
}

std::vector<SplittingResult> run_sweep(const SweepConfig& config) {
    const PotentialSpec spec = config.make_potential();
    const ValidationReport report = validate_double_well(spec);
    if (!report.passed)
        throw ValidationError("sweep: potential fails the double-well requirements");

    std::vector<double> hs = config.h_grid.values;
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    std::vector<double> xis = config.xi0_grid.values;
    std::sort(xis.begin(), xis.end());
    xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
    if (hs.empty() || xis.empty()) throw ParameterError("sweep: empty grid");

    AgmonConstants constants;
    const bool need_constants = config.route_leading || config.route_wronskian;
    if (need_constants) constants = agmon_constants(spec, config.quad_tol);

    // One h-group per worker task; deterministic placement in the result
    // array makes the output independent of scheduling.
    std::vector<SplittingResult> results(hs.size() * xis.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (true) {
            const std::size_t gi = next.fetch_add(1);
            if (gi >= hs.size()) return;
            try {
                const double h = hs[gi];
                SplittingConfig sc;
                sc.K = config.K;
                sc.n = config.n;
                sc.eta = config.eta;
                sc.quad_tol = config.quad_tol;
                sc.route_direct = config.route_direct;
                sc.route_wronskian = config.route_wronskian;
                sc.route_leading = config.route_leading;
                if (need_constants) sc.constants = &constants;
                std::unique_ptr<RefinedWavefunction> phi;
                if (config.route_wronskian) {
                    phi = std::make_unique<RefinedWavefunction>(spec, h, config.eta, config.n);
                    sc.wavefunction = phi.get();
                }
                for (std::size_t xi = 0; xi < xis.size(); ++xi)
                    results[gi * xis.size() + xi] = splitting_estimate(spec, h, xis[xi], sc);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

const char* kSweepCsvHeader =
    "h,xi0,gap_direct,gap_wronskian,gap_leading,log10_gap_leading,"
    "w_up_log10,w_down_log10,phase_up,phase_down,flags";

void write_sweep_csv(const std::vector<SplittingResult>& rows, std::ostream& os) {
    os << kSweepCsvHeader << "\n";
    for (const auto& r : rows) {
        os << fmt17(r.h) << ',' << fmt17(r.xi0) << ',' << fmt17(r.gap_direct) << ','
           << fmt17(r.gap_wronskian) << ',' << fmt17(r.gap_leading) << ','
           << fmt17(r.log10_gap_leading) << ',' << fmt17(r.w_up_log10) << ','
           << fmt17(r.w_down_log10) << ',' << fmt17(r.phase_up) << ','
           << fmt17(r.phase_down) << ',' << r.flags_joined() << "\n";
    }
}

void write_sweep_json(const std::vector<SplittingResult>& rows, std::ostream& os) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["h"] = r.h;
        j["xi0"] = r.xi0;
        j["gap_direct"] = r.gap_direct;
        j["gap_wronskian"] = r.gap_wronskian;
        j["gap_leading"] = r.gap_leading;
        j["log10_gap_leading"] = r.log10_gap_leading;
        j["w_up_log10"] = r.w_up_log10;
        j["w_down_log10"] = r.w_down_log10;
        j["phase_up"] = r.phase_up;
        j["phase_down"] = r.phase_down;
        j["flags"] = r.flags_joined();
        arr.push_back(std::move(j));
    }
    os << arr.dump(2) << "\n";
}

bool SweepRow::below_floor() const {
    return flags.find("direct_below_floor") != std::string::npos;
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    std::vector<SweepRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() < 10) throw ParameterError("malformed sweep CSV row: " + line);
        SweepRow r;
        r.h = std::stod(cols[0]);
        r.xi0 = std::stod(cols[1]);
        r.gap_direct = std::stod(cols[2]);
        r.gap_wronskian = std::stod(cols[3]);
        r.gap_leading = std::stod(cols[4]);
        r.log10_gap_leading = std::stod(cols[5]);
        r.w_up_log10 = std::stod(cols[6]);
        r.w_down_log10 = std::stod(cols[7]);
        r.phase_up = std::stod(cols[8]);
        r.phase_down = std::stod(cols[9]);
        if (cols.size() > 10) r.flags = cols[10];
        rows.push_back(r);
    }
    return rows;
}

DecayFit fit_decay(const std::vector<SweepRow>& rows, const std::string& column) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        double gap;
        if (column == "gap_direct") {
            if (r.below_floor()) continue;
            gap = r.gap_direct;
        } else if (column == "gap_wronskian") {
            gap = r.gap_wronskian;
        } else if (column == "gap_leading") {
            gap = r.gap_leading;
        } else {
            throw ParameterError("fit_decay: unknown column '" + column + "'");
        }
        if (!(gap > 0.0) || !std::isfinite(gap)) continue;
        xs.push_back(1.0 / r.h);
        ys.push_back(std::log(gap) - 0.5 * std::log(r.h));
    }
    if (xs.size() < 2) throw ParameterError("fit_decay: fewer than two usable rows");
    const LinearFit fit = linear_fit(xs, ys);
    return {fit.slope, fit.intercept, fit.r2, static_cast<int>(xs.size())};
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<GapMinimum> find_minima(const std::vector<double>& xi,
                                    const std::vector<double>& gap, double med) {
    std::vector<GapMinimum> out;
    for (std::size_t i = 1; i + 1 < xi.size(); ++i) {
        if (!(gap[i] > 0.0)) continue;
        if (gap[i] <= gap[i - 1] && gap[i] < gap[i + 1]) {
            // Parabolic vertex on log10(gap) through three points.
            const double x0 = xi[i - 1], x1 = xi[i], x2 = xi[i + 1];
            const double y0 = std::log10(gap[i - 1]), y1 = std::log10(gap[i]),
                         y2 = std::log10(gap[i + 1]);
            const double d1 = (y1 - y0) / (x1 - x0);
            const double d2 = (y2 - y1) / (x2 - x1);
            const double f012 = (d2 - d1) / (x2 - x0); // Newton second difference
            GapMinimum m;
            if (f012 > 0.0) {
                m.xi0 = std::clamp(0.5 * (x0 + x1) - d1 / (2.0 * f012), x0, x2);
                const double yv =
                    y0 + d1 * (m.xi0 - x0) + f012 * (m.xi0 - x0) * (m.xi0 - x1);
                m.gap = std::pow(10.0, yv);
            } else {
                m.xi0 = x1;
                m.gap = gap[i];
            }
            m.depth = (med > 0.0) ? m.gap / med : 0.0;
            out.push_back(m);
        }
    }
    return out;
}

} // namespace

std::string CrossingReport::to_json() const {
    nlohmann::ordered_json j;
    j["h"] = h;
    j["analytic_zeros"] = analytic_zeros;
    auto dump = [](const std::vector<GapMinimum>& mins) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& m : mins)
            arr.push_back({{"xi0", m.xi0}, {"gap", m.gap}, {"depth", m.depth}});
        return arr;
    };
    j["minima_direct"] = dump(minima_direct);
    j["minima_wronskian"] = dump(minima_wronskian);
    j["median_gap_direct"] = median_gap_direct;
    j["median_gap_wronskian"] = median_gap_wronskian;
    return j.dump(2);
}

CrossingReport find_crossings(const std::vector<SweepRow>& rows, double h) {
    CrossingReport rep;
    rep.h = h;
    std::vector<double> xi, gd, gw;
    for (const auto& r : rows) {
        if (std::abs(r.h - h) > 1e-12 * std::max(1.0, std::abs(h))) continue;
        xi.push_back(r.xi0);
        gd.push_back(r.gap_direct);
        gw.push_back(r.gap_wronskian);
    }
    if (xi.size() < 3) throw ParameterError("find_crossings: need at least 3 points at this h");

    // Analytic zeros of the leading gap: xi0* = (k + 1/2) h, spaced exactly h.
    const double lo = *std::min_element(xi.begin(), xi.end());
    const double hi = *std::max_element(xi.begin(), xi.end());
    for (long k = std::lround(std::floor(lo / h - 0.5)); (k + 0.5) * h <= hi + 1e-15; ++k) {
        const double z = (k + 0.5) * h;
        if (z >= lo - 1e-15) rep.analytic_zeros.push_back(z);
    }

    rep.median_gap_direct = median(gd);
    rep.median_gap_wronskian = median(gw);
    rep.minima_direct = find_minima(xi, gd, rep.median_gap_direct);
    rep.minima_wronskian = find_minima(xi, gw, rep.median_gap_wronskian);
    return rep;
}

} // namespace fluxlab
