#pragma once

#include "fluxlab/interaction.hpp"
#include "fluxlab/potential.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fluxlab {

// Grid of parameter values: "min:max:count[:log]", a comma list, or a single
// value.  The original spec string is kept so configs serialize verbatim.
struct GridSpec {
    std::string text;
    std::vector<double> values;

    static GridSpec parse(const std::string& text);
    static GridSpec single(double v);
};

struct SweepConfig {
    std::string potential = "sin2";
    std::vector<double> params;
    std::string potential_csv; // overrides the named potential when set

    GridSpec h_grid = GridSpec::single(0.12);
    GridSpec xi0_grid = GridSpec::single(0.0);

    bool route_direct = true;
    bool route_wronskian = true;
    bool route_leading = true;

    int K = -1;
    int n = 4097;
    double eta = 0.3;
    double quad_tol = 1e-12;
    int jobs = 1;

    std::string out;
    std::string format = "csv"; // csv | json

    PotentialSpec make_potential() const;
    std::string routes_text() const;
    void set_routes(const std::string& routes_csv);

    // Flat key = value config text; parse(serialize(parse(x))) == parse(x).
    static SweepConfig parse(const std::string& text);
    std::string serialize() const;
};

// Runs every (h, xi0) grid point; xi0-independent work (Agmon constants, the
// one-well eigenfunction) is shared per h.  Results are sorted by h then xi0
// regardless of worker scheduling.
std::vector<SplittingResult> run_sweep(const SweepConfig& config);

extern const char* kSweepCsvHeader;
void write_sweep_csv(const std::vector<SplittingResult>& rows, std::ostream& os);
void write_sweep_json(const std::vector<SplittingResult>& rows, std::ostream& os);

// Rows read back from a sweep CSV (columns as in kSweepCsvHeader).
struct SweepRow {
    double h = 0.0, xi0 = 0.0;
    double gap_direct = 0.0, gap_wronskian = 0.0, gap_leading = 0.0;
    double log10_gap_leading = 0.0;
    double w_up_log10 = 0.0, w_down_log10 = 0.0;
    double phase_up = 0.0, phase_down = 0.0;
    std::string flags;
    bool below_floor() const;
};

std::vector<SweepRow> read_sweep_csv(std::istream& is);

struct DecayFit {
    double slope = 0.0;     // coefficient of 1/h (natural log units)
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

// Fits log(gap) - (1/2) log h = intercept + slope / h, removing the known
// sqrt(h) prefactor so that the leading-order route recovers slope = -S
// exactly.  Column is one of gap_direct | gap_wronskian | gap_leading.
DecayFit fit_decay(const std::vector<SweepRow>& rows, const std::string& column);

struct GapMinimum {
    double xi0 = 0.0;   // parabolic vertex on log-gap
    double gap = 0.0;   // interpolated gap at the vertex
    double depth = 0.0; // gap / median gap over the sweep
};

struct CrossingReport {
    double h = 0.0;
    std::vector<double> analytic_zeros; // (k + 1/2) h inside the sweep window
    std::vector<GapMinimum> minima_direct;
    std::vector<GapMinimum> minima_wronskian;
    double median_gap_direct = 0.0;
    double median_gap_wronskian = 0.0;
    std::string to_json() const;
};

CrossingReport find_crossings(const std::vector<SweepRow>& rows, double h);

} // namespace fluxlab
