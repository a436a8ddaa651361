#pragma once

#include "fluxlab/potential.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace fluxlab {

// Full circle operator (h D_s + xi0)^2 + V in the Fourier basis e^{iks},
// k = -K..K.  Entries M_{k,k'} = (hk + xi0)^2 delta_{kk'} + Vhat(k - k').
struct CircleOperator {
    double h = 0.0;
    double xi0 = 0.0;
    int K = 0;
    Eigen::MatrixXcd matrix;
    std::vector<std::complex<double>> vhat; // Vhat(m), m = 0..2K; Vhat(-m) = conj
    bool resolution_warning = false;        // Fourier tail of V not resolved
    double vhat_tail_ratio = 0.0;
};

CircleOperator assemble_circle(const PotentialSpec& spec, double h, double xi0, int K);

// Eigenpairs of a discretized operator, ascending.  Fourier solutions carry
// coefficient vectors c_k (orthonormal in l2); grid solutions carry interior
// values, L2(ds)-normalized with trapezoidal weights.
struct EigenSolution {
    enum class Basis { fourier, grid };
    Basis basis = Basis::fourier;

    std::vector<double> eigenvalues;
    std::vector<double> eigenvalues_extrapolated; // grid solutions only

    // fourier
    Eigen::MatrixXcd fourier_vectors; // (2K+1) x m, row i is k = i - K
    int K = 0;

    // grid
    Eigen::MatrixXd grid_vectors; // n x m interior values
    std::vector<double> grid;     // interior points, ascending
    double domain_a = 0.0, domain_b = 0.0;

    std::string normalization;
};

// Lowest m eigenpairs of a Hermitian matrix (dense solve).  Throws InputError
// when the asymmetry exceeds 1e-12 * |A|.
EigenSolution hermitian_eigs(const Eigen::MatrixXcd& matrix, int m);

struct CircleGap {
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
    double gap = 0.0;
    double matrix_norm = 0.0;        // infinity norm
    bool below_floor = false;        // gap < 1e-13 * |A|
    bool resolution_warning = false; // Fourier tail of V not resolved at this K
};

// K <= 0 selects the default K = max(64, ceil(12 / sqrt(h))).
CircleGap circle_gap(const PotentialSpec& spec, double h, double xi0, int K = -1);
int default_fourier_modes(double h);

// One-well Dirichlet operator h^2 D_s^2 + V on (-pi+eta, pi-eta), second-order
// central differences on a uniform interior grid.
struct DirichletOperator {
    PotentialSpec spec;
    double h = 0.0, eta = 0.0;
    int n = 0;
    double a = 0.0, b = 0.0, ds = 0.0;
    std::vector<double> grid;
    std::vector<double> diag;
    double offdiag = 0.0; // constant -h^2/ds^2
    bool resolution_warning = false;
};

DirichletOperator assemble_dirichlet(const PotentialSpec& spec, double h, double eta, int n);

// Lowest m eigenpairs of the Dirichlet operator by Sturm bisection plus
// inverse iteration on the tridiagonal matrix.  Ground state is sign-fixed
// positive at the grid point nearest s = 0.  Eigenvalues are Richardson
// extrapolated against a once-refined grid (order 4).
EigenSolution dirichlet_eigs(const DirichletOperator& op, int m);
EigenSolution ground_state_single_well(const DirichletOperator& op);

// Value and derivative at s.  Fourier: exact trigonometric sums; grid: local
// polynomial interpolation (with the implicit Dirichlet zeros appended).
std::pair<std::complex<double>, std::complex<double>>
evaluate_wavefunction(const EigenSolution& sol, double s, int index = 0);

// Reflection U f(s) = conj(f(pi - s)), mapping the right-well solution to the
// left-well one with the same eigenvalue.
EigenSolution reflect_left(const EigenSolution& sol);

// Logarithmic tail data for one side of the well: log|phi| and the Riccati
// variable r = h phi'/phi, satisfying
//   log|phi(s)| = log|phi(s_m)| + (1/h) int_{s_m}^{s} r.
struct TailSide {
    std::vector<double> s;       // ascending
    std::vector<double> log_abs;
    std::vector<double> r;
    double s_match = 0.0;   // amplitude matching point against the grid data
    double boundary = 0.0;  // Dirichlet endpoint (phi -> 0)
    bool covers(double x) const;
    double log_abs_at(double x) const;
    double r_at(double x) const;
};

struct TailProfile {
    TailSide right; // s > 0 side of the well at 0
    TailSide left;  // s < 0 side
    double h = 0.0;
    double eigenvalue = 0.0;
    const TailSide& side(double s) const { return s >= 0.0 ? right : left; }
};

// Riccati-based tail reconstruction with relative accuracy deep below the
// dense-solver noise floor.  s_targets must lie in the classically forbidden
// region V(s) > eigval.
TailProfile tail_refine(const PotentialSpec& spec, double h, double eigval,
                        const EigenSolution& sol, const std::vector<double>& s_targets);

// Grid solution plus tails: transparently accurate evaluation of the right
// well eigenfunction everywhere on its domain.
class RefinedWavefunction {
public:
    RefinedWavefunction(const PotentialSpec& spec, double h, double eta, int n);

    double eigenvalue() const { return lambda_; }       // extrapolated
    double eigenvalue_grid() const { return lambda_grid_; }
    const EigenSolution& solution() const { return sol_; }
    const TailProfile& tails() const { return tails_; }
    double h() const { return h_; }
    double eta() const { return eta_; }

    // Right-well eigenfunction phi_r (real, positive).
    double value(double s) const;
    double derivative(double s) const;
    double log_abs(double s) const;

    // Left-well eigenfunction phi_l = U phi_r, on s in (eta, 2pi - eta);
    // accepts s in (-pi, pi] via the periodic identification.
    double value_left(double s) const;
    double derivative_left(double s) const;
    double log_abs_left(double s) const;

private:
    PotentialSpec spec_;
    double h_ = 0.0, eta_ = 0.0;
    EigenSolution sol_;
    TailProfile tails_;
    double lambda_ = 0.0, lambda_grid_ = 0.0;
    double grid_switch_ = 0.0; // |phi| threshold below which tails are used
    double max_abs_ = 0.0;
    double fold_left(double s) const;
};

} // namespace fluxlab
