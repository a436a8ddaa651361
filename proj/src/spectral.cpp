#include "fluxlab/spectral.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fluxlab {

namespace {

double infinity_norm(const Eigen::MatrixXcd& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

// --- symmetric tridiagonal with constant off-diagonal -----------------------

struct Tridiag {
    std::vector<double> d;
    double e = 0.0; // constant sub/super diagonal

    int n() const { return static_cast<int>(d.size()); }
    double norm() const {
        double best = 0.0;
        for (double x : d) best = std::max(best, std::abs(x) + 2.0 * std::abs(e));
        return best;
    }
};

// Sturm sequence: number of eigenvalues strictly below x.
int sturm_count(const Tridiag& T, double x) {
    const double e2 = T.e * T.e;
    int count = 0;
    double q = T.d[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < T.n(); ++i) {
        if (q == 0.0) q = -1e-300;
        q = T.d[i] - x - e2 / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// j-th lowest eigenvalue (0-based) by bisection.
double bisect_eigenvalue(const Tridiag& T, int j) {
    double lo = T.d[0], hi = T.d[0];
    for (double x : T.d) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    lo -= 2.0 * std::abs(T.e);
    hi += 2.0 * std::abs(T.e);
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sturm_count(T, mid) >= j + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - sigma) x = b by LU with partial pivoting (bandwidth-2 fill-in).
void solve_shifted(const Tridiag& T, double sigma, Eigen::VectorXd& x) {
    const int n = T.n();
    std::vector<double> dl(n, 0.0), dm(n), du(n, 0.0), du2(n, 0.0);
    for (int i = 0; i < n; ++i) dm[i] = T.d[i] - sigma;
    for (int i = 0; i + 1 < n; ++i) {
        dl[i] = T.e;
        du[i] = T.e;
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(dm[i]) >= std::abs(dl[i])) {
            if (dm[i] == 0.0) dm[i] = 1e-300;
            const double m = dl[i] / dm[i];
            dm[i + 1] -= m * du[i];
            if (i + 2 < n) du2[i] = 0.0;
            dl[i] = m;
        } else {
            const double m = dm[i] / dl[i];
            dm[i] = dl[i];
            const double tmp = dm[i + 1];
            dm[i + 1] = du[i] - m * tmp;
            du2[i] = (i + 2 < n) ? du[i + 1] : 0.0;
            du[i] = tmp;
            if (i + 2 < n) du[i + 1] = -m * du2[i];
            dl[i] = m;
            std::swap(x[i], x[i + 1]);
            x[i + 1] -= m * x[i];
            continue;
        }
        x[i + 1] -= dl[i] * x[i];
    }
    if (dm[n - 1] == 0.0) dm[n - 1] = 1e-300;
    x[n - 1] /= dm[n - 1];
    if (n >= 2) x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dm[n - 2];
    for (int i = n - 3; i >= 0; --i)
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dm[i];
}

Eigen::VectorXd apply(const Tridiag& T, const Eigen::VectorXd& v) {
    const int n = T.n();
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        double acc = T.d[i] * v[i];
        if (i > 0) acc += T.e * v[i - 1];
        if (i + 1 < n) acc += T.e * v[i + 1];
        out[i] = acc;
    }
    return out;
}

struct TriEigenPair {
    double lambda = 0.0;
    Eigen::VectorXd vector;
};

TriEigenPair tridiag_eigenpair(const Tridiag& T, int j,
                               const std::vector<Eigen::VectorXd>& previous) {
    const int n = T.n();
    const double shift = bisect_eigenvalue(T, j);

    // Fixed-shift inverse iteration: with the bisection shift accurate to a
    // few ulps, each pass damps foreign components by ~|shift - lambda_j| /
    // gap.  The start vector must be genuinely random; structured vectors can
    // be accidentally orthogonal to the target (parity!).
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull + 7919ull * j);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (int attempt = 0; attempt < 4; ++attempt) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = uni(rng);
        double rayleigh = shift;
        for (int it = 0; it < 8; ++it) {
            for (const auto& p : previous) x -= p.dot(x) * p;
            x.normalize();
            solve_shifted(T, shift, x);
            for (const auto& p : previous) x -= p.dot(x) * p;
            x.normalize();
            rayleigh = x.dot(apply(T, x));
            if ((apply(T, x) - rayleigh * x).norm() < 1e-13 * T.norm()) break;
        }
        // Accept only an eigenpair consistent with the Sturm position of the
        // j-th eigenvalue; otherwise retry from a fresh random vector.
        const double delta = 1e-10 * T.norm() + 1e-8 * std::abs(rayleigh);
        if (sturm_count(T, rayleigh - delta) <= j && sturm_count(T, rayleigh + delta) >= j + 1)
            return {rayleigh, std::move(x)};
    }
    throw PrecisionError("tridiagonal inverse iteration failed to pin eigenpair " +
                         std::to_string(j));
}

Tridiag dirichlet_tridiag(const PotentialSpec& spec, double h, double a, double b, int n) {
    Tridiag T;
    const double ds = (b - a) / (n + 1);
    T.e = -h * h / (ds * ds);
    T.d.resize(n);
    for (int i = 0; i < n; ++i) {
        const double s = a + (i + 1) * ds;
        T.d[i] = 2.0 * h * h / (ds * ds) + spec.eval(s);
    }
    return T;
}

} // namespace

int default_fourier_modes(double h) {
    return std::max(64, static_cast<int>(std::ceil(12.0 / std::sqrt(h))));
}

CircleOperator assemble_circle(const PotentialSpec& spec, double h, double xi0, int K) {
    if (K < 16) throw ParameterError("assemble_circle: K >= 16 required");
    if (h <= 0.0) throw ParameterError("assemble_circle: h must be positive");

    CircleOperator op;
    op.h = h;
    op.xi0 = xi0;
    op.K = K;

    // Fourier coefficients of V by trapezoidal sums on 8K points; spectrally
    // accurate for smooth periodic V.
    const int N = 8 * K;
    const int M = 2 * K;
    std::vector<double> vs(N);
    for (int j = 0; j < N; ++j) vs[j] = spec.eval(-M_PI + 2.0 * M_PI * j / N);
    op.vhat.resize(M + 1);
    for (int m = 0; m <= M; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
            const double s = -M_PI + 2.0 * M_PI * j / N;
            acc += vs[j] * std::polar(1.0, -m * s);
        }
        op.vhat[m] = acc / static_cast<double>(N);
    }

    double vmax = 0.0, vtail = 0.0;
    for (int m = 0; m <= M; ++m) vmax = std::max(vmax, std::abs(op.vhat[m]));
    for (int m = std::max(0, M - 3); m <= M; ++m) vtail = std::max(vtail, std::abs(op.vhat[m]));
    op.vhat_tail_ratio = (vmax > 0.0) ? vtail / vmax : 0.0;
    op.resolution_warning = op.vhat_tail_ratio > 1e-13;

    const int dim = 2 * K + 1;
    op.matrix.resize(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double k = i - K;
        for (int j = 0; j <= i; ++j) {
            const int m = i - j; // k - k' >= 0
            std::complex<double> entry = op.vhat[m];
            if (m == 0) entry = std::complex<double>(entry.real() + (h * k + xi0) * (h * k + xi0), 0.0);
            op.matrix(i, j) = entry;
            op.matrix(j, i) = std::conj(entry);
        }
    }
    return op;
}

EigenSolution hermitian_eigs(const Eigen::MatrixXcd& matrix, int m) {
    const Eigen::Index dim = matrix.rows();
    if (matrix.cols() != dim) throw InputError("hermitian_eigs: matrix must be square");
    if (m > dim) throw ParameterError("hermitian_eigs: m exceeds dimension");

    const double norm = infinity_norm(matrix);
    double asym = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            asym = std::max(asym, std::abs(matrix(i, j) - std::conj(matrix(j, i))));
    if (asym > 1e-12 * std::max(norm, 1e-300))
        throw InputError("hermitian_eigs: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw PrecisionError("hermitian_eigs: eigensolver failed to converge");

    EigenSolution sol;
    sol.basis = EigenSolution::Basis::fourier;
    sol.K = static_cast<int>((dim - 1) / 2);
    sol.normalization = "l2_coefficients";
    sol.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
    sol.fourier_vectors = solver.eigenvectors().leftCols(m);
    return sol;
}

CircleGap circle_gap(const PotentialSpec& spec, double h, double xi0, int K) {
    if (K <= 0) K = default_fourier_modes(h);
    const CircleOperator op = assemble_circle(spec, h, xi0, K);
    const EigenSolution sol = hermitian_eigs(op.matrix, 3);
    CircleGap g;
    g.lambda1 = sol.eigenvalues[0];
    g.lambda2 = sol.eigenvalues[1];
    g.lambda3 = sol.eigenvalues[2];
    g.gap = g.lambda2 - g.lambda1;
    g.matrix_norm = infinity_norm(op.matrix);
    g.below_floor = g.gap < 1e-13 * g.matrix_norm;
    g.resolution_warning = op.resolution_warning;
    return g;
}

DirichletOperator assemble_dirichlet(const PotentialSpec& spec, double h, double eta, int n) {
    if (eta <= 0.0 || eta >= M_PI / 4.0)
        throw ParameterError("assemble_dirichlet: eta must be in (0, pi/4)");
    if (n < 512) throw ParameterError("assemble_dirichlet: n >= 512 required");
    DirichletOperator op;
    op.spec = spec;
    op.h = h;
    op.eta = eta;
    op.n = n;
    op.a = -(M_PI - eta);
    op.b = M_PI - eta;
    op.ds = (op.b - op.a) / (n + 1);
    op.grid.resize(n);
    op.diag.resize(n);
    for (int i = 0; i < n; ++i) {
        op.grid[i] = op.a + (i + 1) * op.ds;
        op.diag[i] = 2.0 * h * h / (op.ds * op.ds) + spec.eval(op.grid[i]);
    }
    op.offdiag = -h * h / (op.ds * op.ds);
    // Grid must resolve the ground-state width sqrt(h) comfortably.
    op.resolution_warning = op.ds > 0.05 * std::sqrt(h);
    return op;
}

EigenSolution dirichlet_eigs(const DirichletOperator& op, int m) {
    Tridiag T{op.diag, op.offdiag};
    std::vector<Eigen::VectorXd> vectors;
    std::vector<double> lambdas;
    for (int j = 0; j < m; ++j) {
        TriEigenPair pair = tridiag_eigenpair(T, j, vectors);
        lambdas.push_back(pair.lambda);
        vectors.push_back(std::move(pair.vector));
    }

    // One Richardson step: same operator on the once-refined nested grid
    // (eigenvalues only) lifts the order-2 scheme to order 4.
    const int n_fine = 2 * op.n + 1;
    Tridiag Tf = dirichlet_tridiag(op.spec, op.h, op.a, op.b, n_fine);
    std::vector<Eigen::VectorXd> fine_vectors;
    std::vector<double> lambdas_ext;
    for (int j = 0; j < m; ++j) {
        TriEigenPair pair = tridiag_eigenpair(Tf, j, fine_vectors);
        lambdas_ext.push_back((4.0 * pair.lambda - lambdas[j]) / 3.0);
        fine_vectors.push_back(std::move(pair.vector));
    }

    EigenSolution sol;
    sol.basis = EigenSolution::Basis::grid;
    sol.normalization = "L2_ds_positive_at_well";
    sol.grid = op.grid;
    sol.domain_a = op.a;
    sol.domain_b = op.b;
    sol.eigenvalues = lambdas;
    sol.eigenvalues_extrapolated = lambdas_ext;
    sol.grid_vectors.resize(op.n, m);

    const int near0 = static_cast<int>(std::lower_bound(op.grid.begin(), op.grid.end(), 0.0) -
                                       op.grid.begin());
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd v = vectors[j];
        v /= std::sqrt(op.ds) * v.norm(); // trapezoidal L2(ds), boundary values are 0
        double ref = v[std::clamp(near0, 0, op.n - 1)];
        if (std::abs(ref) < 1e-8 * v.cwiseAbs().maxCoeff()) {
            Eigen::Index imax;
            v.cwiseAbs().maxCoeff(&imax);
            ref = v[imax];
        }
        if (ref < 0.0) v = -v;
        sol.grid_vectors.col(j) = v;
    }
    return sol;
}

EigenSolution ground_state_single_well(const DirichletOperator& op) {
    EigenSolution sol = dirichlet_eigs(op, 2);
    const double scale = std::abs(op.diag[0]) + 2.0 * std::abs(op.offdiag);
    if (sol.eigenvalues[1] - sol.eigenvalues[0] < 1e-10 * scale)
        throw PrecisionError("ground_state_single_well: unexpected ground-state degeneracy");
    sol.eigenvalues.resize(1);
    sol.eigenvalues_extrapolated.resize(1);
    sol.grid_vectors.conservativeResize(Eigen::NoChange, 1);
    return sol;
}

std::pair<std::complex<double>, std::complex<double>>
evaluate_wavefunction(const EigenSolution& sol, double s, int index) {
    using C = std::complex<double>;
    if (sol.basis == EigenSolution::Basis::fourier) {
        C value(0.0, 0.0), deriv(0.0, 0.0);
        for (int i = 0; i < sol.fourier_vectors.rows(); ++i) {
            const double k = i - sol.K;
            const C term = sol.fourier_vectors(i, index) * std::polar(1.0, k * s);
            value += term;
            deriv += C(0.0, k) * term;
        }
        return {value, deriv};
    }
    if (s < sol.domain_a - 1e-12 || s > sol.domain_b + 1e-12)
        throw ParameterError("evaluate_wavefunction: s outside the Dirichlet domain");
    // Pad with the implicit boundary zeros, then local Lagrange interpolation.
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(sol.grid.size() + 2);
    ys.reserve(sol.grid.size() + 2);
    xs.push_back(sol.domain_a);
    ys.push_back(0.0);
    xs.insert(xs.end(), sol.grid.begin(), sol.grid.end());
    for (Eigen::Index i = 0; i < sol.grid_vectors.rows(); ++i)
        ys.push_back(sol.grid_vectors(i, index));
    xs.push_back(sol.domain_b);
    ys.push_back(0.0);
    auto [v, d] = interp_local(xs, ys, s, 6);
    return {C(v, 0.0), C(d, 0.0)};
}

EigenSolution reflect_left(const EigenSolution& sol) {
    EigenSolution out = sol;
    if (sol.basis == EigenSolution::Basis::fourier) {
        // U f(s) = conj(f(pi - s)): c_k -> conj(c_k) (-1)^k.
        for (int i = 0; i < sol.fourier_vectors.rows(); ++i) {
            const int k = i - sol.K;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            for (int j = 0; j < sol.fourier_vectors.cols(); ++j)
                out.fourier_vectors(i, j) = sign * std::conj(sol.fourier_vectors(i, j));
        }
        return out;
    }
    const int n = static_cast<int>(sol.grid.size());
    out.domain_a = M_PI - sol.domain_b;
    out.domain_b = M_PI - sol.domain_a;
    for (int i = 0; i < n; ++i) out.grid[i] = M_PI - sol.grid[n - 1 - i];
    for (int j = 0; j < sol.grid_vectors.cols(); ++j)
        for (int i = 0; i < n; ++i)
            out.grid_vectors(i, j) = sol.grid_vectors(n - 1 - i, j);
    return out;
}

} // namespace fluxlab
