#include "finmem/pseudomode.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "finmem/errors.hpp"

namespace finmem {

namespace {

using cd = std::complex<double>;

// Elementwise form of the enlarged Lindblad generator. With c = a g / hbar,
// sigma = (+1, -1) for (L, R) and rho indexed by ((s, n), (t, m)):
//   -i c [sigma_s (X rho) - sigma_t (rho X)] + kappa [sqrt((n+1)(m+1)) rho_{n+1,m+1} - (n+m)/2 rho_{nm}]
// where X = b + b^dag is tridiagonal. Cost is O(dim^2) per evaluation.
class PseudomodeGenerator {
public:
    explicit PseudomodeGenerator(const PseudomodeConfig& cfg)
        : n_(cfg.fock_dim), c_(cfg.params.a * cfg.g / cfg.params.hbar), kappa_(cfg.kappa), sq_(cfg.fock_dim + 1) {
        for (int k = 0; k <= n_; ++k) sq_[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(k));
    }

    void apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
        const int n = n_;
        const cd minus_ic{0.0, -c_};
        for (int t = 0; t < 2; ++t) {
            for (int s = 0; s < 2; ++s) {
                const double sig_s = s == 0 ? 1.0 : -1.0;
                const double sig_t = t == 0 ? 1.0 : -1.0;
                const int r0 = s * n;
                const int c0 = t * n;
                for (int m = 0; m < n; ++m) {
                    const int col = c0 + m;
                    for (int k = 0; k < n; ++k) {
                        const int row = r0 + k;
                        cd xr{0.0, 0.0};  // (X rho)_{km}
                        if (k > 0) xr += sq_[k] * rho(row - 1, col);
                        if (k + 1 < n) xr += sq_[k + 1] * rho(row + 1, col);
                        cd rx{0.0, 0.0};  // (rho X)_{km}
                        if (m > 0) rx += sq_[m] * rho(row, col - 1);
                        if (m + 1 < n) rx += sq_[m + 1] * rho(row, col + 1);
                        cd diss = -0.5 * static_cast<double>(k + m) * rho(row, col);
                        if (k + 1 < n && m + 1 < n) diss += sq_[k + 1] * sq_[m + 1] * rho(row + 1, col + 1);
                        out(row, col) = minus_ic * (sig_s * xr - sig_t * rx) + kappa_ * diss;
                    }
                }
            }
        }
    }

private:
    int n_;
    double c_;
    double kappa_;
    std::vector<double> sq_;
};

cd reduced_coherence(const ComplexMatrix& rho, int n) {
    cd c{0.0, 0.0};
    for (int k = 0; k < n; ++k) c += rho(k, n + k);
    return c;
}

double top_population(const ComplexMatrix& rho, int n) {
    return rho(n - 1, n - 1).real() + rho(2 * n - 1, 2 * n - 1).real();
}

double population_drift(const ComplexMatrix& rho, int n) {
    double pl = 0.0;
    double pr = 0.0;
    for (int k = 0; k < n; ++k) {
        pl += rho(k, k).real();
        pr += rho(n + k, n + k).real();
    }
    return std::max(std::abs(pl - 0.5), std::abs(pr - 0.5));
}

// Substeps per output step: keeps h * (fastest rate) <= 0.5, well inside the
// RK4 stability region for both the coherent and dissipative parts.
int substeps_for(const PseudomodeConfig& cfg, double dt) {
    const double n = static_cast<double>(cfg.fock_dim - 1);
    const double hamiltonian_rate = 4.0 * cfg.params.a * cfg.g * std::sqrt(n) / cfg.params.hbar;
    const double damping_rate = cfg.kappa * n;
    const double rate = std::max(hamiltonian_rate, damping_rate);
    return std::max(1, static_cast<int>(std::ceil(dt * rate / 0.5)));
}

}  // namespace

PseudomodeConfig build_pseudomode(const PhysicalParams& params, int fock_dim) {
    params.validate();
    if (params.tau_c == 0.0) throw std::invalid_argument("Markovian bath needs no pseudomode");
    if (fock_dim < 2) throw std::invalid_argument("fock_dim must be >= 2");
    PseudomodeConfig cfg;
    cfg.g = std::sqrt(params.D / params.tau_c);
    cfg.kappa = 2.0 / params.tau_c;
    cfg.fock_dim = fock_dim;
    cfg.params = params;
    return cfg;
}

ComplexMatrix annihilation(int n) {
    ComplexMatrix b = ComplexMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
    return b;
}

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B) {
    ComplexMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Generators build_generators(const PseudomodeConfig& cfg) {
    const int n = cfg.fock_dim;
    const ComplexMatrix b = annihilation(n);
    ComplexMatrix sigma_z = ComplexMatrix::Zero(2, 2);
    sigma_z(0, 0) = 1.0;
    sigma_z(1, 1) = -1.0;
    const ComplexMatrix x = b + b.adjoint();
    Generators gen;
    gen.H = cfg.params.a * cfg.g * kron(sigma_z, x);
    gen.L = std::sqrt(cfg.kappa) * kron(ComplexMatrix::Identity(2, 2), b);
    return gen;
}

double DensityMatrix::trace_error() const { return std::abs(matrix.trace() - cd{1.0, 0.0}); }

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    const ComplexMatrix herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& H, const ComplexMatrix& L, const DensityMatrix& rho,
                           double hbar) {
    const auto& r = rho.matrix;
    if (H.rows() != H.cols() || L.rows() != L.cols() || r.rows() != r.cols() || H.rows() != r.rows() ||
        L.rows() != r.rows()) {
        throw std::invalid_argument("lindblad_rhs: dimension mismatch");
    }
    const ComplexMatrix LdL = L.adjoint() * L;
    const cd minus_i_over_hbar{0.0, -1.0 / hbar};
    return minus_i_over_hbar * (H * r - r * H) + L * r * L.adjoint() - 0.5 * (LdL * r + r * LdL);
}

ComplexMatrix pseudomode_rhs(const PseudomodeConfig& cfg, const DensityMatrix& rho) {
    if (rho.matrix.rows() != 2 * cfg.fock_dim || rho.matrix.cols() != 2 * cfg.fock_dim)
        throw std::invalid_argument("pseudomode_rhs: dimension mismatch");
    ComplexMatrix out(rho.matrix.rows(), rho.matrix.cols());
    PseudomodeGenerator(cfg).apply(rho.matrix, out);
    return out;
}

DensityMatrix initial_state(const PseudomodeConfig& cfg) {
    const int n = cfg.fock_dim;
    DensityMatrix rho{ComplexMatrix::Zero(2 * n, 2 * n)};
    rho.matrix(0, 0) = rho.matrix(0, n) = rho.matrix(n, 0) = rho.matrix(n, n) = 0.5;
    return rho;
}

double pseudomode_max_step(const PseudomodeConfig& cfg) {
    double scale = cfg.params.tau_c;
    const double coupling = cfg.params.a * cfg.g;
    if (coupling > 0.0) scale = std::min(scale, cfg.params.hbar / coupling);
    return scale / 50.0;
}

Evolution evolve_with_report(const PseudomodeConfig& cfg, double t_max, double dt,
                             const EvolveOptions& opts) {
    const std::size_t steps = grid_intervals(t_max, dt);
    if (dt > pseudomode_max_step(cfg) * (1.0 + 1e-12)) throw NumericalError("step exceeds stability guard");

    const int n = cfg.fock_dim;
    const PseudomodeGenerator gen(cfg);
    const int sub = substeps_for(cfg, dt);
    const double h = dt / sub;

    DensityMatrix rho = initial_state(cfg);
    const cd c0 = reduced_coherence(rho.matrix, n);

    Evolution ev;
    ev.series = CoherenceSeries{dt, {}, "pseudomode"};
    ev.series.values.reserve(steps + 1);
    ev.report.min_eigenvalue = std::numeric_limits<double>::infinity();

    const std::size_t eig_every = std::max<std::size_t>(1, steps / std::max(1, opts.eigen_samples - 1));
    auto record = [&](std::size_t k) {
        const auto& r = rho.matrix;
        ev.series.values.push_back(reduced_coherence(r, n) / c0);
        auto& rep = ev.report;
        rep.max_trace_error = std::max(rep.max_trace_error, rho.trace_error());
        rep.max_hermiticity_error = std::max(rep.max_hermiticity_error, rho.hermiticity_error());
        rep.max_population_drift = std::max(rep.max_population_drift, population_drift(r, n));
        const double top = top_population(r, n);
        rep.max_top_population = std::max(rep.max_top_population, top);
        if ((k % eig_every == 0 || k == steps) && opts.eigen_samples > 0) {
            rep.min_eigenvalue = std::min(rep.min_eigenvalue, rho.min_eigenvalue());
        }
        if (opts.check_truncation && top >= opts.top_population_tol) {
            throw NumericalError("Fock truncation not converged");
        }
    };

    ComplexMatrix k1(2 * n, 2 * n), k2(2 * n, 2 * n), k3(2 * n, 2 * n), k4(2 * n, 2 * n), tmp(2 * n, 2 * n);
    record(0);
    for (std::size_t k = 1; k <= steps; ++k) {
        for (int s = 0; s < sub; ++s) {
            auto& r = rho.matrix;
            gen.apply(r, k1);
            tmp = r + (0.5 * h) * k1;
            gen.apply(tmp, k2);
            tmp = r + (0.5 * h) * k2;
            gen.apply(tmp, k3);
            tmp = r + h * k3;
            gen.apply(tmp, k4);
            r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        record(k);
    }
    if (opts.eigen_samples <= 0) ev.report.min_eigenvalue = 0.0;
    return ev;
}

CoherenceSeries evolve(const PseudomodeConfig& cfg, double t_max, double dt) {
    return evolve_with_report(cfg, t_max, dt).series;
}

PseudomodeConfig adapt_truncation(const PseudomodeConfig& cfg, double t_max, const TruncationOptions& opts) {
    if (opts.start_dim < 2) throw std::invalid_argument("start_dim must be >= 2");
    struct Probe {
        CoherenceSeries series;
        double top;
    };
    auto probe = [&](int dim) {
        PseudomodeConfig c = cfg;
        c.fock_dim = dim;
        double dt = opts.probe_dt > 0.0 ? opts.probe_dt : pseudomode_max_step(c);
        dt = std::min(dt, t_max / 100.0);
        EvolveOptions eo;
        eo.check_truncation = false;
        eo.eigen_samples = 0;
        auto ev = evolve_with_report(c, t_max, dt, eo);
        return Probe{std::move(ev.series), ev.report.max_top_population};
    };
    auto max_change = [](const CoherenceSeries& a, const CoherenceSeries& b) {
        double m = 0.0;
        for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
        return m;
    };

    int dim = opts.start_dim;
    Probe prev = probe(std::max(2, dim / 2));
    while (true) {
        if (dim > opts.max_dim) throw NumericalError("truncation runaway; check parameters");
        Probe cur = probe(dim);
        if (cur.top < opts.top_population_tol && max_change(cur.series, prev.series) < opts.coherence_tol) {
            PseudomodeConfig out = cfg;
            out.fock_dim = dim;
            return out;
        }
        prev = std::move(cur);
        dim *= 2;
    }
}

}  // namespace finmem
