// pseudomode.hpp: exact simulation of the OU bath through one damped auxiliary mode
//
// A vacuum bosonic mode b with decay rate kappa and coupling
// H = a g sigma_z (b + b^dag) reproduces the force correlation
// g^2 exp(-kappa t / 2) = (D / tau_c) exp(-t / tau_c) for g = sqrt(D / tau_c),
// kappa = 2 / tau_c. The Lindblad equation on system (x) mode is then exact.
//
// Index convention: basis index = s * fock_dim + n with s = 0 for |L>, s = 1
// for |R>.

#pragma once

#include <Eigen/Dense>

#include "finmem/model.hpp"
#include "finmem/series.hpp"

namespace finmem {

using ComplexMatrix = Eigen::MatrixXcd;

struct PseudomodeConfig {
    double g{0.0};
    double kappa{0.0};
    int fock_dim{4};
    PhysicalParams params;
};

// Throws std::invalid_argument for tau_c == 0 ("Markovian bath needs no
// pseudomode") or fock_dim < 2. D == 0 is accepted and yields g = 0.
PseudomodeConfig build_pseudomode(const PhysicalParams& params, int fock_dim);

// Truncated annihilation operator on n Fock levels.
ComplexMatrix annihilation(int n);

ComplexMatrix kron(const ComplexMatrix& A, const ComplexMatrix& B);

struct Generators {
    ComplexMatrix H;  // a g sigma_z (x) (b + b^dag); no system self-Hamiltonian
    ComplexMatrix L;  // sqrt(kappa) 1 (x) b
};

Generators build_generators(const PseudomodeConfig& cfg);

struct DensityMatrix {
    ComplexMatrix matrix;

    double trace_error() const;         // |Tr rho - 1|
    double hermiticity_error() const;   // max |rho - rho^dag|
    double min_eigenvalue() const;      // of the Hermitian part
};

// -(i/hbar)[H, rho] + L rho L^dag - 1/2 {L^dag L, rho}.
// Throws std::invalid_argument on mismatched dimensions.
ComplexMatrix lindblad_rhs(const ComplexMatrix& H, const ComplexMatrix& L, const DensityMatrix& rho,
                           double hbar = 1.0);

// Same generator as lindblad_rhs(build_generators(cfg)), evaluated elementwise
// from the banded structure of b + b^dag; this is the path evolve uses.
ComplexMatrix pseudomode_rhs(const PseudomodeConfig& cfg, const DensityMatrix& rho);

// (|L> + |R>)(<L| + <R|)/2 (x) |0><0|
DensityMatrix initial_state(const PseudomodeConfig& cfg);

// Largest output step accepted by evolve: min(tau_c, hbar / (a g)) / 50.
double pseudomode_max_step(const PseudomodeConfig& cfg);

struct EvolveOptions {
    double top_population_tol{1e-8};  // truncation check
    int eigen_samples{20};            // times at which the spectrum of rho is checked
    bool check_truncation{true};
};

struct ConservationReport {
    double max_trace_error{0.0};
    double max_hermiticity_error{0.0};
    double min_eigenvalue{0.0};
    double max_population_drift{0.0};  // pointer-state populations vs 1/2
    double max_top_population{0.0};    // population of the highest Fock level
};

struct Evolution {
    CoherenceSeries series;
    ConservationReport report;
};

// RK4 integration of the enlarged Lindblad equation. Output is sampled every
// dt; internally each output step is split into substeps short enough for the
// highest Fock level. C(t) = <L| Tr_pm rho |R>, normalized by C(0) = 1/2.
// Throws NumericalError for dt above pseudomode_max_step ("step exceeds
// stability guard") or, when checked, if the top Fock population reaches
// top_population_tol ("Fock truncation not converged").
Evolution evolve_with_report(const PseudomodeConfig& cfg, double t_max, double dt,
                             const EvolveOptions& opts = {});

CoherenceSeries evolve(const PseudomodeConfig& cfg, double t_max, double dt);

struct TruncationOptions {
    int start_dim{4};
    int max_dim{256};
    double top_population_tol{1e-8};
    double coherence_tol{1e-6};
    double probe_dt{0.0};  // 0 selects pseudomode_max_step
};

// Doubles fock_dim from start_dim until the top Fock population stays below
// top_population_tol over [0, t_max] and C(t) moved by less than coherence_tol
// relative to the previous (half-size) truncation. Throws
// NumericalError("truncation runaway; check parameters") past max_dim.
PseudomodeConfig adapt_truncation(const PseudomodeConfig& cfg, double t_max,
                                  const TruncationOptions& opts = {});

}  // namespace finmem
