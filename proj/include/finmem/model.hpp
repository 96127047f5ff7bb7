// model.hpp: physical parameters, bath correlation kernels and spectral densities
//
// Unit convention: every dynamical quantity is expressed through a (length),
// hbar (action), D (force^2 * time) and tau_c (time). The default values are
// the dimensionless choice hbar = a = D = 1.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace finmem {

struct PhysicalParams {
    double a{1.0};      // separation of the two pointer states
    double hbar{1.0};
    double D{1.0};      // noise strength
    double tau_c{1.0};  // bath correlation time; 0 is the memoryless bath
    std::optional<double> beta;  // inverse temperature, only used by gamma_rate

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    // a^2 / hbar^2, the prefactor that turns force correlations into rates.
    double coupling_scale() const noexcept { return (a * a) / (hbar * hbar); }
};

// ---------------------------------------------------------------------------
// Bath correlation kernels alpha(t - s)

// 2D delta(t - s); no pointwise value.
struct MarkovianDelta {
    double D{1.0};
};

// (D / tau_c) exp(-|t - s| / tau_c)
struct ExponentialOU {
    double D{1.0};
    double tau_c{1.0};
};

// A exp(-gamma (t - s)) Theta(t - s)
struct GeneralExponential {
    double A{1.0};
    double gamma{1.0};
};

using BathKernel = std::variant<MarkovianDelta, ExponentialOU, GeneralExponential>;

void validate(const BathKernel& k);

// Kernel value at lag dt >= 0.
// Throws std::invalid_argument for MarkovianDelta and std::domain_error for dt < 0.
double eval_kernel(const BathKernel& k, double dt);

// Maps GeneralExponential(A, gamma) onto ExponentialOU(A / gamma, 1 / gamma);
// every other kernel is returned unchanged.
BathKernel normalize(const BathKernel& k);

// Integral of the kernel over all lags. The one-sided GeneralExponential
// kernel is symmetrized, so the result is 2D for every family.
double integrated_strength(const BathKernel& k);

// ---------------------------------------------------------------------------
// Spectral densities

// Effective classical noise power of the OU bath, the Fourier pair of
// ExponentialOU: S(w) = 2D / (1 + w^2 tau_c^2).
struct LorentzianOU {
    double D{1.0};
    double tau_c{1.0};

    double noise_power(double omega) const noexcept {
        const double x = omega * tau_c;
        return 2.0 * D / (1.0 + x * x);
    }
};

// Sampled J(w) with strictly increasing w and J >= 0.
struct TabulatedSpectrum {
    std::vector<double> omega;
    std::vector<double> J;

    void validate() const;
};

using SpectralDensity = std::variant<LorentzianOU, TabulatedSpectrum>;

// Short-time curvature rate Gamma (1/time^2).
//  LorentzianOU: (a^2/hbar^2) (1/pi) int_0^inf S(w) dw, by log-grid trapezoid
//  with interval doubling (relative tolerance 1e-6) and an analytic w^-2 tail.
//  Tabulated: (a^2/hbar^2) int J(w) coth(beta w / 2) dw over the samples; with
//  no beta the zero-temperature weight coth -> 1 is used.
// Throws NumericalError("infrared-divergent spectral density") for a thermal
// weight on a table with J(0) > 0.
double gamma_rate(const PhysicalParams& params, const SpectralDensity& spec);

// Numerical inverse transform (1/pi) int_0^inf S(w) cos(w dt) dw of a
// LorentzianOU spectrum, evaluated on dt_grid. Should reproduce
// eval_kernel(ExponentialOU) to quadrature accuracy.
std::vector<double> kernel_from_spectrum_roundtrip(const SpectralDensity& spec,
                                                   std::span<const double> dt_grid);

// Two whitespace-separated columns (w, J); '#' starts a comment.
TabulatedSpectrum read_tabulated_spectrum(std::istream& in);
TabulatedSpectrum load_tabulated_spectrum(const std::filesystem::path& path);

}  // namespace finmem
