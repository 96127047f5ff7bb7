// analytic.hpp: closed-form coherence laws
//
// Markovian (exponential) decay, the universal quadratic short-time law, the
// damped-oscillator equation
//
//     C'' + C' / tau_c + K C = 0,   K = 2 a^2 D / (hbar^2 tau_c),
//
// with C(0) = 1, C'(0) = 0 in all three damping regimes, and the exact
// pure-dephasing solution for the exponential kernel used as an oracle for the
// pseudomode simulator.

#pragma once

#include "finmem/model.hpp"
#include "finmem/series.hpp"

namespace finmem {

// exp(-a^2 D t / hbar^2)
CoherenceSeries tegmark_decay(const PhysicalParams& params, double t_max, double dt);

// hbar^2 / (a^2 D). Throws std::domain_error("no decoherence") when D == 0.
double tegmark_time(const PhysicalParams& params);

// max(0, 1 - gamma t^2). When the clamp is hit the label reads "quadratic[clamped]".
CoherenceSeries quadratic_law(double gamma, double t_max, double dt);

enum class DampingRegime { Underdamped, Critical, Overdamped };

const char* to_string(DampingRegime r) noexcept;

struct OscillatorSolution {
    DampingRegime regime{DampingRegime::Critical};
    double rate_fast{0.0};  // overdamped roots; both equal 1/(2 tau_c) at criticality
    double rate_slow{0.0};
    double omega{0.0};      // underdamped frequency
    double tau_c{0.0};
    double K{0.0};

    // C(t) for t >= 0.
    double coherence(double t) const noexcept;
    // dC/dt, closed form.
    double derivative(double t) const noexcept;
};

// Classifies the regime from 1/tau_c^2 - 4K; |disc| <= 1e-12 / tau_c^2 is critical.
// Throws std::invalid_argument for tau_c == 0 ("Markovian case; use
// tegmark_decay") and for D == 0.
OscillatorSolution solve_eq16(const PhysicalParams& params);

CoherenceSeries eval_eq16(const OscillatorSolution& sol, double t_max, double dt);

// sqrt(hbar^2 tau_c / (a^2 D)). Throws std::domain_error("no decoherence") for D == 0.
double tau_dec_formula(const PhysicalParams& params);

// Gamma_ex(t) = (4 a^2 / hbar^2) (D / tau_c) [tau_c t - tau_c^2 (1 - exp(-t / tau_c))]
double dephasing_exponent(const PhysicalParams& params, double t);

// exp(-Gamma_ex(t)), the exact pure-dephasing coherence of the exponential kernel.
CoherenceSeries dephasing_oracle(const PhysicalParams& params, double t_max, double dt);

}  // namespace finmem
