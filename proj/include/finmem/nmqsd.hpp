// nmqsd.hpp: noise-averaged NMQSD coherence equation for exponential kernels
//
// The closure O(t, s) = amplitude [1 - exp(-(t - s)/tau_c)] makes the coherence
// equation a closed Volterra integro-differential equation
//
//     C'(t) = -K int_0^t exp(-(t - s)/tau_c) C(s) ds,
//
// integrated here through the memory accumulator
// y(t) = int_0^t exp(-(t - s)/tau_c) C(s) ds, which obeys y' = C - y/tau_c.
//
// Coefficient convention: K = 2 a^2 D / (hbar^2 tau_c), i.e. the kernel
// amplitude D / tau_c sits inside the integral. Writing the prefactor as
// 2 a^2 D / hbar^2 without the 1/tau_c would give C'' + C'/tau_c + (2a^2D/hbar^2) C = 0,
// which has no finite memoryless limit and does not reproduce the damped
// oscillator C'' + C'/tau_c + K C = 0.

#pragma once

#include <complex>
#include <vector>

#include "finmem/model.hpp"
#include "finmem/series.hpp"

namespace finmem {

struct ClosureFunction {
    double amplitude{0.0};  // 2 a^2 D / hbar^2
    double tau_c{1.0};
};

ClosureFunction make_closure(const PhysicalParams& params);

// amplitude [1 - exp(-(t - s)/tau_c)]; throws std::domain_error for t < s.
double closure_value(const ClosureFunction& cf, double t, double s);

// |dO/dt + O/tau_c - amplitude/tau_c| with the analytic derivative.
// Note: the printed solution has O(s, s) = 0; that is what is implemented.
double closure_ode_residual(const ClosureFunction& cf, double t, double s);

struct VolterraState {
    std::complex<double> C{1.0, 0.0};
    std::complex<double> y{0.0, 0.0};
    double t{0.0};
};

// Maximum step accepted by integrate_volterra: tau_c / 20.
double volterra_max_step(const PhysicalParams& params);

// Fixed-step RK4 trajectory of (C, y) from C(0) = 1, y(0) = 0.
// Throws NumericalError("step exceeds stability guard") for dt > tau_c / 20
// and std::invalid_argument for tau_c == 0.
std::vector<VolterraState> integrate_volterra_states(const PhysicalParams& params, double t_max,
                                                     double dt);

CoherenceSeries integrate_volterra(const PhysicalParams& params, double t_max, double dt);

}  // namespace finmem
