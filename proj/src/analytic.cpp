#include "finmem/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace finmem {

CoherenceSeries tegmark_decay(const PhysicalParams& params, double t_max, double dt) {
    params.validate();
    const double rate = params.coupling_scale() * params.D;
    return sample_series(t_max, dt, "tegmark", [rate](double t) { return std::exp(-rate * t); });
}

double tegmark_time(const PhysicalParams& params) {
    params.validate();
    if (params.D == 0.0) throw std::domain_error("no decoherence");
    return 1.0 / (params.coupling_scale() * params.D);
}

CoherenceSeries quadratic_law(double gamma, double t_max, double dt) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be >= 0");
    bool clamped = false;
    auto s = sample_series(t_max, dt, "quadratic", [&](double t) {
        const double c = 1.0 - gamma * t * t;
        if (c < 0.0) clamped = true;
        return c < 0.0 ? 0.0 : c;
    });
    if (clamped) s.label = "quadratic[clamped]";
    return s;
}

const char* to_string(DampingRegime r) noexcept {
    switch (r) {
        case DampingRegime::Underdamped: return "underdamped";
        case DampingRegime::Critical: return "critical";
        case DampingRegime::Overdamped: return "overdamped";
    }
    return "unknown";
}

OscillatorSolution solve_eq16(const PhysicalParams& params) {
    params.validate();
    if (params.tau_c == 0.0) throw std::invalid_argument("Markovian case; use tegmark_decay");
    if (params.D == 0.0) throw std::invalid_argument("no decoherence: D must be > 0");

    OscillatorSolution sol;
    sol.tau_c = params.tau_c;
    sol.K = 2.0 * params.coupling_scale() * params.D / params.tau_c;

    const double b = 1.0 / params.tau_c;
    const double b2 = b * b;
    // 1/tau^2 - 4K = (1 - 8 a^2 D tau / hbar^2) / tau^2, formed from the
    // dimensionless ratio to avoid cancellation.
    const double ratio = 8.0 * params.coupling_scale() * params.D * params.tau_c;
    const double disc = (1.0 - ratio) * b2;

    if (std::abs(disc) <= 1e-12 * b2) {
        sol.regime = DampingRegime::Critical;
        sol.rate_fast = sol.rate_slow = 0.5 * b;
    } else if (disc < 0.0) {
        sol.regime = DampingRegime::Underdamped;
        sol.omega = 0.5 * std::sqrt(-disc);
        sol.rate_fast = sol.rate_slow = 0.5 * b;
    } else {
        sol.regime = DampingRegime::Overdamped;
        sol.rate_fast = 0.5 * (b + std::sqrt(disc));
        sol.rate_slow = sol.K / sol.rate_fast;
    }
    return sol;
}

double OscillatorSolution::coherence(double t) const noexcept {
    switch (regime) {
        case DampingRegime::Underdamped: {
            const double envelope = std::exp(-0.5 * t / tau_c);
            return envelope * (std::cos(omega * t) + std::sin(omega * t) / (2.0 * omega * tau_c));
        }
        case DampingRegime::Critical: {
            const double x = 0.5 * t / tau_c;
            return (1.0 + x) * std::exp(-x);
        }
        case DampingRegime::Overdamped: {
            // (rf e^{-rs t} - rs e^{-rf t}) / (rf - rs), with e^{-rs t} factored out
            const double gap = rate_fast - rate_slow;
            return std::exp(-rate_slow * t) * (rate_fast - rate_slow * std::exp(-gap * t)) / gap;
        }
    }
    return 0.0;
}

double OscillatorSolution::derivative(double t) const noexcept {
    switch (regime) {
        case DampingRegime::Underdamped:
            return -K * std::exp(-0.5 * t / tau_c) * std::sin(omega * t) / omega;
        case DampingRegime::Critical:
            return -K * t * std::exp(-0.5 * t / tau_c);
        case DampingRegime::Overdamped: {
            const double gap = rate_fast - rate_slow;
            return -K * std::exp(-rate_slow * t) * (-std::expm1(-gap * t)) / gap;
        }
    }
    return 0.0;
}

CoherenceSeries eval_eq16(const OscillatorSolution& sol, double t_max, double dt) {
    return sample_series(t_max, dt, "eq16", [&sol](double t) { return sol.coherence(t); });
}

double tau_dec_formula(const PhysicalParams& params) {
    params.validate();
    if (params.D == 0.0) throw std::domain_error("no decoherence");
    return std::sqrt(params.tau_c / (params.coupling_scale() * params.D));
}

double dephasing_exponent(const PhysicalParams& params, double t) {
    const double tau = params.tau_c;
    const double x = t / tau;
    // x - (1 - e^{-x}), by series where the difference cancels
    const double shape = x < 1e-3 ? x * x * (0.5 - x * (1.0 / 6.0 - x / 24.0)) : x + std::expm1(-x);
    return 4.0 * params.coupling_scale() * (params.D / tau) * tau * tau * shape;
}

CoherenceSeries dephasing_oracle(const PhysicalParams& params, double t_max, double dt) {
    params.validate();
    if (params.tau_c == 0.0) throw std::invalid_argument("dephasing oracle needs tau_c > 0");
    return sample_series(t_max, dt, "oracle",
                         [&params](double t) { return std::exp(-dephasing_exponent(params, t)); });
}

}  // namespace finmem
