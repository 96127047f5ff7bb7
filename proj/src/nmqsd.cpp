#include "finmem/nmqsd.hpp"

#include <cmath>
#include <stdexcept>

#include "finmem/errors.hpp"

namespace finmem {

ClosureFunction make_closure(const PhysicalParams& params) {
    params.validate();
    if (params.tau_c == 0.0) throw std::invalid_argument("closure needs tau_c > 0");
    return {2.0 * params.coupling_scale() * params.D, params.tau_c};
}

double closure_value(const ClosureFunction& cf, double t, double s) {
    if (!(t >= s)) throw std::domain_error("closure needs t >= s");
    return -cf.amplitude * std::expm1(-(t - s) / cf.tau_c);
}

double closure_ode_residual(const ClosureFunction& cf, double t, double s) {
    const double O = closure_value(cf, t, s);
    const double dO = cf.amplitude / cf.tau_c * std::exp(-(t - s) / cf.tau_c);
    return std::abs(dO + O / cf.tau_c - cf.amplitude / cf.tau_c);
}

double volterra_max_step(const PhysicalParams& params) { return params.tau_c / 20.0; }

std::vector<VolterraState> integrate_volterra_states(const PhysicalParams& params, double t_max,
                                                     double dt) {
    params.validate();
    if (params.tau_c == 0.0) throw std::invalid_argument("Volterra closure needs tau_c > 0");
    const std::size_t n = grid_intervals(t_max, dt);
    if (dt > volterra_max_step(params) * (1.0 + 1e-12)) throw NumericalError("step exceeds stability guard");

    const double K = 2.0 * params.coupling_scale() * params.D / params.tau_c;
    const double inv_tau = 1.0 / params.tau_c;
    using cd = std::complex<double>;
    // (C, y)' = (-K y, C - y / tau_c)
    auto f = [&](cd C, cd y) { return std::pair<cd, cd>{-K * y, C - inv_tau * y}; };

    std::vector<VolterraState> states;
    states.reserve(n + 1);
    VolterraState s;
    states.push_back(s);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto [c1, y1] = f(s.C, s.y);
        const auto [c2, y2] = f(s.C + 0.5 * dt * c1, s.y + 0.5 * dt * y1);
        const auto [c3, y3] = f(s.C + 0.5 * dt * c2, s.y + 0.5 * dt * y2);
        const auto [c4, y4] = f(s.C + dt * c3, s.y + dt * y3);
        s.C += dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
        s.y += dt / 6.0 * (y1 + 2.0 * y2 + 2.0 * y3 + y4);
        s.t = static_cast<double>(k) * dt;
        states.push_back(s);
    }
    return states;
}

CoherenceSeries integrate_volterra(const PhysicalParams& params, double t_max, double dt) {
    const auto states = integrate_volterra_states(params, t_max, dt);
    CoherenceSeries out{dt, {}, "nmqsd"};
    out.values.reserve(states.size());
    for (const auto& s : states) out.values.push_back(s.C);
    return out;
}

}  // namespace finmem
