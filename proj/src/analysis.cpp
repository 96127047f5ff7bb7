#include "finmem/analysis.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "finmem/analytic.hpp"
#include "finmem/errors.hpp"
#include "finmem/nmqsd.hpp"
#include "finmem/pseudomode.hpp"

namespace finmem {

namespace {

struct MethodName {
    Method method;
    std::string_view tag;
};

constexpr std::array<MethodName, 7> kMethodNames{{
    {Method::Tegmark, "tegmark"},
    {Method::Quadratic, "quadratic"},
    {Method::Eq16, "eq16"},
    {Method::Nmqsd, "nmqsd"},
    {Method::Pseudomode, "pseudomode"},
    {Method::Oracle, "oracle"},
    {Method::Formula, "formula"},
}};

double characteristic_time(const PhysicalParams& p) {
    return std::max(tau_dec_formula(p), tegmark_time(p));
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    for (const auto& [method, tag] : kMethodNames)
        if (method == m) return tag;
    return "unknown";
}

std::optional<Method> parse_method(std::string_view tag) noexcept {
    for (const auto& [method, name] : kMethodNames)
        if (name == tag) return method;
    return std::nullopt;
}

bool has_series(Method m) noexcept { return m != Method::Formula; }

DecoherenceTime extract_tau_dec(const CoherenceSeries& series, double threshold, bool interpolate) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
    if (series.values.empty()) throw std::invalid_argument("empty coherence series");
    const double level = threshold * std::abs(series.values.front());
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double cur = series.magnitude(k);
        if (cur > level) continue;
        double t = series.time(k);
        if (interpolate) {
            const double prev = series.magnitude(k - 1);
            const double frac = (prev - level) / (prev - cur);
            t = series.time(k - 1) + frac * series.dt;
        }
        return {t, series.label, interpolate, threshold};
    }
    throw HorizonExceeded("horizon exceeded; extend t_max");
}

CoherenceSeries generate_series(Method m, const PhysicalParams& params, double t_max, double dt,
                                const GenerationOptions& opts) {
    switch (m) {
        case Method::Tegmark: return tegmark_decay(params, t_max, dt);
        case Method::Quadratic: {
            if (params.tau_c == 0.0) throw std::invalid_argument("quadratic law needs tau_c > 0");
            const double gamma = gamma_rate(params, LorentzianOU{params.D, params.tau_c});
            return quadratic_law(gamma, t_max, dt);
        }
        case Method::Eq16: return eval_eq16(solve_eq16(params), t_max, dt);
        case Method::Nmqsd: return integrate_volterra(params, t_max, dt);
        case Method::Pseudomode: {
            TruncationOptions to;
            to.max_dim = opts.fock_cap;
            const auto cfg = adapt_truncation(build_pseudomode(params, to.start_dim), t_max, to);
            auto ev = evolve_with_report(cfg, t_max, dt);
            if (opts.observer) opts.observer(params, ev.report);
            return std::move(ev.series);
        }
        case Method::Oracle: return dephasing_oracle(params, t_max, dt);
        case Method::Formula: break;
    }
    throw std::invalid_argument("method has no coherence series: " + std::string(to_string(m)));
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("fit_power_law needs at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_power_law needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law needs distinct abscissae");
    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (fit.exponent * lx[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid needs 0 < lo < hi");
    if (points < 2) throw std::invalid_argument("log_grid needs at least two points");
    std::vector<double> g(static_cast<std::size_t>(points));
    const double ratio = hi / lo;
    for (int i = 0; i < points; ++i) {
        const double x = lo * std::pow(ratio, static_cast<double>(i) / (points - 1));
        // Round to 15 significant digits so that e.g. 1..64 lands on 4 and 16 exactly.
        std::ostringstream os;
        os.precision(15);
        os << x;
        g[static_cast<std::size_t>(i)] = std::stod(os.str());
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

SweepGrid sweep_grid(const PhysicalParams& params) {
    const double scale = characteristic_time(params);
    return {std::min(params.tau_c, scale) / 200.0, 2.0 * scale, 20.0 * scale};
}

DecoherenceTime sweep_point(Method m, const PhysicalParams& params, const SweepOptions& opts) {
    if (m == Method::Formula) return {tau_dec_formula(params), "formula", false, opts.threshold};
    const SweepGrid grid = sweep_grid(params);
    const GenerationOptions gen{opts.fock_cap, opts.observer};
    for (double horizon = grid.initial_horizon;; horizon = std::min(2.0 * horizon, grid.max_horizon)) {
        try {
            auto dec = extract_tau_dec(generate_series(m, params, horizon, grid.dt, gen), opts.threshold,
                                       opts.interpolate);
            dec.method = std::string(to_string(m));
            return dec;
        } catch (const HorizonExceeded&) {
            if (horizon >= grid.max_horizon) throw;
        }
    }
}

SweepResult sweep(const PhysicalParams& params_base, std::span<const double> tau_c_grid,
                  std::span<const Method> methods, const SweepOptions& opts) {
    params_base.validate();
    if (tau_c_grid.size() < 4) throw std::invalid_argument("sweep needs at least 4 tau_c points");
    if (methods.empty()) throw std::invalid_argument("sweep needs at least one method");
    for (std::size_t i = 0; i < tau_c_grid.size(); ++i) {
        if (!(tau_c_grid[i] > 0.0)) throw std::invalid_argument("sweep tau_c values must be > 0");
        if (i > 0 && !(tau_c_grid[i] > tau_c_grid[i - 1]))
            throw std::invalid_argument("sweep grid must be strictly increasing");
    }

    const std::size_t n_tau = tau_c_grid.size();
    const std::size_t n_items = n_tau * methods.size();
    std::vector<std::optional<DecoherenceTime>> results(n_items);
    std::vector<std::exception_ptr> errors(n_items);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t item = next++; item < n_items; item = next++) {
            PhysicalParams p = params_base;
            p.tau_c = tau_c_grid[item / methods.size()];
            try {
                results[item] = sweep_point(methods[item % methods.size()], p, opts);
            } catch (...) {
                errors[item] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, opts.jobs)), 1, n_items);
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < jobs; ++i) pool.emplace_back(worker);
        worker();
    }

    for (std::size_t item = 0; item < n_items; ++item) {
        if (!errors[item]) continue;
        std::ostringstream where;
        where.precision(17);
        where << "sweep failed at tau_c=" << tau_c_grid[item / methods.size()]
              << ", method=" << to_string(methods[item % methods.size()]) << ": ";
        try {
            std::rethrow_exception(errors[item]);
        } catch (const NumericalError& e) {
            throw NumericalError(where.str() + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where.str() + e.what());
        }
    }

    SweepResult out;
    out.methods.assign(methods.begin(), methods.end());
    out.rows.resize(n_tau);
    for (std::size_t i = 0; i < n_tau; ++i) {
        out.rows[i].tau_c = tau_c_grid[i];
        for (std::size_t j = 0; j < methods.size(); ++j)
            out.rows[i].times[methods[j]] = *results[i * methods.size() + j];
    }
    std::vector<double> ys(n_tau);
    for (Method m : methods) {
        for (std::size_t i = 0; i < n_tau; ++i) ys[i] = out.rows[i].times.at(m).value;
        out.fits[m] = fit_power_law(tau_c_grid, ys);
    }
    return out;
}

MarkovLimitStudy markov_limit_study(const PhysicalParams& params_base, double tau_c_start, int decades,
                                    const SweepOptions& opts) {
    params_base.validate();
    if (decades < 2) throw std::invalid_argument("markov_limit_study needs decades >= 2");
    if (!(tau_c_start > 0.0)) throw std::invalid_argument("tau_c_start must be > 0");

    MarkovLimitStudy study;
    const double tau_T = tegmark_time(params_base);
    for (int j = 0; j <= decades; ++j) {
        PhysicalParams p = params_base;
        p.tau_c = tau_c_start * std::pow(10.0, -j);
        const auto sol = solve_eq16(p);
        // The closed form needs no resolution of the fast transient.
        const double scale = characteristic_time(p);
        const double dt = scale / 4000.0;
        std::optional<DecoherenceTime> dec;
        for (double horizon = 2.0 * scale; !dec; horizon = std::min(2.0 * horizon, 20.0 * scale)) {
            try {
                dec = extract_tau_dec(eval_eq16(sol, horizon, dt), opts.threshold, opts.interpolate);
            } catch (const HorizonExceeded&) {
                if (horizon >= 20.0 * scale) throw;
            }
        }
        study.rows.push_back({p.tau_c, dec->value, tau_T, dec->value / tau_T});
    }
    const auto& last = study.rows.back();
    const auto& before = study.rows[study.rows.size() - 2];
    study.converged_ratio = last.ratio;
    study.last_change = std::abs(last.ratio - before.ratio) / before.ratio;
    study.converged = study.last_change < 0.01;
    return study;
}

QuadraticFit fit_quadratic_coefficient(const CoherenceSeries& series, double window) {
    if (!(window > 0.0)) throw std::invalid_argument("quadratic window must be > 0");
    double st2y = 0.0, st4 = 0.0, ymax = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double t = series.time(k);
        if (t > window * (1.0 + 1e-9)) break;
        const double y = 1.0 - series.magnitude(k);
        if (std::abs(y) >= 0.02) throw std::invalid_argument("quadratic window leaves the short-time regime");
        pts.emplace_back(t, y);
        st2y += t * t * y;
        st4 += t * t * t * t;
        ymax = std::max(ymax, std::abs(y));
    }
    if (pts.size() < 10) throw std::invalid_argument("insufficient samples in quadratic window");
    QuadraticFit fit;
    fit.coefficient = st2y / st4;
    if (ymax > 0.0) {
        double ss = 0.0;
        for (const auto& [t, y] : pts) {
            const double r = y - fit.coefficient * t * t;
            ss += r * r;
        }
        fit.residual = std::sqrt(ss / static_cast<double>(pts.size())) / ymax;
    }
    fit.poor_fit = fit.residual > 0.05;
    return fit;
}

}  // namespace finmem
