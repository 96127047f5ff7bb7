#include "finmem/model.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "finmem/errors.hpp"

namespace finmem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

// Composite trapezoid of f over [lo, hi] on a log-spaced grid (u = ln w),
// doubling the interval count until successive estimates agree to rel_tol.
template <class F>
double log_trapezoid(F&& f, double lo, double hi, double rel_tol, double abs_tol) {
    const double u0 = std::log(lo);
    const double u1 = std::log(hi);
    auto g = [&](double u) {
        const double w = std::exp(u);
        return f(w) * w;
    };
    std::size_t n = 256;
    double h = (u1 - u0) / static_cast<double>(n);
    double sum = 0.5 * (g(u0) + g(u1));
    for (std::size_t i = 1; i < n; ++i) sum += g(u0 + static_cast<double>(i) * h);
    double estimate = sum * h;
    constexpr std::size_t kMaxIntervals = std::size_t{1} << 24;
    while (n < kMaxIntervals) {
        // new midpoints only
        for (std::size_t i = 0; i < n; ++i) sum += g(u0 + (static_cast<double>(i) + 0.5) * h);
        n *= 2;
        h *= 0.5;
        const double next = sum * h;
        const double change = std::abs(next - estimate);
        estimate = next;
        if (change <= rel_tol * std::abs(estimate) || change <= abs_tol) return estimate;
    }
    throw NumericalError("log-grid quadrature did not converge");
}

constexpr double kLowCut = 1e-8;   // lower grid edge, in units of 1/tau_c
constexpr double kHighCut = 1e3;   // upper cutoff, in units of 1/tau_c
constexpr double kQuadTol = 1e-6;

}  // namespace

void PhysicalParams::validate() const {
    if (!finite_pos(a)) throw std::invalid_argument("separation a must be > 0");
    if (!finite_pos(hbar)) throw std::invalid_argument("hbar must be > 0");
    if (!finite_nonneg(D)) throw std::invalid_argument("noise strength D must be >= 0");
    if (!finite_nonneg(tau_c)) throw std::invalid_argument("tau_c must be >= 0");
    if (beta && !finite_pos(*beta)) throw std::invalid_argument("beta must be > 0");
}

void validate(const BathKernel& k) {
    std::visit(overloaded{
                   [](const MarkovianDelta& m) {
                       if (!finite_nonneg(m.D)) throw std::invalid_argument("D must be >= 0");
                   },
                   [](const ExponentialOU& ou) {
                       if (!finite_nonneg(ou.D)) throw std::invalid_argument("D must be >= 0");
                       if (!finite_pos(ou.tau_c)) throw std::invalid_argument("tau_c must be > 0");
                   },
                   [](const GeneralExponential& ge) {
                       if (!finite_nonneg(ge.A)) throw std::invalid_argument("A must be >= 0");
                       if (!finite_pos(ge.gamma)) throw std::invalid_argument("gamma must be > 0");
                   },
               },
               k);
}

double eval_kernel(const BathKernel& k, double dt) {
    validate(k);
    if (std::holds_alternative<MarkovianDelta>(k)) {
        throw std::invalid_argument("kernel has no pointwise value");
    }
    if (!(dt >= 0.0)) throw std::domain_error("kernel lag must be >= 0");
    return std::visit(overloaded{
                          [](const MarkovianDelta&) { return 0.0; },
                          [dt](const ExponentialOU& ou) { return ou.D / ou.tau_c * std::exp(-dt / ou.tau_c); },
                          [dt](const GeneralExponential& ge) { return ge.A * std::exp(-ge.gamma * dt); },
                      },
                      k);
}

BathKernel normalize(const BathKernel& k) {
    if (const auto* ge = std::get_if<GeneralExponential>(&k)) {
        return ExponentialOU{ge->A / ge->gamma, 1.0 / ge->gamma};
    }
    return k;
}

double integrated_strength(const BathKernel& k) {
    validate(k);
    return std::visit(overloaded{
                          [](const MarkovianDelta& m) { return 2.0 * m.D; },
                          // (D/tau_c) * 2 tau_c
                          [](const ExponentialOU& ou) { return 2.0 * ou.D; },
                          // one-sided integral A/gamma, doubled
                          [](const GeneralExponential& ge) { return 2.0 * ge.A / ge.gamma; },
                      },
                      k);
}

void TabulatedSpectrum::validate() const {
    if (omega.size() != J.size()) throw std::invalid_argument("spectrum columns differ in length");
    if (omega.size() < 2) throw std::invalid_argument("spectrum needs at least two samples");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!std::isfinite(omega[i]) || omega[i] < 0.0)
            throw std::invalid_argument("spectrum frequencies must be finite and >= 0");
        if (!finite_nonneg(J[i])) throw std::invalid_argument("spectral density must be >= 0");
        if (i > 0 && !(omega[i] > omega[i - 1]))
            throw std::invalid_argument("spectrum frequencies must be strictly increasing");
    }
}

namespace {

double lorentzian_rate_integral(const LorentzianOU& s) {
    if (s.D == 0.0) return 0.0;
    if (!finite_pos(s.tau_c)) throw std::invalid_argument("tau_c must be > 0");
    const double lo = kLowCut / s.tau_c;
    const double hi = kHighCut / s.tau_c;
    const double body = log_trapezoid([&](double w) { return s.noise_power(w); }, lo, hi, kQuadTol * 1e-2, 0.0);
    const double head = s.noise_power(0.0) * lo;
    // int_hi^inf 2D / (w tau)^2 (1 - (w tau)^-2 + ...) dw
    const double x = hi * s.tau_c;
    const double tail = 2.0 * s.D / (s.tau_c * x) * (1.0 - 1.0 / (3.0 * x * x));
    return (head + body + tail) / std::numbers::pi;
}

double tabulated_rate_integral(const TabulatedSpectrum& t, const std::optional<double>& beta) {
    t.validate();
    const std::size_t n = t.omega.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = t.omega[i];
        if (!beta) {
            f[i] = t.J[i];
        } else if (w == 0.0) {
            if (t.J[i] > 0.0) throw NumericalError("infrared-divergent spectral density");
            // J ~ J'(0) w  =>  J coth(beta w / 2) -> 2 J'(0) / beta
            f[i] = 2.0 * (t.J[1] / t.omega[1]) / *beta;
        } else {
            f[i] = t.J[i] / std::tanh(0.5 * *beta * w);
        }
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (f[i] + f[i - 1]) * (t.omega[i] - t.omega[i - 1]);
    if (!std::isfinite(sum)) throw NumericalError("infrared-divergent spectral density");
    return sum;
}

// (1/pi) int_0^inf S(w) cos(w t) dw
double lorentzian_cosine_transform(const LorentzianOU& s, double t) {
    if (s.D == 0.0) return 0.0;
    const double tau = s.tau_c;
    if (t * kHighCut <= 1e-12 * tau) return lorentzian_rate_integral(s);
    const double lo = kLowCut / tau;
    // Start the asymptotic tail far enough out that at least ~10 oscillations
    // have passed, so that the integration-by-parts expansion is accurate.
    const double hi = std::max(kHighCut / tau, 10.0 / t);
    const double body =
        log_trapezoid([&](double w) { return s.noise_power(w) * std::cos(w * t); }, lo, hi, 1e-8, 1e-8 * s.D / tau);
    const double head = s.noise_power(0.0) * std::sin(lo * t) / t;
    // Two terms of int_hi^inf f cos(wt) dw = -f sin(hi t)/t - f' cos(hi t)/t^2 + ...
    const double f = s.noise_power(hi);
    const double x = hi * tau;
    const double fp = -4.0 * s.D * x * tau / ((1.0 + x * x) * (1.0 + x * x));
    const double tail = -f * std::sin(hi * t) / t - fp * std::cos(hi * t) / (t * t);
    return (head + body + tail) / std::numbers::pi;
}

}  // namespace

double gamma_rate(const PhysicalParams& params, const SpectralDensity& spec) {
    params.validate();
    const double integral = std::visit(
        overloaded{
            [](const LorentzianOU& s) { return lorentzian_rate_integral(s); },
            [&](const TabulatedSpectrum& t) { return tabulated_rate_integral(t, params.beta); },
        },
        spec);
    return params.coupling_scale() * integral;
}

std::vector<double> kernel_from_spectrum_roundtrip(const SpectralDensity& spec,
                                                   std::span<const double> dt_grid) {
    const auto* s = std::get_if<LorentzianOU>(&spec);
    if (!s) throw std::invalid_argument("roundtrip needs a LorentzianOU spectrum");
    if (!finite_pos(s->tau_c) || !finite_nonneg(s->D))
        throw std::invalid_argument("LorentzianOU needs D >= 0 and tau_c > 0");
    std::vector<double> out;
    out.reserve(dt_grid.size());
    for (double t : dt_grid) {
        if (!(t >= 0.0)) throw std::domain_error("kernel lag must be >= 0");
        out.push_back(lorentzian_cosine_transform(*s, t));
    }
    return out;
}

TabulatedSpectrum read_tabulated_spectrum(std::istream& in) {
    TabulatedSpectrum t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double w = 0.0;
        double j = 0.0;
        if (!(fields >> w)) {
            if (fields.eof()) continue;  // blank or comment-only line
            throw std::invalid_argument("malformed spectrum line " + std::to_string(lineno));
        }
        std::string extra;
        if (!(fields >> j) || (fields >> extra)) {
            throw std::invalid_argument("malformed spectrum line " + std::to_string(lineno));
        }
        t.omega.push_back(w);
        t.J.push_back(j);
    }
    t.validate();
    return t;
}

TabulatedSpectrum load_tabulated_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spectrum file " + path.string());
    return read_tabulated_spectrum(in);
}

}  // namespace finmem
