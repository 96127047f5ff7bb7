// analysis.hpp: decoherence-time extraction, tau_c sweeps and power-law fits

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finmem/model.hpp"
#include "finmem/pseudomode.hpp"
#include "finmem/series.hpp"

namespace finmem {

inline constexpr double kInverseE = 0.36787944117144233;  // e^-1

enum class Method { Tegmark, Quadratic, Eq16, Nmqsd, Pseudomode, Oracle, Formula };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view tag) noexcept;

// Methods that produce a coherence trajectory (everything except Formula).
bool has_series(Method m) noexcept;

struct DecoherenceTime {
    double value{0.0};
    std::string method;
    bool interpolated{true};
    double threshold{kInverseE};
};

// First grid index with |C_k| <= threshold * |C_0|. With interpolate, |C| is
// linearly interpolated between k-1 and k; otherwise t_k is returned.
// Throws NumericalError("horizon exceeded; extend t_max") without a crossing.
DecoherenceTime extract_tau_dec(const CoherenceSeries& series, double threshold = kInverseE,
                                bool interpolate = true);

// Receives the conservation diagnostics of every pseudomode evolution. May be
// called concurrently from sweep workers.
using ConservationObserver = std::function<void(const PhysicalParams&, const ConservationReport&)>;

struct GenerationOptions {
    int fock_cap{256};
    ConservationObserver observer;
};

// Coherence series of one method on [0, t_max] with step dt. Pseudomode runs
// adapt the Fock truncation first.
CoherenceSeries generate_series(Method m, const PhysicalParams& params, double t_max, double dt,
                                const GenerationOptions& opts = {});

struct PowerLawFit {
    double exponent{0.0};
    double intercept{0.0};
    double residual{0.0};  // RMS of the log-log fit
};

// Unweighted least squares of log y = exponent log x + intercept.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

// Log-spaced grid with both end points included.
std::vector<double> log_grid(double lo, double hi, int points);

struct SweepOptions {
    double threshold{kInverseE};
    bool interpolate{true};
    int fock_cap{256};
    int jobs{1};
    ConservationObserver observer;
};

struct SweepRow {
    double tau_c{0.0};
    std::map<Method, DecoherenceTime> times;
};

struct SweepResult {
    std::vector<Method> methods;
    std::vector<SweepRow> rows;
    std::map<Method, PowerLawFit> fits;

    const PowerLawFit& fit(Method m) const { return fits.at(m); }
};

// Horizon and step used for one sweep point. The horizon starts at
// 2 * max(tau_dec_formula, tau_T) and is doubled up to 20 * that scale until
// the threshold is crossed.
struct SweepGrid {
    double dt;
    double initial_horizon;
    double max_horizon;
};

SweepGrid sweep_grid(const PhysicalParams& params);

DecoherenceTime sweep_point(Method m, const PhysicalParams& params, const SweepOptions& opts);

// Requires a strictly increasing grid with at least 4 points. Points run on
// opts.jobs workers; rows come back ordered by tau_c. Extraction failures
// abort with a NumericalError naming (tau_c, method).
SweepResult sweep(const PhysicalParams& params_base, std::span<const double> tau_c_grid,
                  std::span<const Method> methods, const SweepOptions& opts = {});

struct MarkovLimitRow {
    double tau_c;
    double tau_dec;
    double tau_T;
    double ratio;
};

struct MarkovLimitStudy {
    std::vector<MarkovLimitRow> rows;
    bool converged{false};     // last successive relative change of the ratio < 1%
    double converged_ratio{0.0};
    double last_change{0.0};
};

// tau_dec of the damped-oscillator law on tau_c = tau_c_start * 10^-j,
// j = 0..decades. Requires decades >= 2.
MarkovLimitStudy markov_limit_study(const PhysicalParams& params_base, double tau_c_start,
                                    int decades, const SweepOptions& opts = {});

struct QuadraticFit {
    double coefficient{0.0};
    double residual{0.0};  // RMS residual relative to max(1 - |C|) in the window
    bool poor_fit{false};  // residual above 5%: the onset is not quadratic
};

// Least squares of 1 - |C(t)| = c t^2 over [0, window]. Requires >= 10
// non-zero samples in the window (std::invalid_argument "insufficient samples
// in quadratic window") and |1 - |C|| < 0.02 throughout (std::invalid_argument).
QuadraticFit fit_quadratic_coefficient(const CoherenceSeries& series, double window);

}  // namespace finmem
