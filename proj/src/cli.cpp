#include "finmem/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "finmem/analytic.hpp"
#include "finmem/csv.hpp"
#include "finmem/errors.hpp"

namespace finmem::cli {

namespace {

std::vector<Method> resolve_methods(const RunConfig& cfg, bool allow_formula) {
    if (cfg.methods.empty()) throw UsageError("at least one --method is required");
    std::vector<Method> out;
    std::set<Method> seen;
    for (const auto& tag : cfg.methods) {
        const auto m = parse_method(tag);
        if (!m || (*m == Method::Formula && !allow_formula)) throw UsageError("invalid method tag: " + tag);
        if (!seen.insert(*m).second) throw UsageError("method given twice: " + tag);
        out.push_back(*m);
    }
    return out;
}

PhysicalParams checked_params(const RunConfig& cfg, double default_tau_c) {
    try {
        auto p = cfg.params(default_tau_c);
        p.validate();
        return p;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Runs f, reporting argument errors raised by the numerical layer as usage errors.
template <class F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const NumericalError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
}

std::string fmt(double x) { return csv::format_number(x); }

}  // namespace

PhysicalParams RunConfig::params(double default_tau_c) const {
    PhysicalParams p;
    p.a = a;
    p.hbar = hbar;
    p.D = D;
    p.tau_c = tau_c.value_or(default_tau_c);
    p.beta = beta;
    return p;
}

BioPreset find_preset(const std::string& name, double multiplier, double custom_low, double custom_high) {
    const BioPreset water{"water", 1e-14, 1e-13, "aqueous cytosol: collision and librational relaxation of water"};
    if (name == "water") return water;
    if (name == "microtubule") {
        if (!(multiplier > 0.0)) throw UsageError("--multiplier must be > 0");
        return {"microtubule", water.tau_c_low * multiplier, water.tau_c_high * multiplier,
                "microtubular environment: water bounds scaled by a user multiplier (assumption)"};
    }
    if (name == "custom") {
        if (!(custom_low > 0.0) || custom_high < custom_low)
            throw UsageError("custom preset needs 0 < --tau-c-min <= --tau-c-max");
        return {"custom", custom_low, custom_high, "user-supplied correlation-time bounds"};
    }
    throw UsageError("unknown preset: " + name);
}

void cmd_decay(const RunConfig& cfg, std::ostream& csv_out, std::ostream& summary) {
    const auto methods = resolve_methods(cfg, false);
    const PhysicalParams params = checked_params(cfg, 1.0);
    as_usage([&] { return grid_intervals(cfg.t_max, cfg.dt); });
    if (!(cfg.fock_cap >= 4)) throw UsageError("--fock-cap must be >= 4");

    std::vector<CoherenceSeries> series;
    for (Method m : methods) {
        series.push_back(as_usage([&] {
            if (m == Method::Quadratic && !cfg.spectrum_path.empty()) {
                const auto table = load_tabulated_spectrum(cfg.spectrum_path);
                return quadratic_law(gamma_rate(params, table), cfg.t_max, cfg.dt);
            }
            return generate_series(m, params, cfg.t_max, cfg.dt, GenerationOptions{cfg.fock_cap, {}});
        }));
    }

    std::vector<std::string> header{"t"};
    for (Method m : methods) {
        const std::string tag(to_string(m));
        header.insert(header.end(), {tag + "_re", tag + "_im", tag + "_abs"});
    }
    csv::Writer w(csv_out);
    w.header(header);
    std::vector<double> row(header.size());
    const std::size_t n = series.front().size();
    for (std::size_t k = 0; k < n; ++k) {
        row[0] = series.front().time(k);
        for (std::size_t j = 0; j < series.size(); ++j) {
            const auto c = series[j].values[k];
            row[1 + 3 * j] = c.real();
            row[2 + 3 * j] = c.imag();
            row[3 + 3 * j] = std::abs(c);
        }
        w.row(row);
    }
    for (std::size_t j = 1; j < series.size(); ++j) {
        double div = 0.0;
        for (std::size_t k = 0; k < n; ++k) div = std::max(div, std::abs(std::abs(series[0].values[k]) - std::abs(series[j].values[k])));
        w.comment("max_abs_divergence " + std::string(to_string(methods[0])) + " " +
                  std::string(to_string(methods[j])) + " = " + fmt(div));
    }
    for (const auto& s : series)
        if (s.label == "quadratic[clamped]") w.comment("quadratic law clamped at zero outside its validity window");

    for (std::size_t j = 0; j < series.size(); ++j) {
        summary << to_string(methods[j]) << ": ";
        try {
            const double t = extract_tau_dec(series[j], cfg.threshold, cfg.interpolate).value;
            summary << "tau_dec = " << fmt(t) << '\n';
        } catch (const HorizonExceeded&) {
            summary << "no threshold crossing within t_max\n";
        }
    }
}

void cmd_sweep(const RunConfig& cfg, std::ostream& csv_out, std::ostream& summary) {
    const auto methods = resolve_methods(cfg, true);
    const PhysicalParams params = checked_params(cfg, 1.0);
    if (cfg.points < 4) throw UsageError("sweep needs --points >= 4");
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) throw UsageError("--threshold must lie in (0, 1)");
    if (!(cfg.fock_cap >= 4)) throw UsageError("--fock-cap must be >= 4");
    const auto grid = as_usage([&] { return log_grid(cfg.tau_c_min, cfg.tau_c_max, cfg.points); });

    SweepOptions opts;
    opts.threshold = cfg.threshold;
    opts.interpolate = cfg.interpolate;
    opts.fock_cap = cfg.fock_cap;
    opts.jobs = cfg.jobs;
    const auto result = as_usage([&] { return sweep(params, grid, methods, opts); });

    std::vector<std::string> header{"tau_c"};
    for (Method m : methods) header.push_back(std::string(to_string(m)) + "_tau_dec");
    csv::Writer w(csv_out);
    w.header(header);
    std::vector<double> row(header.size());
    for (const auto& r : result.rows) {
        row[0] = r.tau_c;
        for (std::size_t j = 0; j < methods.size(); ++j) row[1 + j] = r.times.at(methods[j]).value;
        w.row(row);
    }
    for (Method m : methods) {
        const auto& f = result.fit(m);
        w.comment("method=" + std::string(to_string(m)) + " exponent=" + fmt(f.exponent) +
                  " intercept=" + fmt(f.intercept) + " residual=" + fmt(f.residual));
    }
    for (Method m : methods) summary << to_string(m) << ": exponent=" << fmt(result.fit(m).exponent) << '\n';
}

void cmd_limit(const RunConfig& cfg, std::ostream& csv_out, std::ostream& summary) {
    if (cfg.decades < 2) throw UsageError("limit needs --decades >= 2");
    const PhysicalParams params = checked_params(cfg, 0.1);
    if (!(params.tau_c > 0.0)) throw UsageError("limit needs a starting --tau-c > 0");
    SweepOptions opts;
    opts.threshold = cfg.threshold;
    opts.interpolate = cfg.interpolate;
    const auto study = as_usage([&] { return markov_limit_study(params, params.tau_c, cfg.decades, opts); });

    const std::vector<std::string> header{"tau_c", "tau_dec", "tau_T", "ratio"};
    csv::Writer w(csv_out);
    w.header(header);
    for (const auto& r : study.rows) {
        const std::vector<double> row{r.tau_c, r.tau_dec, r.tau_T, r.ratio};
        w.row(row);
    }
    w.comment("converged_ratio=" + fmt(study.converged_ratio) + " converged=" + (study.converged ? "true" : "false") +
              " last_change=" + fmt(study.last_change) +
              " (memoryless limit of the damped-oscillator law is tau_T/2, not tau_T; see README)");
    summary << "converged ratio tau_dec/tau_T = " << fmt(study.converged_ratio)
            << (study.converged ? " (converged)" : " (NOT converged)") << '\n';
}

void cmd_presets(const RunConfig& cfg, std::ostream& csv_out, std::ostream& summary) {
    const BioPreset preset = find_preset(cfg.preset, cfg.multiplier, cfg.tau_c_min, cfg.tau_c_max);
    double tau_T = 0.0;
    if (cfg.tau_T) {
        if (!(*cfg.tau_T > 0.0)) throw UsageError("--tau-T must be > 0");
        tau_T = *cfg.tau_T;
    } else {
        tau_T = as_usage([&] { return tegmark_time(checked_params(cfg, 1.0)); });
    }

    const std::vector<std::string> header{"tau_c", "tau_T", "tau_dec", "enhancement"};
    csv::Writer w(csv_out);
    w.header(header);
    summary << "preset " << preset.name << ": " << preset.description << '\n';
    if (preset.name == "microtubule")
        summary << "assumption: microtubule tau_c = " << fmt(cfg.multiplier) << " x water bounds\n";
    summary << "tau_T = " << fmt(tau_T) << " s" << (cfg.tau_T ? "" : " (from a, hbar, D)") << '\n';
    summary << std::left << std::setw(26) << "tau_c [s]" << std::setw(26) << "tau_dec [s]" << "tau_dec/tau_T\n";
    for (double tau_c : {preset.tau_c_low, preset.tau_c_high}) {
        // sqrt(hbar^2 tau_c / (a^2 D)) == sqrt(tau_T tau_c)
        const double tau_dec = std::sqrt(tau_T * tau_c);
        const double enhancement = std::sqrt(tau_c / tau_T);
        const std::vector<double> row{tau_c, tau_T, tau_dec, enhancement};
        w.row(row);
        summary << std::setw(26) << fmt(tau_c) << std::setw(26) << fmt(tau_dec) << fmt(enhancement) << '\n';
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    CLI::App app{"Finite-memory decoherence toolkit"};
    app.set_config("--config", "", "flat key = value settings file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    app.add_option("--out", cfg.out, "CSV output path (default: standard output)");
    app.add_option("--jobs", cfg.jobs, "worker threads for sweeps");
    app.add_option("--method", cfg.methods, "tegmark, quadratic, eq16, nmqsd, pseudomode, oracle (sweep: also formula)");
    app.add_option("--a", cfg.a, "pointer-state separation");
    app.add_option("--hbar", cfg.hbar, "action scale");
    app.add_option("--D", cfg.D, "noise strength");
    app.add_option("--tau-c", cfg.tau_c, "bath correlation time (limit: starting value)");
    app.add_option("--beta", cfg.beta, "inverse temperature for tabulated spectra");
    app.add_option("--spectrum", cfg.spectrum_path, "tabulated J(w) file for the quadratic method");
    app.add_option("--t-max", cfg.t_max, "time horizon");
    app.add_option("--dt", cfg.dt, "time step");
    app.add_option("--tau-c-min", cfg.tau_c_min, "sweep lower bound");
    app.add_option("--tau-c-max", cfg.tau_c_max, "sweep upper bound");
    app.add_option("--points", cfg.points, "sweep point count");
    app.add_option("--decades", cfg.decades, "Markov-limit decades");
    app.add_option("--threshold", cfg.threshold, "coherence threshold for tau_dec");
    app.add_flag("--interpolate,!--grid-point", cfg.interpolate, "interpolate the threshold crossing (default) or report the first grid point");
    app.add_option("--fock-cap", cfg.fock_cap, "largest pseudomode Fock dimension");
    app.add_option("--tau-T", cfg.tau_T, "presets: Markovian decoherence time in seconds");
    app.add_option("--multiplier", cfg.multiplier, "presets: microtubule tau_c over water (assumption)");

    auto* decay = app.add_subcommand("decay", "coherence decay curves");
    auto* sweep_cmd = app.add_subcommand("sweep", "tau_dec versus tau_c with power-law fit");
    auto* limit = app.add_subcommand("limit", "Markovian-limit table");
    auto* presets = app.add_subcommand("presets", "biological parameter presets");
    presets->add_option("name", cfg.preset, "water, microtubule or custom")->required();
    for (auto* sub : {decay, sweep_cmd, limit, presets}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

    try {
        std::ofstream file;
        std::ostringstream buffer;
        std::ostream* summary = &err;
        std::ostream* csv_out = &out;
        if (!cfg.out.empty()) {
            csv_out = &buffer;
            summary = &out;
        }
        if (cfg.command == "decay") cmd_decay(cfg, *csv_out, *summary);
        else if (cfg.command == "sweep") cmd_sweep(cfg, *csv_out, *summary);
        else if (cfg.command == "limit") cmd_limit(cfg, *csv_out, *summary);
        else cmd_presets(cfg, *csv_out, *summary);
        if (!cfg.out.empty()) {
            file.open(cfg.out, std::ios::binary | std::ios::trunc);
            if (!file) throw UsageError("cannot write " + cfg.out);
            file << buffer.str();
            if (!file) throw UsageError("cannot write " + cfg.out);
        }
        return kExitOk;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace finmem::cli
