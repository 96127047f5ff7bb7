// cli.hpp: the finmem command-line front end
//
// Exit codes: 0 success, 2 argument/config error, 3 numerical failure.

#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "finmem/analysis.hpp"
#include "finmem/model.hpp"

namespace finmem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Resolved settings. Precedence: built-in defaults < --config file < flags.
struct RunConfig {
    std::string command;
    std::vector<std::string> methods;

    double a{1.0};
    double hbar{1.0};
    double D{1.0};
    std::optional<double> tau_c;  // decay default 1, limit default 0.1
    std::optional<double> beta;
    std::string spectrum_path;    // tabulated J(w) for the quadratic method

    double t_max{5.0};
    double dt{0.01};
    double tau_c_min{10.0};
    double tau_c_max{1000.0};
    int points{8};
    int decades{4};
    double threshold{kInverseE};
    bool interpolate{true};
    int fock_cap{256};

    std::string out;
    int jobs{1};

    // presets
    std::string preset;
    std::optional<double> tau_T;  // seconds
    double multiplier{1e3};

    PhysicalParams params(double default_tau_c) const;
};

struct BioPreset {
    std::string name;
    double tau_c_low;   // seconds
    double tau_c_high;  // seconds
    std::string description;
};

// water, microtubule (water scaled by multiplier), custom (the given bounds).
BioPreset find_preset(const std::string& name, double multiplier, double custom_low, double custom_high);

// Each command writes CSV to `csv` and a human-readable summary to `summary`.
// Argument problems throw UsageError; numerical failures throw NumericalError.
void cmd_decay(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);
void cmd_sweep(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);
void cmd_limit(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);
void cmd_presets(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);

// Parses argv, dispatches and maps failures onto exit codes. Without --out the
// CSV goes to `out` and the summary to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finmem::cli
