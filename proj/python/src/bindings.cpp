#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finmem/analysis.hpp"
#include "finmem/analytic.hpp"
#include "finmem/errors.hpp"
#include "finmem/nmqsd.hpp"
#include "finmem/pseudomode.hpp"

namespace py = pybind11;
using namespace finmem;

namespace {

Method method_from(const std::string& tag) {
    const auto m = parse_method(tag);
    if (!m) throw std::invalid_argument("invalid method tag: " + tag);
    return *m;
}

py::array_t<std::complex<double>> values_of(const CoherenceSeries& s) {
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(s.size()));
    std::copy(s.values.begin(), s.values.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coherence decay of a two-state system in an exponentially correlated bath";

    auto& numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<HorizonExceeded>(m, "HorizonExceeded", numerical.ptr());

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init([](double a, double hbar, double D, double tau_c, std::optional<double> beta) {
                 PhysicalParams p{a, hbar, D, tau_c, beta};
                 p.validate();
                 return p;
             }),
             py::arg("a") = 1.0, py::arg("hbar") = 1.0, py::arg("D") = 1.0, py::arg("tau_c") = 1.0,
             py::arg("beta") = py::none())
        .def_readwrite("a", &PhysicalParams::a)
        .def_readwrite("hbar", &PhysicalParams::hbar)
        .def_readwrite("D", &PhysicalParams::D)
        .def_readwrite("tau_c", &PhysicalParams::tau_c)
        .def_readwrite("beta", &PhysicalParams::beta)
        .def("__repr__", [](const PhysicalParams& p) {
            return "PhysicalParams(a=" + std::to_string(p.a) + ", hbar=" + std::to_string(p.hbar) +
                   ", D=" + std::to_string(p.D) + ", tau_c=" + std::to_string(p.tau_c) + ")";
        });

    py::class_<CoherenceSeries>(m, "CoherenceSeries")
        .def_readonly("dt", &CoherenceSeries::dt)
        .def_readonly("label", &CoherenceSeries::label)
        .def_property_readonly("values", &values_of)
        .def_property_readonly("times", [](const CoherenceSeries& s) {
            py::array_t<double> t(static_cast<py::ssize_t>(s.size()));
            auto* d = t.mutable_data();
            for (std::size_t k = 0; k < s.size(); ++k) d[k] = s.time(k);
            return t;
        })
        .def("__len__", &CoherenceSeries::size);

    py::class_<DecoherenceTime>(m, "DecoherenceTime")
        .def_readonly("value", &DecoherenceTime::value)
        .def_readonly("method", &DecoherenceTime::method)
        .def_readonly("interpolated", &DecoherenceTime::interpolated)
        .def_readonly("threshold", &DecoherenceTime::threshold);

    m.attr("INVERSE_E") = kInverseE;

    m.def("tegmark_time", &tegmark_time, py::arg("params"));
    m.def("tau_dec_formula", &tau_dec_formula, py::arg("params"));
    m.def("gamma_rate",
          [](const PhysicalParams& p) { return gamma_rate(p, LorentzianOU{p.D, p.tau_c}); },
          py::arg("params"), "Short-time rate of the Lorentzian OU spectrum");

    m.def("tegmark_decay", &tegmark_decay, py::arg("params"), py::arg("t_max"), py::arg("dt"));
    m.def("eval_eq16",
          [](const PhysicalParams& p, double t_max, double dt) { return eval_eq16(solve_eq16(p), t_max, dt); },
          py::arg("params"), py::arg("t_max"), py::arg("dt"));
    m.def("damping_regime", [](const PhysicalParams& p) { return std::string(to_string(solve_eq16(p).regime)); },
          py::arg("params"));
    m.def("dephasing_oracle", &dephasing_oracle, py::arg("params"), py::arg("t_max"), py::arg("dt"));
    m.def("integrate_volterra", &integrate_volterra, py::arg("params"), py::arg("t_max"), py::arg("dt"));
    m.def(
        "evolve",
        [](const PhysicalParams& p, double t_max, double dt, int fock_cap) {
            py::gil_scoped_release release;
            TruncationOptions to;
            to.max_dim = fock_cap;
            return evolve(adapt_truncation(build_pseudomode(p, to.start_dim), t_max, to), t_max, dt);
        },
        py::arg("params"), py::arg("t_max"), py::arg("dt"), py::arg("fock_cap") = 256,
        "Pseudomode evolution with automatic Fock truncation");

    m.def("extract_tau_dec", &extract_tau_dec, py::arg("series"), py::arg("threshold") = kInverseE,
          py::arg("interpolate") = true);

    m.def(
        "sweep",
        [](const PhysicalParams& base, const std::vector<double>& grid, const std::vector<std::string>& tags,
           double threshold, bool interpolate, int jobs) {
            std::vector<Method> methods;
            for (const auto& t : tags) methods.push_back(method_from(t));
            SweepOptions opts;
            opts.threshold = threshold;
            opts.interpolate = interpolate;
            opts.jobs = jobs;
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = sweep(base, grid, methods, opts);
            }
            py::dict out;
            out["tau_c"] = grid;
            for (Method m : methods) {
                std::vector<double> times;
                for (const auto& row : r.rows) times.push_back(row.times.at(m).value);
                const auto& fit = r.fit(m);
                py::dict entry;
                entry["tau_dec"] = times;
                entry["exponent"] = fit.exponent;
                entry["intercept"] = fit.intercept;
                entry["residual"] = fit.residual;
                out[py::str(std::string(to_string(m)))] = entry;
            }
            return out;
        },
        py::arg("params"), py::arg("tau_c_grid"), py::arg("methods"), py::arg("threshold") = kInverseE,
        py::arg("interpolate") = true, py::arg("jobs") = 1);

    m.def(
        "markov_limit_study",
        [](const PhysicalParams& base, double tau_c_start, int decades) {
            const auto s = markov_limit_study(base, tau_c_start, decades);
            py::list rows;
            for (const auto& r : s.rows) rows.append(py::make_tuple(r.tau_c, r.tau_dec, r.tau_T, r.ratio));
            py::dict out;
            out["rows"] = rows;
            out["converged"] = s.converged;
            out["converged_ratio"] = s.converged_ratio;
            out["last_change"] = s.last_change;
            return out;
        },
        py::arg("params"), py::arg("tau_c_start") = 0.1, py::arg("decades") = 4);

    m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("points"));
}
