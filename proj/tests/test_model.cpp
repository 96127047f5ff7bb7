#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "finmem/errors.hpp"
#include "finmem/model.hpp"
#include "oracles.hpp"

using namespace finmem;

TEST_CASE("eval_kernel: OU and general exponential values") {
    CHECK(eval_kernel(ExponentialOU{1.0, 2.0}, 0.0) == doctest::Approx(0.5));
    CHECK(eval_kernel(ExponentialOU{1.0, 1.0}, 0.0) == doctest::Approx(1.0));
    CHECK(eval_kernel(GeneralExponential{0.5, 0.5}, 0.0) == doctest::Approx(0.5));
    for (double dt : {0.0, 0.3, 1.0, 4.0, 17.0}) {
        CHECK(eval_kernel(GeneralExponential{0.5, 0.5}, dt) == doctest::Approx(eval_kernel(ExponentialOU{1.0, 2.0}, dt)).epsilon(1e-14));
    }
}

TEST_CASE("eval_kernel: errors") {
    CHECK_THROWS_WITH_AS(eval_kernel(MarkovianDelta{1.0}, 0.0), "kernel has no pointwise value", std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(ExponentialOU{1.0, 1.0}, -1e-3), std::domain_error);
    CHECK_THROWS_AS(eval_kernel(ExponentialOU{1.0, 0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(GeneralExponential{-1.0, 1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("eval_kernel is non-negative and non-increasing in the lag") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 100; ++i) {
        const BathKernel k = (i % 2) ? BathKernel{ExponentialOU{u(rng), u(rng)}} : BathKernel{GeneralExponential{u(rng), u(rng)}};
        double prev = eval_kernel(k, 0.0);
        for (double dt = 0.05; dt < 30.0; dt *= 1.3) {
            const double v = eval_kernel(k, dt);
            CHECK(v >= 0.0);
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("normalize maps the general exponential onto the OU form") {
    const auto n = std::get<ExponentialOU>(normalize(GeneralExponential{2.0, 4.0}));
    CHECK(n.D == doctest::Approx(0.5));
    CHECK(n.tau_c == doctest::Approx(0.25));
    const auto id = std::get<ExponentialOU>(normalize(ExponentialOU{1.0, 1.0}));
    CHECK(id.D == 1.0);
    CHECK(id.tau_c == 1.0);
    const auto unit = std::get<ExponentialOU>(normalize(GeneralExponential{1.0, 1.0}));
    CHECK(unit.D == doctest::Approx(1.0));
    CHECK(unit.tau_c == doctest::Approx(1.0));
    CHECK(std::holds_alternative<MarkovianDelta>(normalize(MarkovianDelta{3.0})));
}

TEST_CASE("normalize is idempotent and preserves the kernel pointwise") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 20.0);
    for (int i = 0; i < 100; ++i) {
        const GeneralExponential ge{u(rng), u(rng)};
        const double dt = u(rng) / ge.gamma;
        const auto once = normalize(ge);
        const auto twice = normalize(once);
        CHECK(std::get<ExponentialOU>(twice).D == std::get<ExponentialOU>(once).D);
        CHECK(std::get<ExponentialOU>(twice).tau_c == std::get<ExponentialOU>(once).tau_c);
        const double before = eval_kernel(ge, dt);
        const double after = eval_kernel(once, dt);
        CHECK(std::abs(after - before) <= 1e-12 * std::abs(before));
    }
}

TEST_CASE("integrated_strength") {
    CHECK(integrated_strength(ExponentialOU{3.0, 7.0}) == doctest::Approx(6.0));
    CHECK(integrated_strength(MarkovianDelta{3.0}) == doctest::Approx(6.0));
    CHECK(integrated_strength(ExponentialOU{0.0, 1.0}) == 0.0);
    CHECK(integrated_strength(GeneralExponential{2.0, 4.0}) == doctest::Approx(1.0));
    SUBCASE("independent of tau_c across six decades") {
        for (double tau = 1e-3; tau <= 1e3; tau *= 10.0)
            CHECK(integrated_strength(ExponentialOU{2.5, tau}) == doctest::Approx(5.0).epsilon(1e-15));
    }
    SUBCASE("matches a numerical integral of the two-sided kernel") {
        const ExponentialOU k{1.7, 0.6};
        const double half = oracle::simpson([&](double x) { return eval_kernel(k, x); }, 0.0, 40.0 * k.tau_c, 20000);
        CHECK(2.0 * half == doctest::Approx(integrated_strength(k)).epsilon(1e-9));
    }
}

TEST_CASE("gamma_rate on the Lorentzian spectrum") {
    PhysicalParams unit;
    CHECK(gamma_rate(unit, LorentzianOU{1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(gamma_rate(unit, LorentzianOU{1.0, 2.0}) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(gamma_rate(unit, LorentzianOU{0.0, 1.0}) == 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lg(std::log(1e-2), std::log(1e2));
    for (int i = 0; i < 20; ++i) {
        PhysicalParams p;
        p.a = std::exp(lg(rng));
        p.hbar = std::exp(lg(rng));
        const LorentzianOU s{std::exp(lg(rng)), std::exp(lg(rng))};
        const double expected = p.coupling_scale() * s.D / s.tau_c;
        CHECK(std::abs(gamma_rate(p, s) / expected - 1.0) <= 1e-6);
        // independent QUADPACK integral of the same spectrum
        const double quadpack = p.coupling_scale() * oracle::fourier_kernel(s.D, s.tau_c, 0.0);
        CHECK(std::abs(gamma_rate(p, s) / quadpack - 1.0) <= 1e-6);
    }
}

TEST_CASE("gamma_rate on tabulated spectra") {
    // Ohmic J = w e^{-w}: int_0^inf J dw = 1; int_0^inf J coth(beta w/2) dw by the oracle rule.
    TabulatedSpectrum t;
    for (int i = 0; i <= 4000; ++i) {
        const double w = 0.01 * i;
        t.omega.push_back(w);
        t.J.push_back(w * std::exp(-w));
    }
    PhysicalParams p;
    CHECK(gamma_rate(p, t) == doctest::Approx(1.0).epsilon(1e-4));

    p.beta = 2.0;
    auto f = [](double w) { return w == 0.0 ? 2.0 / 2.0 : w * std::exp(-w) / std::tanh(w); };
    const double expected = oracle::simpson(f, 0.0, 40.0, 40000);
    CHECK(gamma_rate(p, t) == doctest::Approx(expected).epsilon(1e-4));

    p.a = 2.0;
    CHECK(gamma_rate(p, t) == doctest::Approx(4.0 * expected).epsilon(1e-4));
}

TEST_CASE("gamma_rate: infrared divergence and invalid tables") {
    TabulatedSpectrum flat{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
    PhysicalParams p;
    CHECK_NOTHROW(gamma_rate(p, flat));  // zero temperature
    p.beta = 1.0;
    CHECK_THROWS_WITH_AS(gamma_rate(p, flat), "infrared-divergent spectral density", NumericalError);
    TabulatedSpectrum unsorted{{0.0, 2.0, 1.0}, {0.0, 1.0, 1.0}};
    CHECK_THROWS_AS(gamma_rate(p, unsorted), std::invalid_argument);
    TabulatedSpectrum negative{{0.0, 1.0}, {0.0, -1.0}};
    CHECK_THROWS_AS(gamma_rate(p, negative), std::invalid_argument);
}

TEST_CASE("read_tabulated_spectrum") {
    std::istringstream in("# w J\n0 0\n\n0.5 0.25   # inline\n1.0\t0.5\n");
    const auto t = read_tabulated_spectrum(in);
    REQUIRE(t.omega.size() == 3);
    CHECK(t.omega[1] == 0.5);
    CHECK(t.J[2] == 0.5);

    std::istringstream bad("0 0\n1 x\n");
    CHECK_THROWS_AS(read_tabulated_spectrum(bad), std::invalid_argument);
    std::istringstream extra("0 0 1\n");
    CHECK_THROWS_AS(read_tabulated_spectrum(extra), std::invalid_argument);
    CHECK_THROWS_AS(load_tabulated_spectrum("/nonexistent/spectrum.txt"), std::invalid_argument);
}

TEST_CASE("kernel_from_spectrum_roundtrip reproduces the OU kernel") {
    const std::vector<double> grid{0.0, 1.0};
    const auto unit = kernel_from_spectrum_roundtrip(LorentzianOU{1.0, 1.0}, grid);
    CHECK(std::abs(unit[0] - 1.0) <= 1e-4);
    CHECK(std::abs(unit[1] - std::exp(-1.0)) <= 1e-4);

    const auto zero = kernel_from_spectrum_roundtrip(LorentzianOU{0.0, 1.0}, grid);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);

    for (double tau : {0.1, 1.0, 7.0}) {
        const LorentzianOU s{1.3, tau};
        std::vector<double> lags;
        for (double x : {0.0, 0.01, 0.2, 1.0, 2.5, 6.0}) lags.push_back(x * tau);
        const auto back = kernel_from_spectrum_roundtrip(s, lags);
        for (std::size_t i = 0; i < lags.size(); ++i) {
            const double direct = eval_kernel(ExponentialOU{s.D, tau}, lags[i]);
            CHECK(std::abs(back[i] - direct) <= 1e-4 * s.D / tau);
            CHECK(std::abs(back[i] - oracle::fourier_kernel(s.D, tau, lags[i])) <= 1e-4 * s.D / tau);
        }
    }
}

TEST_CASE("kernel_from_spectrum_roundtrip rejects tabulated input and negative lags") {
    const std::vector<double> grid{0.0};
    CHECK_THROWS_AS(kernel_from_spectrum_roundtrip(TabulatedSpectrum{{0.0, 1.0}, {0.0, 1.0}}, grid), std::invalid_argument);
    const std::vector<double> neg{-1.0};
    CHECK_THROWS_AS(kernel_from_spectrum_roundtrip(LorentzianOU{1.0, 1.0}, neg), std::domain_error);
}

TEST_CASE("PhysicalParams invariants") {
    PhysicalParams p;
    CHECK_NOTHROW(p.validate());
    p.tau_c = 0.0;
    CHECK_NOTHROW(p.validate());
    p.a = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.D = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.hbar = std::nan("");
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
