#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finmem/analysis.hpp"
#include "finmem/analytic.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace finmem;

namespace {

PhysicalParams unit_with_tau(double tau) {
    PhysicalParams p;
    p.tau_c = tau;
    return p;
}

}  // namespace

TEST_CASE("tegmark_decay") {
    const auto s = tegmark_decay(PhysicalParams{}, 3.0, 0.5);
    REQUIRE(s.size() == 7);
    CHECK(s.values[0] == std::complex<double>(1.0, 0.0));
    CHECK(s.values[2].real() == doctest::Approx(0.367879).epsilon(1e-6));
    CHECK(s.values[4].real() == doctest::Approx(0.135335).epsilon(1e-5));
    CHECK(std::abs(s.values[4].real() - s.values[2].real() * s.values[2].real()) < 1e-15);
    for (const auto& c : s.values) CHECK(c.imag() == 0.0);

    PhysicalParams decoupled;
    decoupled.D = 0.0;
    for (const auto& c : tegmark_decay(decoupled, 2.0, 0.1).values) CHECK(c.real() == 1.0);
    CHECK_THROWS_AS(tegmark_decay(PhysicalParams{}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tegmark_decay(PhysicalParams{}, 0.01, 0.1), std::invalid_argument);
}

TEST_CASE("tegmark_time") {
    PhysicalParams p;
    CHECK(tegmark_time(p) == doctest::Approx(1.0));
    p.a = 2.0;
    CHECK(tegmark_time(p) == doctest::Approx(0.25));
    p = {};
    p.hbar = 2.0;
    CHECK(tegmark_time(p) == doctest::Approx(4.0));
    p.D = 0.0;
    CHECK_THROWS_WITH_AS(tegmark_time(p), "no decoherence", std::domain_error);
}

TEST_CASE("quadratic_law") {
    const auto s = quadratic_law(1.0, 0.5, 0.1);
    CHECK(s.values[1].real() == doctest::Approx(0.99));
    CHECK(s.values[5].real() == doctest::Approx(0.75));
    CHECK(s.label == "quadratic");
    for (const auto& c : quadratic_law(0.0, 3.0, 0.5).values) CHECK(c.real() == 1.0);

    const auto clamped = quadratic_law(1.0, 3.0, 0.5);
    CHECK(clamped.label == "quadratic[clamped]");
    for (const auto& c : clamped.values) CHECK(c.real() >= 0.0);
    CHECK(clamped.values.back().real() == 0.0);
    CHECK_THROWS_AS(quadratic_law(-1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("solve_eq16: regime classification") {
    const auto under = solve_eq16(unit_with_tau(1.0));
    CHECK(under.regime == DampingRegime::Underdamped);
    CHECK(under.omega == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-14));
    CHECK(under.K == doctest::Approx(2.0));

    CHECK(solve_eq16(unit_with_tau(0.125)).regime == DampingRegime::Critical);

    const auto over = solve_eq16(unit_with_tau(0.01));
    CHECK(over.regime == DampingRegime::Overdamped);
    const auto [slow, fast] = oracle::real_roots(100.0, 200.0);
    CHECK(over.rate_slow == doctest::Approx(slow).epsilon(1e-12));
    CHECK(over.rate_slow == doctest::Approx(2.0416847668728053).epsilon(1e-12));
    CHECK(over.rate_fast == doctest::Approx(fast).epsilon(1e-12));
    CHECK(over.rate_fast * over.rate_slow == doctest::Approx(over.K).epsilon(1e-14));
    CHECK(over.rate_fast + over.rate_slow == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(over.rate_fast >= over.rate_slow);

    CHECK_THROWS_WITH_AS(solve_eq16(unit_with_tau(0.0)), "Markovian case; use tegmark_decay", std::invalid_argument);
    PhysicalParams nod;
    nod.D = 0.0;
    CHECK_THROWS_AS(solve_eq16(nod), std::invalid_argument);
}

TEST_CASE("solve_eq16: regime invariants on random parameters") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const double r = testing_support::log_uniform(rng, 1e-3, 1e3);
        const auto p = testing_support::params_with_ratio(rng, r);
        const auto sol = solve_eq16(p);
        if (std::abs(r - 1.0) < 1e-10) continue;
        CHECK((sol.regime == DampingRegime::Underdamped) == (r > 1.0));
        if (sol.regime == DampingRegime::Overdamped) {
            CHECK(sol.rate_fast >= sol.rate_slow);
            CHECK(sol.rate_slow > 0.0);
            CHECK(sol.rate_fast * sol.rate_slow == doctest::Approx(sol.K).epsilon(1e-12));
            CHECK(sol.rate_fast + sol.rate_slow == doctest::Approx(1.0 / p.tau_c).epsilon(1e-12));
        } else {
            CHECK(sol.omega * sol.omega == doctest::Approx(sol.K - 0.25 / (p.tau_c * p.tau_c)).epsilon(1e-10));
        }
    }
}

TEST_CASE("eval_eq16: frozen values and initial data") {
    const auto sol = solve_eq16(unit_with_tau(1.0));
    // scipy DOP853 at rtol 1e-13
    CHECK(sol.coherence(1.0) == doctest::Approx(0.371073551469728).epsilon(1e-12));
    CHECK(sol.coherence(0.1) == doctest::Approx(0.9903411696393694).epsilon(1e-12));
    CHECK(solve_eq16(unit_with_tau(4.0)).coherence(1.5) == doctest::Approx(0.5455472640220207).epsilon(1e-12));
    CHECK(solve_eq16(unit_with_tau(0.01)).coherence(0.3) == doctest::Approx(0.5535280901019389).epsilon(1e-12));

    const auto rk = oracle::rk4_damped_oscillator({1, 1, 1, 1}, 1.0, 1e-4);
    CHECK(std::abs(rk.back() - sol.coherence(1.0)) < 1e-10);

    for (double tau : {0.01, 0.125, 1.0}) {
        const auto s = eval_eq16(solve_eq16(unit_with_tau(tau)), 1.0, 0.01);
        CHECK(s.values[0].real() == 1.0);
        CHECK(solve_eq16(unit_with_tau(tau)).derivative(0.0) == 0.0);
    }
    for (double t : {1e-3, 3e-3, 1e-2}) CHECK(std::abs(sol.coherence(t) - (1.0 - t * t)) <= t * t * t);
}

TEST_CASE("eval_eq16 agrees with an independent RK4 integration in all regimes") {
    for (const auto& p : testing_support::regime_spanning_sets()) {
        const auto sol = solve_eq16(p);
        const double dt = p.tau_c / 1000.0;
        const auto s = eval_eq16(sol, 10.0 * p.tau_c, dt);
        const auto rk = oracle::rk4_damped_oscillator(testing_support::to_units(p), 10.0 * p.tau_c, dt);
        REQUIRE(rk.size() == s.size());
        double err = 0.0;
        for (std::size_t k = 0; k < rk.size(); ++k) err = std::max(err, std::abs(rk[k] - s.values[k].real()));
        CHECK(err <= 1e-6);
    }
}

TEST_CASE("eval_eq16 satisfies the damped-oscillator equation") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const auto p = testing_support::params_with_ratio(rng, testing_support::log_uniform(rng, 1.0, 30.0));
        const auto sol = solve_eq16(p);
        const double h = 1e-3 * std::min(p.tau_c, 1.0 / std::sqrt(sol.K));
        double worst = 0.0;
        for (double t = 2.0 * h; t < 10.0 * p.tau_c; t += 0.37 * p.tau_c) {
            const double f[5] = {sol.coherence(t - 2 * h), sol.coherence(t - h), sol.coherence(t),
                                 sol.coherence(t + h), sol.coherence(t + 2 * h)};
            const double d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
            const double d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
            worst = std::max(worst, std::abs(d2 + d1 / p.tau_c + sol.K * f[2]));
        }
        CHECK(worst <= 1e-8 * sol.K);
    }
}

TEST_CASE("closed-form derivative matches finite differences") {
    for (const auto& p : testing_support::regime_spanning_sets(99)) {
        const auto sol = solve_eq16(p);
        for (double x : {0.1, 0.7, 2.3, 6.0}) {
            const double t = x * p.tau_c;
            const double h = 1e-5 * p.tau_c;
            const double fd = (sol.coherence(t + h) - sol.coherence(t - h)) / (2 * h);
            CHECK(std::abs(fd - sol.derivative(t)) <= 1e-5 * std::max(1.0, sol.K * p.tau_c));
        }
    }
}

TEST_CASE("near-critical solutions are continuous across the regime boundary") {
    for (double eps : {-1e-9, -1e-13, 0.0, 1e-13, 1e-9}) {
        PhysicalParams p;
        p.tau_c = 0.125 * (1.0 + eps);
        const auto sol = solve_eq16(p);
        PhysicalParams crit;
        crit.tau_c = 0.125;
        const auto ref = solve_eq16(crit);
        for (double t : {0.05, 0.3, 1.0, 3.0}) CHECK(sol.coherence(t) == doctest::Approx(ref.coherence(t)).epsilon(1e-6));
    }
}

TEST_CASE("quadratic onset of eval_eq16 matches a^2 D / (hbar^2 tau_c)") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i) {
        const auto p = testing_support::params_with_ratio(rng, testing_support::log_uniform(rng, 0.1, 100.0));
        const double window = 0.01 * std::sqrt(p.hbar * p.hbar * p.tau_c / (p.a * p.a * p.D));
        const auto s = eval_eq16(solve_eq16(p), window, window / 100.0);
        const auto fit = fit_quadratic_coefficient(s, window);
        const double expected = p.coupling_scale() * p.D / p.tau_c;
        CHECK(fit.coefficient == doctest::Approx(expected).epsilon(0.01));
    }
}

TEST_CASE("tau_dec_formula") {
    CHECK(tau_dec_formula(unit_with_tau(4.0)) == doctest::Approx(2.0));
    CHECK(tau_dec_formula(unit_with_tau(1.0)) == doctest::Approx(1.0));
    auto p = unit_with_tau(1.0);
    p.a = 2.0;
    CHECK(tau_dec_formula(p) == doctest::Approx(0.5));
    p.D = 0.0;
    CHECK_THROWS_WITH_AS(tau_dec_formula(p), "no decoherence", std::domain_error);
}

TEST_CASE("dephasing_oracle matches nested quadrature of the kernel") {
    CHECK(dephasing_oracle(unit_with_tau(1.0), 1.0, 1.0).values[1].real() == doctest::Approx(0.2295767771002993).epsilon(1e-12));
    CHECK(dephasing_oracle(unit_with_tau(0.25), 2.0, 2.0).values[1].real() == doctest::Approx(0.0009115761145376761).epsilon(1e-10));
    CHECK(dephasing_oracle(unit_with_tau(4.0), 3.0, 3.0).values[1].real() == doctest::Approx(0.028499610916417863).epsilon(1e-11));

    for (const auto& p : testing_support::regime_spanning_sets(41)) {
        for (double x : {0.2, 1.0, 3.0}) {
            const double t = x * p.tau_c;
            const double direct = std::exp(-dephasing_exponent(p, t));
            const double nested = oracle::dephasing_by_double_integral(testing_support::to_units(p), t);
            CHECK(direct == doctest::Approx(nested).epsilon(1e-8));
        }
    }
}

TEST_CASE("dephasing_oracle: short- and long-time behaviour") {
    const auto p = unit_with_tau(1.0);
    CHECK(dephasing_oracle(p, 1.0, 0.5).values[0].real() == 1.0);
    for (double t : {1e-4, 1e-3, 1e-2}) {
        const double c = std::exp(-dephasing_exponent(p, t));
        CHECK(std::abs(c - (1.0 - 2.0 * t * t)) <= 2.0 * t * t * t);
    }
    for (double t : {20.0, 30.0}) {
        const double c = std::exp(-dephasing_exponent(p, t));
        CHECK(c / std::exp(-4.0 * (t - 1.0)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const auto s = dephasing_oracle(unit_with_tau(0.7), 10.0, 0.01);
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(s.magnitude(k) <= s.magnitude(k - 1));
}

TEST_CASE("underdamped coherence falls below e^-1 before its first revival") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i) {
        const auto p = testing_support::params_with_ratio(rng, testing_support::log_uniform(rng, 1.01, 1e4));
        const auto sol = solve_eq16(p);
        REQUIRE(sol.regime == DampingRegime::Underdamped);
        auto s = eval_eq16(sol, 2.0 * M_PI / sol.omega, 1e-4 * M_PI / sol.omega);
        std::size_t k = 1;
        while (k + 1 < s.size() && !(s.magnitude(k) <= s.magnitude(k - 1) && s.magnitude(k) <= s.magnitude(k + 1))) ++k;
        REQUIRE(k + 1 < s.size());
        CHECK(s.magnitude(k) <= kInverseE);
    }
}

TEST_CASE("memoryless limit of the closed forms") {
    const auto p = unit_with_tau(1e-4);
    const auto sol = solve_eq16(p);
    for (double t = 0.01; t <= 1.0; t += 0.07) {
        CHECK(sol.coherence(t) == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-3));
        CHECK(std::exp(-dephasing_exponent(p, t)) == doctest::Approx(std::exp(-4.0 * t)).epsilon(1e-3));
    }
}

TEST_CASE("coherence magnitudes stay bounded by one") {
    for (const auto& p : testing_support::regime_spanning_sets(3)) {
        for (const auto& s : {eval_eq16(solve_eq16(p), 10 * p.tau_c, p.tau_c / 50), dephasing_oracle(p, 10 * p.tau_c, p.tau_c / 50),
                              tegmark_decay(p, 10 * p.tau_c, p.tau_c / 50)}) {
            for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.magnitude(k) <= 1.0 + 1e-9);
        }
    }
}
