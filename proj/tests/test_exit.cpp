#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "prospect/exit.hpp"

using namespace prospect;

namespace {

// Independent root finder for the gain-exit equation, written straight from
// the equation with std::pow and plain bisection in c.
double oracle_c(double alpha, double beta, double k) {
    auto F = [&](double c) {
        return (alpha / beta) * c * std::pow(c - 1.0, alpha - 1.0) -
               std::pow(c - 1.0, alpha) - k;
    };
    double lo = 1.0 + 1e-9;
    REQUIRE(F(lo) > 0.0);
    double hi = 2.0;
    while (F(hi) > 0.0) hi *= 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("exit_solver");

TEST_CASE("alpha = beta collapses to the analytic multiple") {
    // equation reduces to (c-1)^(alpha-1) = k
    ExitSolution s = solve_c(Preferences(0.5, 2.25, 1.0), 0.5);
    CHECK(s.c == doctest::Approx(1.1975308641975309).epsilon(1e-12));
    ExitSolution s4 = solve_c(Preferences(0.5, 4.0, 1.0), 0.5);
    CHECK(s4.c == doctest::Approx(1.0625).epsilon(1e-12));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> as(0.1, 0.9);
    std::uniform_real_distribution<double> ks(1.0 + 1e-6, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double alpha = as(gen);
        const double k = ks(gen);
        const double expected = 1.0 + std::pow(k, 1.0 / (alpha - 1.0));
        ExitSolution sol = solve_c(Preferences(alpha, k, 1.0), alpha);
        CHECK(std::fabs(sol.c - expected) <= 1e-10);
    }
}

TEST_CASE("solver agrees with an independent bisection oracle") {
    ExitSolution s = solve_c(Preferences(0.5, 2.25, 1.0), 0.85);
    CHECK(s.c == doctest::Approx(oracle_c(0.5, 0.85, 2.25)).epsilon(1e-12));
    CHECK(s.c == doctest::Approx(1.0625).epsilon(1e-13));  // exact at these inputs
    CHECK(s.c > 1.0);
    CHECK(s.c_minus_one == doctest::Approx(s.c - 1.0).epsilon(1e-12));
    CHECK(s.residual <= 1e-12);
}

TEST_CASE("the multiple ignores every cost and aspiration parameter") {
    ExitSolution a = solve_c(Preferences(0.6, 3.0, 1.0), 0.9);
    ExitSolution b = solve_c(Preferences(0.6, 3.0, 123.0), 0.9);
    CHECK(a.c == b.c);
}

TEST_CASE("ill-posed inputs are rejected") {
    CHECK_THROWS_AS(solve_c(Preferences(0.5, 2.25, 1.0), 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_c(Preferences(0.5, 2.25, 1.0), -0.5),
                    std::invalid_argument);
}

TEST_CASE("sale threshold") {
    CHECK(sale_threshold(1.2, 10.0, 1.0) == doctest::Approx(12.0));
    CHECK(sale_threshold(1.2, 10.0, 0.9) == doctest::Approx(13.0 + 1.0 / 3.0));
    double prev = sale_threshold(1.2, 10.0, 0.05);
    for (double g = 0.1; g <= 1.0; g += 0.05) {
        const double t = sale_threshold(1.2, 10.0, g);
        CHECK(t < prev);  // cheaper sales trigger earlier
        prev = t;
    }
    CHECK_THROWS_AS(sale_threshold(0.9, 10.0, 1.0), std::invalid_argument);
}

TEST_CASE("exit value branches agree at the trigger and at the tails") {
    ModelInputs inputs{Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
                       TransactionCosts(1.1, 0.9, 1.0)};
    ExitSolution exit = solve_c(inputs.prefs, 0.85);
    const double H = 10.0;
    const double trigger = sale_threshold(exit.c, H, 0.9);

    const double seam = std::pow(H, 0.5) * std::pow(exit.c - 1.0, 0.5);
    CHECK(exit_value(trigger, H, inputs, exit) ==
          doctest::Approx(seam).epsilon(1e-12));
    CHECK(exit_value(trigger * (1.0 - 1e-9), H, inputs, exit) ==
          doctest::Approx(seam).epsilon(1e-6));

    // p -> 0+: the chord drops to the never-sold utility U(-H)
    CHECK(exit_value(1e-300, H, inputs, exit) ==
          doctest::Approx(-2.25 * std::sqrt(H)).epsilon(1e-9));

    const double p = 2.0 * trigger;
    CHECK(exit_value(p, H, inputs, exit) ==
          doctest::Approx(std::pow(0.9 * p - H, 0.5)).epsilon(1e-14));
}

TEST_CASE("exit value majorizes the sale payoff and is monotone") {
    ModelInputs inputs{Preferences(0.6, 2.0, 1.0), MarketDynamics::from_beta(0.8),
                       TransactionCosts(1.05, 0.95, 0.5)};
    ExitSolution exit = solve_c(inputs.prefs, 0.8);
    const double H = 3.0;
    double prev = -1e300;
    for (double p = 1e-3; p < 1e3; p *= 1.04) {
        const double v = exit_value(p, H, inputs, exit);
        CHECK(v >= utility(inputs.costs.gamma * p - H, inputs.prefs) - 1e-12);
        CHECK(v >= utility(-H, inputs.prefs) - 1e-12);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("exit value is affine in scaled coordinates below the trigger") {
    ModelInputs inputs{Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
                       TransactionCosts(1.0, 1.0, 0.0)};
    ExitSolution exit = solve_c(inputs.prefs, 0.85);
    const double H = 2.0;
    const double trigger = sale_threshold(exit.c, H, 1.0);
    const double t1 = std::pow(0.1 * trigger, 0.85);
    const double t2 = std::pow(0.4 * trigger, 0.85);
    const double t3 = std::pow(0.8 * trigger, 0.85);
    const double v1 = exit_value(0.1 * trigger, H, inputs, exit);
    const double v2 = exit_value(0.4 * trigger, H, inputs, exit);
    const double v3 = exit_value(0.8 * trigger, H, inputs, exit);
    const double interp = v1 + (v3 - v1) * (t2 - t1) / (t3 - t1);
    CHECK(v2 == doctest::Approx(interp).epsilon(1e-12));
}

TEST_CASE("exit value inherits the utility's homogeneity") {
    ModelInputs inputs{Preferences(0.7, 2.5, 1.0), MarketDynamics::from_beta(0.9),
                       TransactionCosts(1.2, 0.8, 2.0)};
    ExitSolution exit = solve_c(inputs.prefs, 0.9);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ps(0.1, 50.0);
    std::uniform_real_distribution<double> asr(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double p = ps(gen);
        const double H = ps(gen);
        const double a = asr(gen);
        CHECK(exit_value(a * p, a * H, inputs, exit) ==
              doctest::Approx(std::pow(a, 0.7) * exit_value(p, H, inputs, exit))
                  .epsilon(1e-11));
    }
}

TEST_SUITE_END();
