#include <cmath>

#include "doctest.h"
#include "prospect/simulate.hpp"

using namespace prospect;

namespace {

ModelInputs base_inputs(double lambda, double gamma, double psi) {
    return {Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
            TransactionCosts(lambda, gamma, psi)};
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("first passage probabilities: limits and closed form") {
    // driftless log price (beta = 0): reflection gives P = 2 Phi(-a / (s sqrt(t)))
    const double p = 1.0;
    const double b = std::exp(1.0);
    const double reflected = 2.0 * 0.5 * std::erfc(0.5 / std::sqrt(2.0));
    CHECK(first_passage_up_probability(p, b, 0.5, 1.0, 4.0) ==
          doctest::Approx(reflected).epsilon(1e-12));

    // long-horizon limit matches the perpetual hitting probability
    const double mu = 0.075;  // beta = 0.85 at unit volatility
    CHECK(first_passage_up_probability(1.0, 2.0, mu, 1.0, 1e8) ==
          doctest::Approx(hitting_probability(1.0, 2.0, 0.85)).epsilon(1e-6));
    CHECK(first_passage_down_probability(2.0, 1.0, mu, 1.0, 1e8) ==
          doctest::Approx(1.0).epsilon(1e-6));

    // monotone in the horizon
    double prev = 0.0;
    for (double t = 0.5; t < 300.0; t *= 2.0) {
        const double q = first_passage_up_probability(1.0, 2.0, mu, 1.0, t);
        CHECK(q >= prev);
        CHECK(q <= 1.0);
        prev = q;
    }
    CHECK(first_passage_up_probability(2.0, 1.0, mu, 1.0, 1.0) == 1.0);
}

TEST_CASE("never buying simulates to the exact constant") {
    ModelInputs in = base_inputs(1.1, 0.9, 2.5);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    McEstimate est =
        simulate_strategy_mc(3.0, {BuyRule::never(), {}}, in, exit, 10.0, 1000, 7);
    CHECK(est.mean == -2.25);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("fixed seeds reproduce bit-identical estimates") {
    ModelInputs in = base_inputs(1.1, 0.9, 1.0);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    TradingStrategy s{BuyRule::up_cross(4.83), {}};
    McEstimate a = simulate_strategy_mc(2.4, s, in, exit, 20.0, 5000, 99, 4, 512);
    McEstimate b = simulate_strategy_mc(2.4, s, in, exit, 20.0, 5000, 99, 4, 512);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    // streams are keyed by path, not by worker: worker count cannot matter
    McEstimate c = simulate_strategy_mc(2.4, s, in, exit, 20.0, 5000, 99, 1, 512);
    CHECK(a.mean == c.mean);
    McEstimate d = simulate_strategy_mc(2.4, s, in, exit, 20.0, 5000, 100, 4, 512);
    CHECK(a.mean != d.mean);
}

TEST_CASE("estimate agrees with the exact valuation at the interval scenario") {
    EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 1.0));
    const double p = 0.5 * *sol.regime.p1_star;
    TradingStrategy best = optimal_strategy(p, sol);
    const double exact =
        evaluate_strategy_exact(p, best, sol.inputs, sol.exit).expected_utility;
    McEstimate est = simulate_strategy_mc(p, best, sol.inputs, sol.exit, 150.0,
                                          20000, 2024);
    CHECK(est.residual_mass < 0.002);
    const double z = (est.mean - exact) / est.std_error;
    CHECK(std::fabs(z) <= 3.0);
}

TEST_CASE("buying on a downward crossing is certain under positive beta") {
    EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 1.0));
    const double p2 = *sol.regime.p2_star;
    const double p = 2.0 * p2;
    TradingStrategy best = optimal_strategy(p, sol);
    REQUIRE(best.buy.kind == BuyRule::Kind::DownCross);
    const double exact =
        evaluate_strategy_exact(p, best, sol.inputs, sol.exit).expected_utility;
    McEstimate est = simulate_strategy_mc(p, best, sol.inputs, sol.exit, 150.0,
                                          20000, 515);
    CHECK(est.fraction_bought > 0.99);
    const double z = (est.mean - exact) / est.std_error;
    CHECK(std::fabs(z) <= 3.0);
}

TEST_CASE("a crossing level equal to the start price fires immediately") {
    ModelInputs in = base_inputs(1.1, 0.9, 1.0);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    const double p = 6.0;
    TradingStrategy s{BuyRule::down_cross(p), {}};
    McEstimate est = simulate_strategy_mc(p, s, in, exit, 120.0, 20000, 77);
    CHECK(est.fraction_bought == 1.0);
    const double exact =
        evaluate_strategy_exact(p, s, in, exit).expected_utility;
    CHECK(std::fabs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("standard error shrinks like the square root of the path count") {
    ModelInputs in = base_inputs(1.1, 0.9, 1.0);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    TradingStrategy s{BuyRule::immediate(), {}};
    McEstimate small = simulate_strategy_mc(5.0, s, in, exit, 60.0, 10000, 1, 4, 1024);
    McEstimate big = simulate_strategy_mc(5.0, s, in, exit, 60.0, 40000, 1, 4, 1024);
    CHECK(small.std_error / big.std_error == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("invalid arguments are rejected") {
    ModelInputs in = base_inputs(1.1, 0.9, 1.0);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    TradingStrategy s{BuyRule::immediate(), {}};
    CHECK_THROWS(simulate_strategy_mc(1.0, s, in, exit, -1.0, 100, 1));
    CHECK_THROWS(simulate_strategy_mc(1.0, s, in, exit, 10.0, 0, 1));
    ModelInputs flat{in.prefs, MarketDynamics::from_beta(0.0), in.costs};
    CHECK_THROWS(simulate_strategy_mc(1.0, s, flat, exit, 10.0, 100, 1));
}

TEST_SUITE_END();
