#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "prospect/majorant.hpp"

using namespace prospect;

namespace {

ModelInputs base_inputs(double lambda, double gamma, double psi) {
    return {Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
            TransactionCosts(lambda, gamma, psi)};
}

}  // namespace

TEST_SUITE_BEGIN("majorant_oracle");

TEST_CASE("a concave payoff is its own majorant") {
    std::vector<double> thetas;
    std::vector<double> values;
    for (double t = 0.0; t <= 4.0; t += 0.01) {
        thetas.push_back(t);
        values.push_back(std::sqrt(t));
    }
    GridFunction gf(thetas, values);
    MajorantResult hull = concave_majorant(gf);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(hull.hull_values[i] == doctest::Approx(values[i]).epsilon(1e-12));
        CHECK(hull.contact_mask[i] == 1);
    }
}

TEST_CASE("a convex payoff hulls to the endpoint chord") {
    std::vector<double> thetas;
    std::vector<double> values;
    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.02) {
        thetas.push_back(t);
        values.push_back(t * t);
    }
    GridFunction gf(thetas, values);
    MajorantResult hull = concave_majorant(gf);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(hull.hull_values[i] == doctest::Approx(thetas[i]).epsilon(1e-12));
    }
    CHECK(hull.contact_mask.front() == 1);
    CHECK(hull.contact_mask.back() == 1);
    CHECK(hull.contact_mask[thetas.size() / 2] == 0);
}

TEST_CASE("tent with a dip") {
    GridFunction gf({0.0, 1.0, 2.0}, {0.0, -1.0, 1.0});
    MajorantResult hull = concave_majorant(gf);
    CHECK(hull.hull_values[1] == doctest::Approx(0.5));
    CHECK(hull.contact_mask[1] == 0);
}

TEST_CASE("hull is idempotent, dominating and discretely concave") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> vs(-2.0, 2.0);
    std::vector<double> thetas;
    std::vector<double> values;
    for (int i = 0; i < 400; ++i) {
        thetas.push_back(0.05 * i);
        values.push_back(vs(gen));
    }
    GridFunction gf(thetas, values);
    MajorantResult hull = concave_majorant(gf);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(hull.hull_values[i] >= values[i]);
    }
    for (std::size_t i = 1; i + 1 < thetas.size(); ++i) {
        const double left =
            (hull.hull_values[i] - hull.hull_values[i - 1]) / (thetas[i] - thetas[i - 1]);
        const double right =
            (hull.hull_values[i + 1] - hull.hull_values[i]) / (thetas[i + 1] - thetas[i]);
        CHECK(left >= right - 1e-9);
    }
    GridFunction again(thetas, hull.hull_values);
    MajorantResult twice = concave_majorant(again);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        CHECK(twice.hull_values[i] == doctest::Approx(hull.hull_values[i]).epsilon(1e-12));
    }
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS(concave_majorant(GridFunction({1.0}, {2.0})));
    CHECK_THROWS(GridFunction({1.0, 1.0}, {2.0, 3.0}));
    CHECK_THROWS(GridFunction({1.0, 2.0}, {2.0}));
}

TEST_CASE("exit oracle matches the closed form across the price axis") {
    ModelInputs in = base_inputs(1.1, 0.9, 1.0);
    ExitSolution exit = solve_c(in.prefs, 0.85);
    const double H = 3.0;
    const double trigger = sale_threshold(exit.c, H, 0.9);
    OracleGrid grid;  // policy defaults
    // far above the trigger the hull rides the payoff itself
    const double p_high = 5.0 * trigger;
    CHECK(oracle_exit_value(p_high, H, in, exit, grid) ==
          doctest::Approx(std::pow(0.9 * p_high - H, 0.5)).epsilon(1e-9));
    // near the origin the chord drops to the never-sold utility
    CHECK(oracle_exit_value(trigger * 1e-6, H, in, exit, grid) ==
          doctest::Approx(-2.25 * std::sqrt(H)).epsilon(1e-4));
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> ps(0.02, 3.0);
    for (int i = 0; i < 12; ++i) {
        const double p = ps(gen) * trigger;
        const double closed = exit_value(p, H, in, exit);
        CHECK(oracle_exit_value(p, H, in, exit, grid) ==
              doctest::Approx(closed).epsilon(1e-3));
    }
}

TEST_CASE("entry oracle matches the closed form in every regime") {
    OracleGrid grid;
    SUBCASE("one-sided") {
        EntrySolution sol = solve_entry(base_inputs(1.01, 0.99, 1.0));
        const double p1 = *sol.regime.p1_star;
        for (double f : {0.05, 0.3, 0.8, 1.0, 1.7, 3.0}) {
            const double p = f * p1;
            CHECK(oracle_entry_value(p, sol, grid) ==
                  doctest::Approx(entry_value(p, sol)).epsilon(1e-3));
        }
    }
    SUBCASE("interval") {
        EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 1.0));
        const double p2 = *sol.regime.p2_star;
        for (double f : {0.02, 0.2, 0.5, 0.9, 1.1, 1.6, 1.9}) {
            const double p = f * p2;
            CHECK(oracle_entry_value(p, sol, grid) ==
                  doctest::Approx(entry_value(p, sol)).epsilon(1e-3));
        }
    }
    SUBCASE("no-trade flat line") {
        EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 2.5));
        for (double p : {0.1, 1.0, 10.0, 300.0}) {
            CHECK(oracle_entry_value(p, sol, grid) ==
                  doctest::Approx(-2.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle boundaries bracket the solver's") {
    SUBCASE("one-sided: a right-unbounded purchase ray") {
        EntrySolution sol = solve_entry(base_inputs(1.01, 0.99, 1.0));
        OracleBoundaries ob = oracle_boundaries(sol);
        REQUIRE_FALSE(ob.no_trade);
        REQUIRE(ob.p1.has_value());
        CHECK_FALSE(ob.p2.has_value());
        CHECK(std::fabs(*ob.p1 - *sol.regime.p1_star) <= ob.grid_cell_at_p1);
    }
    SUBCASE("interval: both ends recovered") {
        EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 1.0));
        OracleGrid grid;
        grid.theta_max_multiplier = 1e4;  // keeps the right-chord shift under a cell
        OracleBoundaries ob = oracle_boundaries(sol, grid);
        REQUIRE_FALSE(ob.no_trade);
        REQUIRE(ob.p1.has_value());
        REQUIRE(ob.p2.has_value());
        CHECK(std::fabs(*ob.p1 - *sol.regime.p1_star) <= ob.grid_cell_at_p1);
        CHECK(std::fabs(*ob.p2 - *sol.regime.p2_star) <= ob.grid_cell_at_p2);
    }
    SUBCASE("no-trade: empty contact set") {
        EntrySolution sol = solve_entry(base_inputs(1.1, 0.9, 2.5));
        OracleBoundaries ob = oracle_boundaries(sol);
        CHECK(ob.no_trade);
    }
}

TEST_SUITE_END();
