#include <cmath>

#include "doctest.h"
#include "prospect/sweep.hpp"

using namespace prospect;

namespace {

ModelInputs compstat_base() {
    return {Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
            TransactionCosts(1.05, 0.95, 5.0)};
}

}  // namespace

TEST_SUITE_BEGIN("sweeps");

TEST_CASE("gamma sweep: boundaries move the documented way") {
    SweepResult sweep =
        run_sweep(SweepParameter::Gamma, 0.55, 1.0, 200, compstat_base());
    CHECK(sweep.records.size() == 200);
    MonotonicityVerdict p1 = check_monotonicity(sweep, "p1_star", -1);
    CHECK(p1.holds);  // cheaper sales lower the entry bar
    CHECK(p1.max_violation <= 1e-9);
    MonotonicityVerdict p2 = check_monotonicity(sweep, "p2_star", +1);
    CHECK(p2.holds);
}

TEST_CASE("psi sweep: both boundaries rise with the entry fee") {
    SweepResult sweep = run_sweep(SweepParameter::Psi, 0.0, 10.0, 200, compstat_base());
    CHECK(check_monotonicity(sweep, "p1_star", +1).holds);
    CHECK(check_monotonicity(sweep, "p2_star", +1).holds);
    // psi = 0 pins the lower boundary at zero
    REQUIRE(sweep.records.front().p1_star.has_value());
    CHECK(*sweep.records.front().p1_star == 0.0);
}

TEST_CASE("lambda sweep: the upper boundary falls") {
    SweepResult sweep =
        run_sweep(SweepParameter::Lambda, 1.0, 1.6, 200, compstat_base());
    CHECK(check_monotonicity(sweep, "p2_star", -1).holds);
}

TEST_CASE("regime transitions are bracketed and consistent") {
    SweepResult sweep =
        run_sweep(SweepParameter::Gamma, 0.55, 1.0, 120, compstat_base());
    REQUIRE(!sweep.transitions.empty());
    const ExitSolution exit = solve_c(compstat_base().prefs, 0.85);
    for (const auto& tr : sweep.transitions) {
        const double eps = 2e-6;
        const auto below = classify_regime(
            with_parameter(compstat_base(), SweepParameter::Gamma, tr.location - eps),
            exit);
        const auto above = classify_regime(
            with_parameter(compstat_base(), SweepParameter::Gamma, tr.location + eps),
            exit);
        CHECK(below.tag == tr.below);
        CHECK(above.tag == tr.above);
    }
}

TEST_CASE("aspiration sweep: low R drives the agent out of the market") {
    ModelInputs base{Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
                     TransactionCosts(1.1, 0.9, 1.0)};
    SweepResult sweep = run_sweep(SweepParameter::AspirationR, 0.1, 3.0, 100, base);
    CHECK(sweep.records.front().regime == RegimeTag::NoTrade);
    CHECK(sweep.records.back().regime == RegimeTag::Interval);
    REQUIRE(sweep.transitions.size() == 1);
    // psi < C R flips exactly at R = psi / C
    const ExitSolution exit = solve_c(base.prefs, 0.85);
    const double flip = base.costs.psi / no_trade_constant(base, exit);
    CHECK(sweep.transitions.front().location == doctest::Approx(flip).epsilon(1e-4));
}

TEST_CASE("a rising entry fee can pull the agent into the market and out again") {
    // at a fixed price the purchase region slides upward with psi: the agent
    // waits, then buys, then waits again
    ModelInputs base{Preferences(0.5, 2.25, 1.0), MarketDynamics::from_beta(0.85),
                     TransactionCosts(1.05, 0.95, 0.0)};
    const double price = 100.0;
    const ExitSolution exit = solve_c(base.prefs, 0.85);
    auto buys = [&](double psi) {
        const EntryRegime r =
            classify_regime(with_parameter(base, SweepParameter::Psi, psi), exit);
        return r.p1_star && price >= *r.p1_star &&
               (!r.p2_star || price <= *r.p2_star);
    };
    CHECK_FALSE(buys(0.0));  // price sits above the purchase band
    CHECK(buys(4.0));        // the band has climbed up to the price
    CHECK_FALSE(buys(8.0));  // and past it
}

TEST_CASE("invalid ranges are rejected") {
    CHECK_THROWS(run_sweep(SweepParameter::Gamma, 0.5, 1.5, 10, compstat_base()));
    CHECK_THROWS(run_sweep(SweepParameter::Lambda, 0.5, 1.2, 10, compstat_base()));
    CHECK_THROWS(run_sweep(SweepParameter::Gamma, 0.9, 0.6, 10, compstat_base()));
}

TEST_CASE("records round-trip through CSV exactly") {
    SweepResult sweep =
        run_sweep(SweepParameter::Gamma, 0.55, 1.0, 60, compstat_base());
    const std::string csv = sweep_records_csv(sweep);
    const auto parsed = parse_sweep_records_csv(csv);
    REQUIRE(parsed.size() == sweep.records.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i].value == sweep.records[i].value);
        CHECK(parsed[i].regime == sweep.records[i].regime);
        CHECK(parsed[i].p1_star == sweep.records[i].p1_star);
        CHECK(parsed[i].p2_star == sweep.records[i].p2_star);
        CHECK(parsed[i].no_trade_constant == sweep.records[i].no_trade_constant);
        CHECK(parsed[i].c == sweep.records[i].c);
        CHECK(parsed[i].critical_xi == sweep.records[i].critical_xi);
    }
}

TEST_CASE("parameter names parse back") {
    for (auto p : {SweepParameter::Lambda, SweepParameter::Gamma, SweepParameter::Psi,
                   SweepParameter::AspirationR}) {
        CHECK(parse_sweep_parameter(to_string(p)) == p);
    }
    CHECK_FALSE(parse_sweep_parameter("sigma").has_value());
}

TEST_SUITE_END();
