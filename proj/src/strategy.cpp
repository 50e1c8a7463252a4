#include "prospect/strategy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace prospect {

using detail::rpow;

namespace {

// Geometric grid of n factors spanning [lo, hi], centered so the middle
// entry is exactly 1 when lo*hi = 1.
std::vector<double> geometric_factors(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = std::sqrt(lo * hi);
        return out;
    }
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo * std::exp(step * static_cast<double>(i));
    }
    out[n / 2] = std::sqrt(lo * hi);
    return out;
}

}  // namespace

StrategyValue evaluate_strategy_exact(double p, const TradingStrategy& strategy,
                                      const ModelInputs& inputs,
                                      const ExitSolution& exit) {
    if (!(p > 0.0)) {
        throw std::domain_error("evaluate_strategy_exact: p must be positive");
    }
    const double beta = inputs.market.beta;
    if (!(beta > 0.0)) {
        throw std::invalid_argument("evaluate_strategy_exact: requires beta > 0");
    }
    const auto& prefs = inputs.prefs;
    const auto& costs = inputs.costs;

    StrategyValue result{};
    result.breakdown.u_never_buy = utility(-prefs.R, prefs);

    if (strategy.buy.kind == BuyRule::Kind::Never) {
        result.breakdown.p_never_buy = 1.0;
        result.expected_utility = result.breakdown.u_never_buy;
        return result;
    }

    double buy_price = p;
    double p_buy = 1.0;
    switch (strategy.buy.kind) {
        case BuyRule::Kind::Immediate:
            break;
        case BuyRule::Kind::UpCross:
            if (!(strategy.buy.level >= p)) {
                throw std::invalid_argument(
                    "evaluate_strategy_exact: up-cross level below start price");
            }
            buy_price = strategy.buy.level;
            p_buy = hitting_probability(p, buy_price, beta);
            break;
        case BuyRule::Kind::DownCross:
            if (!(strategy.buy.level <= p) || !(strategy.buy.level > 0.0)) {
                throw std::invalid_argument(
                    "evaluate_strategy_exact: down-cross level above start price");
            }
            buy_price = strategy.buy.level;
            p_buy = 1.0;  // downward passage is certain for beta > 0
            break;
        case BuyRule::Kind::Never:
            break;
    }

    const double excess = strategy.sale_excess.value_or(exit.c_minus_one);
    if (!(excess > 0.0)) {
        throw std::invalid_argument(
            "evaluate_strategy_exact: sale multiple must exceed 1");
    }
    const double H = costs.lambda * buy_price + costs.psi + prefs.R;
    const double sale_level = (1.0 + excess) * H / costs.gamma;
    const double p_sell = hitting_probability(buy_price, sale_level, beta);

    auto& b = result.breakdown;
    b.p_never_buy = 1.0 - p_buy;
    b.p_buy_never_sell = p_buy * (1.0 - p_sell);
    b.p_round_trip = p_buy * p_sell;
    b.u_buy_never_sell = utility(-H, prefs);
    // gamma*sale_level - H = excess * H exactly
    b.u_round_trip = utility(excess * H, prefs);
    result.expected_utility = b.p_never_buy * b.u_never_buy +
                              b.p_buy_never_sell * b.u_buy_never_sell +
                              b.p_round_trip * b.u_round_trip;
    return result;
}

TradingStrategy optimal_strategy(double p, const EntrySolution& solution) {
    if (!(p > 0.0)) {
        throw std::domain_error("optimal_strategy: p must be positive");
    }
    switch (solution.regime.tag) {
        case RegimeTag::IllPosed:
            throw std::invalid_argument("optimal_strategy: ill-posed solution");
        case RegimeTag::NoTrade:
            return {BuyRule::never(), std::nullopt};
        case RegimeTag::OneSided: {
            const double p1 = *solution.regime.p1_star;
            if (p >= p1) return {BuyRule::immediate(), std::nullopt};
            return {BuyRule::up_cross(p1), std::nullopt};
        }
        case RegimeTag::Interval: {
            const double p1 = *solution.regime.p1_star;
            const double p2 = *solution.regime.p2_star;
            if (p < p1) return {BuyRule::up_cross(p1), std::nullopt};
            if (p > p2) return {BuyRule::down_cross(p2), std::nullopt};
            return {BuyRule::immediate(), std::nullopt};
        }
    }
    throw std::logic_error("optimal_strategy: unreachable");
}

DominanceReport perturbation_dominance_check(double p,
                                             const EntrySolution& solution,
                                             std::span<const double> buy_levels,
                                             std::span<const double> sale_excesses) {
    const double v2 = entry_value(p, solution);
    DominanceReport report{-std::numeric_limits<double>::infinity(), 0.0, 0.0, 0};
    for (double level : buy_levels) {
        TradingStrategy s{};
        if (level > p) {
            s.buy = BuyRule::up_cross(level);
        } else if (level < p) {
            s.buy = BuyRule::down_cross(level);
        } else {
            s.buy = BuyRule::immediate();
        }
        for (double excess : sale_excesses) {
            s.sale_excess = excess;
            const double value =
                evaluate_strategy_exact(p, s, solution.inputs, solution.exit)
                    .expected_utility;
            ++report.n_checked;
            if (value - v2 > report.max_violation) {
                report.max_violation = value - v2;
                report.worst_buy_level = level;
                report.worst_sale_multiple = 1.0 + excess;
            }
        }
    }
    return report;
}

DominanceReport perturbation_dominance_check(double p,
                                             const EntrySolution& solution,
                                             std::size_t n) {
    const TradingStrategy best = optimal_strategy(p, solution);
    const double anchor = best.buy.kind == BuyRule::Kind::Immediate
                              ? p
                              : best.buy.kind == BuyRule::Kind::Never
                                    ? p
                                    : best.buy.level;
    std::vector<double> levels = geometric_factors(0.5, 2.0, n);
    for (double& l : levels) l *= anchor;
    if (best.buy.kind != BuyRule::Kind::Never) levels[n / 2] = anchor;

    // Perturb the sale multiple through c - 1 so every candidate stays > 1.
    const double u = solution.exit.c_minus_one;
    std::vector<double> excesses = geometric_factors(0.5, 2.0, n);
    for (double& e : excesses) e = u * e;
    excesses[n / 2] = u;

    return perturbation_dominance_check(p, solution, levels, excesses);
}

}  // namespace prospect
