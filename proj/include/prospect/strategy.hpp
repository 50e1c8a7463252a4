#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "prospect/entry.hpp"

namespace prospect {

/// Threshold purchase rule. The sale side is always a gain-exit: sell on
/// first passage to m*(lambda*b + psi + R)/gamma where b is the purchase
/// price and m the sale multiple (the solved gain-exit multiple c unless
/// overridden for perturbation analysis). The override is stored as the
/// excess m - 1: the excess can sit far below the resolution of m itself
/// (c - 1 underflows double representation of c when alpha is near 1).
struct BuyRule {
    enum class Kind { Immediate, UpCross, DownCross, Never };
    Kind kind = Kind::Never;
    double level = 0.0;  // crossing level for UpCross/DownCross

    static BuyRule immediate() { return {Kind::Immediate, 0.0}; }
    static BuyRule up_cross(double level) { return {Kind::UpCross, level}; }
    static BuyRule down_cross(double level) { return {Kind::DownCross, level}; }
    static BuyRule never() { return {Kind::Never, 0.0}; }
};

struct TradingStrategy {
    BuyRule buy;
    std::optional<double> sale_excess;  // m - 1; nullopt: solved c - 1
};

/// Probabilities and conditional utilities of the three terminal outcomes:
/// the purchase never executes, the purchase executes but the sale never
/// does, or the full round trip completes.
struct OutcomeBreakdown {
    double p_never_buy = 0.0;
    double p_buy_never_sell = 0.0;
    double p_round_trip = 0.0;
    double u_never_buy = 0.0;
    double u_buy_never_sell = 0.0;
    double u_round_trip = 0.0;
};

struct StrategyValue {
    double expected_utility;
    OutcomeBreakdown breakdown;
};

/// Exact expected utility of a threshold strategy from start price p, via
/// first-passage probabilities (requires beta > 0). Throws on a direction
/// mismatch: an up-cross level below p or a down-cross level above p.
StrategyValue evaluate_strategy_exact(double p, const TradingStrategy& strategy,
                                      const ModelInputs& inputs,
                                      const ExitSolution& exit);

/// The solver's optimal rule as seen from start price p: buy immediately
/// inside the purchase region, wait for its near edge outside, never buy in
/// the NoTrade regime.
TradingStrategy optimal_strategy(double p, const EntrySolution& solution);

struct DominanceReport {
    double max_violation;  // max over the grid of value - V2(p)
    double worst_buy_level;
    double worst_sale_multiple;
    std::size_t n_checked;
};

/// Evaluates every (buy level, sale excess) pair on the given grids as an
/// exact threshold strategy from p and reports the largest advantage over
/// the entry value V2(p). Optimality of the solved rule means the advantage
/// never exceeds numerical noise.
DominanceReport perturbation_dominance_check(double p,
                                             const EntrySolution& solution,
                                             std::span<const double> buy_levels,
                                             std::span<const double> sale_excesses);

/// Default grid: n x n multiplicative perturbations (factors 0.5..2 around
/// the optimal buy level, same factors applied to c - 1 for the multiple).
DominanceReport perturbation_dominance_check(double p,
                                             const EntrySolution& solution,
                                             std::size_t n = 21);

}  // namespace prospect
