#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "prospect/entry.hpp"

namespace prospect {

/// A sampled payoff on an ascending scaled-coordinate grid.
struct GridFunction {
    std::vector<double> thetas;  // strictly increasing, finite
    std::vector<double> values;

    GridFunction(std::vector<double> thetas, std::vector<double> values);
};

struct MajorantResult {
    std::vector<double> hull_values;        // smallest concave majorant at each theta
    std::vector<std::uint8_t> contact_mask; // 1 where hull meets payoff within tolerance
};

/// Smallest concave majorant of the sampled points: the upper convex hull
/// (monotone chain) interpolated back onto the grid. Idempotent; hull >=
/// payoff pointwise; discretely concave. contact_tol is absolute.
MajorantResult concave_majorant(const GridFunction& gf, double contact_tol);
MajorantResult concave_majorant(const GridFunction& gf);

/// Grid policy for the oracle reconstructions: n log-spaced prices from
/// scale*p_min_factor up to scale*theta_max_multiplier^(1/beta), mapped to
/// theta = p^beta, with theta = 0 prepended as the chord anchor.
struct OracleGrid {
    std::size_t n = 100000;
    double theta_max_multiplier = 1000.0;  // relative to the reference threshold^beta
    double p_min_factor = 1e-6;
};

/// Exit value rebuilt from scratch: hull of the raw sale payoff
/// U(gamma*theta^(1/beta) - H) on [0, theta_max], interpolated at p^beta.
/// theta_max covers 100x the sale trigger unless the grid says otherwise.
double oracle_exit_value(double p, double H, const ModelInputs& inputs,
                         const ExitSolution& exit, const OracleGrid& grid = {});

/// Entry value rebuilt from the hull of g2 = max{v1, U(-R)}. The right tail
/// of a finite-domain hull is a chord rather than the infinite-domain flat
/// line, so comparisons should stay within theta <= 2*(p2*)^beta (Interval)
/// or theta <= theta_max/10 (OneSided); the discrepancy decays like
/// theta2*/theta_max.
double oracle_entry_value(double p, const EntrySolution& solution,
                          const OracleGrid& grid = {});

struct OracleBoundaries {
    bool no_trade;
    std::optional<double> p1;
    std::optional<double> p2;        // absent when the contact set is right-unbounded
    double grid_cell_at_p1 = 0.0;    // local price-grid spacing, for bracketing checks
    double grid_cell_at_p2 = 0.0;
};

/// Purchase region extracted from the hull's contact set (contacts on the
/// inaction branch and the theta = 0 anchor do not count). Empty contact set
/// signals NoTrade.
OracleBoundaries oracle_boundaries(const EntrySolution& solution,
                                   const OracleGrid& grid = {});

}  // namespace prospect
