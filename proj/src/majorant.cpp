#include "prospect/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prospect {

using detail::rpow;

GridFunction::GridFunction(std::vector<double> thetas_, std::vector<double> values_)
    : thetas(std::move(thetas_)), values(std::move(values_)) {
    if (thetas.size() != values.size()) {
        throw std::invalid_argument("GridFunction: length mismatch");
    }
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!std::isfinite(thetas[i]) || !std::isfinite(values[i])) {
            throw std::invalid_argument("GridFunction: non-finite entry");
        }
        if (i > 0 && !(thetas[i] > thetas[i - 1])) {
            throw std::invalid_argument("GridFunction: thetas must be strictly increasing");
        }
    }
}

MajorantResult concave_majorant(const GridFunction& gf, double contact_tol) {
    const std::size_t n = gf.thetas.size();
    if (n < 2) {
        throw std::invalid_argument("concave_majorant: need at least two points");
    }
    const auto& t = gf.thetas;
    const auto& v = gf.values;

    // Upper hull, monotone chain: keep only right turns going left to right.
    std::vector<std::size_t> hull;
    hull.reserve(64);
    for (std::size_t i = 0; i < n; ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull[hull.size() - 1];
            const double cross = (t[b] - t[a]) * (v[i] - v[a]) -
                                 (v[b] - v[a]) * (t[i] - t[a]);
            if (cross >= 0.0) {
                hull.pop_back();  // b lies on or below chord a->i
            } else {
                break;
            }
        }
        hull.push_back(i);
    }

    MajorantResult result;
    result.hull_values.resize(n);
    result.contact_mask.resize(n);
    for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        const std::size_t a = hull[seg];
        const std::size_t b = hull[seg + 1];
        const double slope = (v[b] - v[a]) / (t[b] - t[a]);
        for (std::size_t i = a; i < b; ++i) {
            result.hull_values[i] = v[a] + slope * (t[i] - t[a]);
        }
    }
    result.hull_values[n - 1] = v[n - 1];
    for (std::size_t i = 0; i < n; ++i) {
        // hull vertices touch exactly; clamp stray rounding below the payoff
        if (result.hull_values[i] < v[i]) result.hull_values[i] = v[i];
        result.contact_mask[i] = result.hull_values[i] - v[i] <= contact_tol ? 1 : 0;
    }
    return result;
}

MajorantResult concave_majorant(const GridFunction& gf) {
    const auto [lo, hi] = std::minmax_element(gf.values.begin(), gf.values.end());
    const double range = gf.values.empty() ? 0.0 : *hi - *lo;
    return concave_majorant(gf, 1e-10 * range + 1e-300);
}

namespace {

// Log-spaced prices [p_lo, p_hi] mapped to theta = p^beta, with the origin
// prepended: the chord of the majorant is anchored at (0, payoff(0)).
template <typename Payoff>
GridFunction build_grid(double p_lo, double p_hi, double beta, std::size_t n,
                        double value_at_zero, Payoff&& payoff) {
    if (n < 8) throw std::invalid_argument("oracle grid: too few points");
    std::vector<double> thetas;
    std::vector<double> values;
    thetas.reserve(n + 1);
    values.reserve(n + 1);
    thetas.push_back(0.0);
    values.push_back(value_at_zero);
    const double step = std::log(p_hi / p_lo) / static_cast<double>(n - 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = p_lo * std::exp(step * static_cast<double>(i));
        const double theta = rpow(p, beta);
        if (!(theta > prev)) continue;  // drop duplicates from rounding
        prev = theta;
        thetas.push_back(theta);
        values.push_back(payoff(p));
    }
    return GridFunction(std::move(thetas), std::move(values));
}

double interpolate_hull(const GridFunction& gf, const MajorantResult& hull,
                        double theta) {
    const auto& t = gf.thetas;
    if (theta < t.front() || theta > t.back()) {
        throw std::runtime_error("oracle grid does not cover the query point");
    }
    const auto it = std::lower_bound(t.begin(), t.end(), theta);
    const std::size_t j = static_cast<std::size_t>(it - t.begin());
    if (t[j] == theta) return hull.hull_values[j];
    const std::size_t i = j - 1;
    const double w = (theta - t[i]) / (t[j] - t[i]);
    return hull.hull_values[i] + w * (hull.hull_values[j] - hull.hull_values[i]);
}

double entry_reference_scale(const EntrySolution& solution) {
    const auto& regime = solution.regime;
    const auto& inputs = solution.inputs;
    const double anchor =
        (inputs.prefs.R + inputs.costs.psi) / inputs.costs.gamma;
    if (regime.p2_star) return *regime.p2_star;
    if (regime.x2_star) {
        return anchor * rpow(*regime.x2_star, 1.0 / inputs.market.beta);
    }
    if (regime.p1_star && *regime.p1_star > 0.0) return *regime.p1_star;
    return anchor;
}

}  // namespace

double oracle_exit_value(double p, double H, const ModelInputs& inputs,
                         const ExitSolution& exit, const OracleGrid& grid) {
    if (!(inputs.market.beta > 0.0)) {
        throw std::invalid_argument("oracle_exit_value: requires beta > 0");
    }
    if (!(p > 0.0) || !(H > 0.0)) {
        throw std::domain_error("oracle_exit_value: p and H must be positive");
    }
    const double beta = inputs.market.beta;
    const double gamma = inputs.costs.gamma;
    const double trigger = sale_threshold(exit.c, H, gamma);
    const double mult = grid.theta_max_multiplier > 0.0 ? grid.theta_max_multiplier
                                                        : 100.0;
    const double p_lo = std::min(grid.p_min_factor * trigger, 0.5 * p);
    const double p_hi = std::max(rpow(mult, 1.0 / beta) * trigger, 2.0 * p);
    const auto& prefs = inputs.prefs;
    GridFunction gf = build_grid(p_lo, p_hi, beta, grid.n, utility(-H, prefs),
                                 [&](double price) {
                                     return utility(gamma * price - H, prefs);
                                 });
    const MajorantResult hull = concave_majorant(gf);
    return interpolate_hull(gf, hull, rpow(p, beta));
}

double oracle_entry_value(double p, const EntrySolution& solution,
                          const OracleGrid& grid) {
    const auto& inputs = solution.inputs;
    const double beta = inputs.market.beta;
    if (!(beta > 0.0) || solution.regime.tag == RegimeTag::IllPosed) {
        throw std::invalid_argument("oracle_entry_value: requires a well-posed solution");
    }
    if (!(p > 0.0)) throw std::domain_error("oracle_entry_value: p must be positive");
    const double scale_p = entry_reference_scale(solution);
    const double mult = grid.theta_max_multiplier > 0.0 ? grid.theta_max_multiplier
                                                        : 1000.0;
    const double p_lo = std::min(grid.p_min_factor * scale_p, 0.5 * p);
    const double p_hi = std::max(rpow(mult, 1.0 / beta) * scale_p, 2.0 * p);
    const double inaction =
        utility(-inputs.prefs.R, inputs.prefs);
    GridFunction gf = build_grid(
        p_lo, p_hi, beta, grid.n, inaction, [&](double price) {
            return std::max(
                exit_conditional_value(price, inputs, solution.exit), inaction);
        });
    const MajorantResult hull = concave_majorant(gf);
    return interpolate_hull(gf, hull, rpow(p, beta));
}

OracleBoundaries oracle_boundaries(const EntrySolution& solution,
                                   const OracleGrid& grid) {
    const auto& inputs = solution.inputs;
    const double beta = inputs.market.beta;
    if (!(beta > 0.0) || solution.regime.tag == RegimeTag::IllPosed) {
        throw std::invalid_argument("oracle_boundaries: requires a well-posed solution");
    }
    const double scale_p = entry_reference_scale(solution);
    const double mult = grid.theta_max_multiplier > 0.0 ? grid.theta_max_multiplier
                                                        : 1000.0;
    const double p_lo = grid.p_min_factor * scale_p;
    const double p_hi = rpow(mult, 1.0 / beta) * scale_p;
    const double inaction = utility(-inputs.prefs.R, inputs.prefs);
    GridFunction gf = build_grid(
        p_lo, p_hi, beta, grid.n, inaction, [&](double price) {
            return std::max(
                exit_conditional_value(price, inputs, solution.exit), inaction);
        });
    const MajorantResult hull = concave_majorant(gf);

    // Purchase points are contacts on the v1 branch; contacts on the flat
    // inaction branch (the origin anchor and the finite-domain right edge)
    // are waiting points by construction.
    std::size_t first = gf.thetas.size();
    std::size_t last = 0;
    bool any = false;
    for (std::size_t i = 1; i < gf.thetas.size(); ++i) {
        if (hull.contact_mask[i] && gf.values[i] > inaction) {
            if (!any) first = i;
            last = i;
            any = true;
        }
    }
    OracleBoundaries out{};
    if (!any) {
        out.no_trade = true;
        return out;
    }
    out.no_trade = false;
    const auto price_at = [&](std::size_t i) {
        return rpow(gf.thetas[i], 1.0 / beta);
    };
    const auto cell_at = [&](std::size_t i) {
        const std::size_t j = i + 1 < gf.thetas.size() ? i + 1 : i;
        const std::size_t h = i > 1 ? i - 1 : i;
        return (price_at(j) - price_at(h)) / static_cast<double>(j - h);
    };
    out.p1 = price_at(first);
    out.grid_cell_at_p1 = cell_at(first);
    if (last + 1 == gf.thetas.size()) {
        // the contact set runs into the grid edge: right-unbounded region
        out.p2 = std::nullopt;
    } else {
        out.p2 = price_at(last);
        out.grid_cell_at_p2 = cell_at(last);
    }
    return out;
}

}  // namespace prospect
