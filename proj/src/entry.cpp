#include "prospect/entry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace prospect {

using detail::rpow;

namespace {

// c^(1-beta) (c-1)^(alpha-1), the coefficient without the alpha/beta factor.
double coeff_B(const Preferences& prefs, double beta, const ExitSolution& exit) {
    return rpow(exit.c, 1.0 - beta) * rpow(exit.c_minus_one, prefs.alpha - 1.0);
}

// Turning-point condition: f'(x) = 0 <=> h1(x^(-1/beta)) = 0 with
//   h1(z) = B (z + xi*alpha/beta) - k xi (z + xi)^beta.
// h1 is convex; above the critical cost ratio it starts negative and
// up-crosses zero exactly once.
double h1(double z, double B, double alpha, double beta, double k, double xi) {
    return B * (z + xi * alpha / beta) - k * xi * rpow(z + xi, beta);
}

// Inflexion condition: f''(x) = 0 <=> h2(x^(-1/beta)) = 0. h2 is concave,
// positive at 0 above the critical ratio, and falls to -inf.
double h2(double z, double B, double alpha, double beta, double k, double xi) {
    const double lin = B * (-(xi * alpha / (beta * beta)) * (beta - alpha) +
                            (1.0 / beta) * (alpha / beta - beta + alpha - 1.0) * z);
    const double pow_part = k * rpow(xi + z, beta) *
                            (-xi * (1.0 - alpha / beta) + (1.0 / beta - 1.0) * z);
    return lin - pow_part;
}

// Bisection on [lo, hi] given fn(lo) and fn(hi) have opposite signs.
template <typename Fn>
double bisect(Fn&& fn, double lo, double hi, bool positive_at_lo) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((fn(mid) > 0.0) == positive_at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double boundary_price(double x, const ModelInputs& inputs) {
    return (inputs.prefs.R + inputs.costs.psi) / inputs.costs.gamma *
           rpow(x, 1.0 / inputs.market.beta);
}

void require_well_posed(const ModelInputs& inputs, const char* who) {
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        throw std::invalid_argument(std::string(who) + ": inputs are ill-posed");
    }
}

// Farthest point the turning-point search will look at. Beyond it the
// purchase interval, when it formally exists, sits below every representable
// price (x2* = z^(-beta) underflows).
constexpr double kTurningPointHorizon = 1e200;

// The purchase region vanishes when h1 has no up-cross within the numeric
// horizon. At beta = 1 this is exactly xi >= (c-1)^(alpha-1)/k, where f is
// decreasing outright; just below 1 the root sits at z ~ (k xi/B)^(1/(1-beta)),
// which explodes past double range as beta -> 1, so the same test covers the
// continuous approach to that branch. Subcritical inputs have h1 >= 0
// everywhere and never land here.
bool purchase_region_vanishes(const ModelInputs& inputs, const ExitSolution& exit) {
    const double B = coeff_B(inputs.prefs, inputs.market.beta, exit);
    return h1(kTurningPointHorizon, B, inputs.prefs.alpha, inputs.market.beta,
              inputs.prefs.k, inputs.costs.xi) <= 0.0;
}

}  // namespace

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::OneSided: return "one_sided";
        case RegimeTag::Interval: return "interval";
        case RegimeTag::NoTrade: return "no_trade";
        case RegimeTag::IllPosed: return "ill_posed";
    }
    return "unknown";
}

double f_value(double x, const Preferences& prefs, double beta, double xi,
               const ExitSolution& exit) {
    if (!(x >= 0.0)) throw std::domain_error("f_value: x must be nonnegative");
    if (x == 0.0) return -prefs.k;
    const double A = gain_exit_coefficient(prefs, beta, exit);
    // factored as W^alpha [A (xi + x^(-1/beta))^(-beta) - k]: the raw
    // numerator A x - k W^beta cancels catastrophically for large x near the
    // critical cost ratio
    const double W = xi * rpow(x, 1.0 / beta) + 1.0;
    const double z = rpow(x, -1.0 / beta);
    return rpow(W, prefs.alpha) * (A * rpow(xi + z, -beta) - prefs.k);
}

double f_derivative(double x, const Preferences& prefs, double beta, double xi,
                    const ExitSolution& exit) {
    if (!(x > 0.0)) throw std::domain_error("f_derivative: x must be positive");
    const double B = coeff_B(prefs, beta, exit);
    const double W = xi * rpow(x, 1.0 / beta) + 1.0;
    const double z = rpow(x, -1.0 / beta);
    return (prefs.alpha / beta) * rpow(x, 1.0 / beta) *
           h1(z, B, prefs.alpha, beta, prefs.k, xi) /
           rpow(W, beta - prefs.alpha + 1.0);
}

double f_second_derivative(double x, const Preferences& prefs, double beta,
                           double xi, const ExitSolution& exit) {
    if (!(x > 0.0)) {
        throw std::domain_error("f_second_derivative: x must be positive");
    }
    const double B = coeff_B(prefs, beta, exit);
    const double W = xi * rpow(x, 1.0 / beta) + 1.0;
    const double z = rpow(x, -1.0 / beta);
    return (xi * prefs.alpha / beta) * rpow(x, 2.0 / beta - 1.0) *
           h2(z, B, prefs.alpha, beta, prefs.k, xi) /
           rpow(W, beta - prefs.alpha + 2.0);
}

double critical_xi(const Preferences& prefs, double beta,
                   const ExitSolution& exit) {
    const double A = gain_exit_coefficient(prefs, beta, exit);
    return rpow(A / prefs.k, 1.0 / beta);
}

double solve_x2(const ModelInputs& inputs, const ExitSolution& exit) {
    require_well_posed(inputs, "solve_x2");
    const auto& prefs = inputs.prefs;
    const double beta = inputs.market.beta;
    const double xi = inputs.costs.xi;
    if (!(xi > critical_xi(prefs, beta, exit)) ||
        purchase_region_vanishes(inputs, exit)) {
        throw std::invalid_argument("solve_x2: f has no interior maximum here");
    }
    const double B = coeff_B(prefs, beta, exit);
    auto fn = [&](double z) { return h1(z, B, prefs.alpha, beta, prefs.k, xi); };
    // fn(0) < 0 above the critical ratio; expand until the up-cross shows.
    double hi = 1.0;
    while (fn(hi) <= 0.0) {
        hi *= 10.0;
        if (hi > kTurningPointHorizon) {
            throw std::runtime_error("solve_x2: no sign change found");
        }
    }
    const double z = bisect(fn, 0.0, hi, /*positive_at_lo=*/false);
    return rpow(z, -beta);
}

double solve_x_tilde(const ModelInputs& inputs, const ExitSolution& exit) {
    require_well_posed(inputs, "solve_x_tilde");
    const auto& prefs = inputs.prefs;
    const double beta = inputs.market.beta;
    const double xi = inputs.costs.xi;
    if (!(xi > critical_xi(prefs, beta, exit)) ||
        purchase_region_vanishes(inputs, exit)) {
        throw std::invalid_argument("solve_x_tilde: f has no inflexion here");
    }
    const double B = coeff_B(prefs, beta, exit);
    auto fn = [&](double z) { return h2(z, B, prefs.alpha, beta, prefs.k, xi); };
    double hi = 1.0;
    while (fn(hi) >= 0.0) {
        hi *= 10.0;
        if (hi > 1e200) {
            throw std::runtime_error("solve_x_tilde: no sign change found");
        }
    }
    const double z = bisect(fn, 0.0, hi, /*positive_at_lo=*/true);
    return rpow(z, -beta);
}

double no_trade_constant(const ModelInputs& inputs, const ExitSolution& exit) {
    const double k = inputs.prefs.k;
    const double x2 = solve_x2(inputs, exit);
    const double fx2 =
        f_value(x2, inputs.prefs, inputs.market.beta, inputs.costs.xi, exit);
    if (!(fx2 > -k * (1.0 + 1e-6)) || !(fx2 < k * 1e-6)) {
        throw std::runtime_error("no_trade_constant: f(x2*) outside (-k, 0)");
    }
    // -k < f(x2*) < 0 holds in exact arithmetic; rounding can cross either
    // edge when the inputs sit on a regime boundary. C diverges at the
    // critical cost ratio and vanishes where the purchase region closes.
    if (fx2 >= 0.0) return std::numeric_limits<double>::infinity();
    if (fx2 <= -k) return 0.0;
    return rpow(-k / fx2, 1.0 / inputs.prefs.alpha) - 1.0;
}

FProfile analyze_f(const ModelInputs& inputs, const ExitSolution& exit) {
    require_well_posed(inputs, "analyze_f");
    FProfile profile{};
    profile.xi = inputs.costs.xi;
    profile.critical_xi = critical_xi(inputs.prefs, inputs.market.beta, exit);
    profile.limit_sign = profile.xi < profile.critical_xi   ? +1
                         : profile.xi == profile.critical_xi ? 0
                                                              : -1;
    if (profile.xi > profile.critical_xi &&
        !purchase_region_vanishes(inputs, exit)) {
        profile.x2_star = solve_x2(inputs, exit);
        profile.x_tilde = solve_x_tilde(inputs, exit);
    }
    return profile;
}

double solve_x1(const ModelInputs& inputs, const ExitSolution& exit) {
    require_well_posed(inputs, "solve_x1");
    const auto& prefs = inputs.prefs;
    const double beta = inputs.market.beta;
    const double xi = inputs.costs.xi;
    const double psi = inputs.costs.psi;
    if (psi == 0.0) return 0.0;  // the tangency sits exactly at the origin

    const double A = gain_exit_coefficient(prefs, beta, exit);
    const double pref = rpow(1.0 + psi / prefs.R, prefs.alpha);
    const double slack = 1.0 - prefs.alpha / beta;
    // Chord-tangency condition written so x = 0 is evaluable exactly:
    //   G(x) = pref * [ k W^beta (xi*slack*x^(1/beta) + 1)
    //                   - A xi slack x^(1/beta + 1) ] / W^(beta - alpha + 1)
    auto G_minus_k = [&](double x) {
        const double xr = rpow(x, 1.0 / beta);
        const double W = xi * xr + 1.0;
        const double num =
            prefs.k * rpow(W, beta) * (xi * slack * xr + 1.0) - A * xi * slack * xr * x;
        return pref * num / rpow(W, beta - prefs.alpha + 1.0) - prefs.k;
    };

    // G(0) = pref*k > k. Find a point past the down-crossing: above the
    // critical ratio the maximizer of f works (G(x2*) < k in the Interval
    // regime); below it G is monotone, so expand geometrically. The root can
    // sit far out when alpha is close to beta and psi is large (at alpha =
    // beta it is [((1+psi/R)^(alpha/(1-alpha)) - 1)/xi]^beta), so the
    // expansion runs to the edge of double range before giving up.
    double hi = 0.0;
    bool have_hi = false;
    if (xi > critical_xi(prefs, beta, exit) &&
        !purchase_region_vanishes(inputs, exit)) {
        const double x2 = solve_x2(inputs, exit);
        if (G_minus_k(x2) < 0.0) {
            hi = x2;
            have_hi = true;
        }
    }
    if (!have_hi) {
        for (double x = 1e-6; x <= 1e300; x *= 10.0) {
            if (G_minus_k(x) < 0.0) {
                hi = x;
                have_hi = true;
                break;
            }
        }
    }
    if (!have_hi) {
        throw std::runtime_error(
            "solve_x1: no down-crossing on the scan range; regime misclassified?");
    }
    return bisect(G_minus_k, 0.0, hi, /*positive_at_lo=*/true);
}

EntryRegime classify_regime(const ModelInputs& inputs, const ExitSolution& exit) {
    EntryRegime regime{};
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        regime.tag = RegimeTag::IllPosed;
        return regime;
    }
    const auto& prefs = inputs.prefs;
    const double beta = inputs.market.beta;
    const double xi = inputs.costs.xi;

    if (purchase_region_vanishes(inputs, exit)) {
        regime.tag = RegimeTag::NoTrade;
        return regime;
    }
    // Ties sit on the one-sided branch. The few-ulp guard absorbs rounding in
    // the critical ratio, whose true margin over xi can be far below double
    // resolution (e.g. lambda = gamma = 1 with alpha near 1).
    if (xi <= critical_xi(prefs, beta, exit) * (1.0 + 8e-16)) {
        regime.tag = RegimeTag::OneSided;
        regime.x1_star = solve_x1(inputs, exit);
        regime.p1_star = boundary_price(*regime.x1_star, inputs);
        return regime;
    }
    const double x2 = solve_x2(inputs, exit);
    const double C = no_trade_constant(inputs, exit);
    regime.x2_star = x2;
    regime.no_trade_constant = C;
    if (inputs.costs.psi >= C * prefs.R) {
        regime.tag = RegimeTag::NoTrade;
        return regime;
    }
    regime.tag = RegimeTag::Interval;
    regime.x1_star = solve_x1(inputs, exit);
    regime.p1_star = boundary_price(*regime.x1_star, inputs);
    regime.p2_star = boundary_price(x2, inputs);
    return regime;
}

EntrySolution solve_entry(const ModelInputs& inputs) {
    require_well_posed(inputs, "solve_entry");
    ExitSolution exit = solve_c(inputs.prefs, inputs.market.beta);
    EntryRegime regime = classify_regime(inputs, exit);
    return {regime, exit, inputs};
}

double exit_conditional_value(double p, const ModelInputs& inputs,
                              const ExitSolution& exit) {
    if (!(p >= 0.0)) {
        throw std::domain_error("exit_conditional_value: p must be nonnegative");
    }
    const auto& prefs = inputs.prefs;
    const auto& costs = inputs.costs;
    const double beta = inputs.market.beta;
    const double H = costs.lambda * p + costs.psi + prefs.R;
    const double A = gain_exit_coefficient(prefs, beta, exit);
    if (H > 1e100) {
        // (lambda p + psi + R)^(alpha-beta) decays while (gamma p)^beta grows;
        // combine the exponents in log space to dodge intermediate extremes.
        const double t1 = std::log(A) + (prefs.alpha - beta) * std::log(H) +
                          beta * std::log(costs.gamma * p);
        return std::exp(t1) - prefs.k * std::exp(prefs.alpha * std::log(H));
    }
    return A * rpow(H, prefs.alpha - beta) * rpow(costs.gamma * p, beta) -
           prefs.k * rpow(H, prefs.alpha);
}

double entry_payoff(double p, const EntrySolution& solution) {
    const auto& prefs = solution.inputs.prefs;
    const double inaction = -prefs.k * rpow(prefs.R, prefs.alpha);
    return std::max(exit_conditional_value(p, solution.inputs, solution.exit),
                    inaction);
}

double scaled_payoff_g2(double theta, const EntrySolution& solution) {
    if (!(theta >= 0.0)) {
        throw std::domain_error("scaled_payoff_g2: theta must be nonnegative");
    }
    const double p = rpow(theta, 1.0 / solution.inputs.market.beta);
    return entry_payoff(p, solution);
}

double entry_value(double p, const EntrySolution& solution) {
    if (!(p > 0.0)) throw std::domain_error("entry_value: p must be positive");
    const auto& prefs = solution.inputs.prefs;
    const double beta = solution.inputs.market.beta;
    const double inaction = -prefs.k * rpow(prefs.R, prefs.alpha);
    switch (solution.regime.tag) {
        case RegimeTag::IllPosed:
            throw std::invalid_argument("entry_value: ill-posed solution");
        case RegimeTag::NoTrade:
            return inaction;
        case RegimeTag::OneSided:
        case RegimeTag::Interval:
            break;
    }
    const double p1 = *solution.regime.p1_star;
    if (p1 > 0.0 && p < p1) {
        const double v1_at_p1 =
            exit_conditional_value(p1, solution.inputs, solution.exit);
        return (v1_at_p1 - inaction) * rpow(p / p1, beta) + inaction;
    }
    if (solution.regime.tag == RegimeTag::Interval &&
        p > *solution.regime.p2_star) {
        return exit_conditional_value(*solution.regime.p2_star, solution.inputs,
                                      solution.exit);
    }
    return exit_conditional_value(p, solution.inputs, solution.exit);
}

}  // namespace prospect
