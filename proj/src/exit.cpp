#include "prospect/exit.hpp"

#include <cmath>
#include <stdexcept>

namespace prospect {

namespace {

// Gain-exit equation rearranged around u = c - 1 so the (c-1)^(alpha-1)
// factor never meets a cancelling subtraction:
//   F(u) = u^(alpha-1) * [ (alpha/beta)(1+u) - u ] - k.
double gain_exit_equation(double u, double alpha, double beta, double k) {
    const double bracket = (alpha / beta) * (1.0 + u) - u;
    return detail::rpow(u, alpha - 1.0) * bracket - k;
}

}  // namespace

ExitSolution solve_c(const Preferences& prefs, double beta) {
    if (classify_wellposedness(prefs.alpha, beta) == WellPosedness::IllPosed) {
        throw std::invalid_argument("solve_c: inputs are ill-posed");
    }
    const double alpha = prefs.alpha;
    const double k = prefs.k;
    auto F = [&](double u) { return gain_exit_equation(u, alpha, beta, k); };

    // F -> +inf as u -> 0+; walk the lower end down until the sign shows.
    double lo = 1e-9;
    while (F(lo) <= 0.0) {
        lo *= 1e-2;
        if (lo < 1e-300) {
            throw std::runtime_error("solve_c: no positive bracket end found");
        }
    }
    // Expand the upper end geometrically until F turns negative.
    double hi = 1.0;
    while (F(hi) > 0.0) {
        hi *= 10.0;
        if (hi > 1e12) {
            throw std::runtime_error("solve_c: bracket expansion exceeded c = 1e12");
        }
    }
    if (hi <= lo) {
        hi = lo * 10.0;
        if (F(hi) > 0.0) {
            throw std::runtime_error("solve_c: degenerate bracket");
        }
    }

    // Bisect in log(u): the root can sit many decades below 1.
    double llo = std::log(lo);
    double lhi = std::log(hi);
    for (int i = 0; i < 200 && lhi - llo > 0.0; ++i) {
        const double mid = 0.5 * (llo + lhi);
        if (F(std::exp(mid)) > 0.0) {
            llo = mid;
        } else {
            lhi = mid;
        }
    }
    const double u = std::exp(0.5 * (llo + lhi));
    ExitSolution sol{1.0 + u, u, std::fabs(F(u))};
    if (!(sol.residual <= 1e-12)) {
        throw std::runtime_error("solve_c: residual above tolerance");
    }
    return sol;
}

double sale_threshold(double c, double H, double gamma) {
    if (!(c > 1.0)) throw std::invalid_argument("sale_threshold: c must exceed 1");
    if (!(H > 0.0)) throw std::invalid_argument("sale_threshold: H must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("sale_threshold: gamma must lie in (0,1]");
    }
    return c * H / gamma;
}

double gain_exit_coefficient(const Preferences& prefs, double beta,
                             const ExitSolution& exit) {
    return (prefs.alpha / beta) * detail::rpow(exit.c, 1.0 - beta) *
           detail::rpow(exit.c_minus_one, prefs.alpha - 1.0);
}

double exit_value(double p, double H, const ModelInputs& inputs,
                  const ExitSolution& exit) {
    if (!(p > 0.0) || !(H > 0.0)) {
        throw std::domain_error("exit_value: p and H must be positive");
    }
    const auto& prefs = inputs.prefs;
    const double beta = inputs.market.beta;
    const double gamma = inputs.costs.gamma;
    const double trigger = sale_threshold(exit.c, H, gamma);
    if (p >= trigger) {
        return detail::rpow(gamma * p - H, prefs.alpha);
    }
    const double coeff = gain_exit_coefficient(prefs, beta, exit);
    return coeff * detail::rpow(H, prefs.alpha - beta) *
               detail::rpow(gamma * p, beta) -
           prefs.k * detail::rpow(H, prefs.alpha);
}

}  // namespace prospect
