#include "prospect/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prospect {

namespace detail {

double rpow(double a, double e) {
    if (a < 0.0 || std::isnan(a)) {
        throw std::domain_error("rpow: negative base");
    }
    if (a == 0.0) {
        if (e > 0.0) return 0.0;
        if (e == 0.0) return 1.0;
        return std::numeric_limits<double>::infinity();
    }
    if (e == 0.0) return 1.0;
    if (e == 1.0) return a;
    return std::exp(e * std::log(a));
}

}  // namespace detail

Preferences::Preferences(double alpha_, double k_, double R_)
    : alpha(alpha_), k(k_), R(R_) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("Preferences: alpha must lie in (0,1)");
    }
    if (!(k > 1.0)) {
        throw std::invalid_argument("Preferences: k must exceed 1");
    }
    if (!(R > 0.0)) {
        throw std::invalid_argument("Preferences: R must be positive");
    }
}

MarketDynamics::MarketDynamics(double mu_, double sigma_)
    : mu(mu_), sigma(sigma_), beta(0.0) {
    if (!(mu >= 0.0)) {
        throw std::invalid_argument("MarketDynamics: mu must be nonnegative");
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("MarketDynamics: sigma must be positive");
    }
    beta = 1.0 - 2.0 * mu / (sigma * sigma);
}

MarketDynamics MarketDynamics::from_beta(double beta_) {
    if (!(beta_ <= 1.0) || std::isnan(beta_)) {
        throw std::invalid_argument("MarketDynamics: beta must be <= 1");
    }
    MarketDynamics m((1.0 - beta_) / 2.0, 1.0);
    m.beta = beta_;  // keep the requested value bit-exact
    return m;
}

TransactionCosts::TransactionCosts(double lambda_, double gamma_, double psi_)
    : lambda(lambda_), gamma(gamma_), psi(psi_), xi(0.0) {
    if (!(lambda >= 1.0)) {
        throw std::invalid_argument("TransactionCosts: lambda must be >= 1");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("TransactionCosts: gamma must lie in (0,1]");
    }
    if (!(psi >= 0.0)) {
        throw std::invalid_argument("TransactionCosts: psi must be nonnegative");
    }
    xi = lambda / gamma;
}

double utility(double x, const Preferences& prefs) {
    if (x > 0.0) return detail::rpow(x, prefs.alpha);
    if (x == 0.0) return 0.0;
    return -prefs.k * detail::rpow(-x, prefs.alpha);
}

double scale(double x, double beta) {
    if (!(x > 0.0)) {
        throw std::domain_error("scale: x must be positive");
    }
    if (beta > 0.0) return detail::rpow(x, beta);
    if (beta == 0.0) return std::log(x);
    return detail::rpow(x, -beta);
}

double hitting_probability(double p, double b, double beta) {
    if (!(p > 0.0) || !(b > 0.0)) {
        throw std::domain_error("hitting_probability: prices must be positive");
    }
    if (b == p) return 1.0;
    if (beta > 0.0) {
        if (b < p) return 1.0;  // downward targets are certain, the price drifts to 0
        return detail::rpow(p / b, beta);
    }
    if (beta == 0.0) return 1.0;  // driftless log-price is recurrent
    if (b > p) return 1.0;        // upward drift reaches any higher level
    throw std::invalid_argument(
        "hitting_probability: downward passage with beta < 0 is unsupported");
}

WellPosedness classify_wellposedness(double alpha, double beta) {
    if (beta <= 0.0 || beta < alpha) return WellPosedness::IllPosed;
    if (beta == 1.0) return WellPosedness::WellPosedBoundary;
    return WellPosedness::WellPosedInterior;
}

WellPosedness classify_wellposedness(const ModelInputs& inputs) {
    return classify_wellposedness(inputs.prefs.alpha, inputs.market.beta);
}

double buy_and_hold_value(double p, double n, const ModelInputs& inputs) {
    if (classify_wellposedness(inputs) != WellPosedness::IllPosed) {
        throw std::invalid_argument(
            "buy_and_hold_value: only meaningful for ill-posed inputs");
    }
    if (!(p > 0.0) || !(n > p)) {
        throw std::domain_error("buy_and_hold_value: requires n > p > 0");
    }
    const auto& prefs = inputs.prefs;
    const auto& costs = inputs.costs;
    const double beta = inputs.market.beta;
    const double outlay = costs.lambda * p + costs.psi + prefs.R;
    if (beta <= 0.0) {
        // the sale level n is reached surely
        return utility(costs.gamma * n - outlay, prefs);
    }
    // 0 < beta < alpha: reach n with probability (p/n)^beta, else total loss
    const double q = detail::rpow(p / n, beta);
    return (1.0 - q) * utility(-outlay, prefs) +
           q * utility(costs.gamma * n - outlay, prefs);
}

}  // namespace prospect
