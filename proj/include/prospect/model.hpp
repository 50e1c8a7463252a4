#pragma once

namespace prospect {

/// S-shaped preference parameters of the trading agent.
///
/// alpha in (0,1) is the curvature exponent over both gains and losses,
/// k > 1 the loss-aversion coefficient, and R > 0 the aspiration level:
/// the profit benchmark folded into the reference point.
struct Preferences {
    double alpha;
    double k;
    double R;

    Preferences(double alpha, double k, double R);
};

/// Geometric Brownian motion coefficients and the derived exponent
/// beta = 1 - 2*mu/sigma^2. mu >= 0 forces beta <= 1. beta is always
/// recomputed from (mu, sigma); it cannot be set independently of them.
struct MarketDynamics {
    double mu;
    double sigma;
    double beta;

    MarketDynamics(double mu, double sigma);

    /// Every solver formula depends on the dynamics only through beta, so a
    /// scenario may pin beta directly; sigma = 1 and mu = (1 - beta)/2 are
    /// backfilled to keep the triple consistent.
    static MarketDynamics from_beta(double beta);
};

/// Proportional and fixed trading costs. A purchase at price p costs
/// lambda*p + psi; a sale at price p yields gamma*p.
struct TransactionCosts {
    double lambda;  // purchase multiplier, >= 1
    double gamma;   // sale multiplier, in (0, 1]
    double psi;     // fixed entry fee, >= 0
    double xi;      // derived cost ratio lambda/gamma, >= 1

    TransactionCosts(double lambda, double gamma, double psi);
};

struct ModelInputs {
    Preferences prefs;
    MarketDynamics market;
    TransactionCosts costs;
};

/// Finiteness classification of the round-trip problem. The supremum is
/// infinite when beta <= 0 or beta < alpha (a buy-and-hold scheme attains
/// arbitrarily high expected utility); the boundary tag marks the driftless
/// case beta = 1 where the entry solution takes a special form.
enum class WellPosedness { IllPosed, WellPosedInterior, WellPosedBoundary };

/// Piecewise power utility: x^alpha over gains, -k*|x|^alpha over losses,
/// zero at the origin. Total on the reals.
double utility(double x, const Preferences& prefs);

/// Strictly increasing transform under which the price becomes a local
/// martingale: x^beta for beta > 0, ln x for beta = 0, x^(-beta) for
/// beta < 0. Throws std::domain_error for x <= 0.
double scale(double x, double beta);

/// Probability that the price ever reaches level b starting from p.
/// Upward targets under beta > 0 are reached with probability (p/b)^beta;
/// every other supported case is certain. The downward case under beta < 0
/// is unsupported and throws.
double hitting_probability(double p, double b, double beta);

WellPosedness classify_wellposedness(double alpha, double beta);
WellPosedness classify_wellposedness(const ModelInputs& inputs);

/// Expected utility of the divergent scheme "buy now at p, sell on first
/// passage to n". Only meaningful for ill-posed inputs; grows without bound
/// in n there. Requires n > p; rejects well-posed inputs.
double buy_and_hold_value(double p, double n, const ModelInputs& inputs);

namespace detail {

/// a^e evaluated as exp(e*ln a) with explicit guards at a = 0.
/// Requires a >= 0.
double rpow(double a, double e);

}  // namespace detail

}  // namespace prospect
