#include "prospect/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "prospect/rng.hpp"

namespace prospect {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

double log_norm_cdf(double z) {
    if (z > -8.0) return std::log(norm_cdf(z));
    // deep tail: Phi(z) ~ phi(z)/(-z) (1 - 1/z^2 + 3/z^4)
    const double z2 = z * z;
    return -0.5 * z2 - 0.91893853320467274178 - std::log(-z) +
           std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

// P(max_{s<=t} (m s + sigma W_s) >= a) for a > 0. The reflected term is
// assembled in log space; its combined exponent is never positive.
double bm_upcross_probability(double a, double m, double sigma, double t) {
    const double st = sigma * std::sqrt(t);
    const double term1 = norm_cdf((m * t - a) / st);
    const double term2 =
        std::exp(2.0 * m * a / (sigma * sigma) + log_norm_cdf((-m * t - a) / st));
    const double p = term1 + term2;
    return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

struct OutcomeCounts {
    std::uint64_t never_bought = 0;
    std::uint64_t bought_not_sold = 0;
    std::uint64_t round_trips = 0;
};

}  // namespace

double first_passage_up_probability(double p, double b, double mu, double sigma,
                                    double t) {
    if (!(p > 0.0) || !(b > 0.0) || !(sigma > 0.0) || !(t > 0.0)) {
        throw std::domain_error("first_passage_up_probability: bad arguments");
    }
    if (b <= p) return 1.0;
    return bm_upcross_probability(std::log(b / p), mu - 0.5 * sigma * sigma, sigma, t);
}

double first_passage_down_probability(double p, double b, double mu, double sigma,
                                      double t) {
    if (!(p > 0.0) || !(b > 0.0) || !(sigma > 0.0) || !(t > 0.0)) {
        throw std::domain_error("first_passage_down_probability: bad arguments");
    }
    if (b >= p) return 1.0;
    // min of a drifted BM mirrors the max of the drift-flipped one
    return bm_upcross_probability(std::log(p / b), -(mu - 0.5 * sigma * sigma),
                                  sigma, t);
}

McEstimate simulate_strategy_mc(double p, const TradingStrategy& strategy,
                                const ModelInputs& inputs, const ExitSolution& exit,
                                double horizon, std::uint64_t n_paths,
                                std::uint64_t seed, unsigned n_workers,
                                std::uint32_t n_steps) {
    if (!(p > 0.0)) throw std::domain_error("simulate_strategy_mc: p must be positive");
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("simulate_strategy_mc: horizon must be positive");
    }
    if (n_paths < 1) {
        throw std::invalid_argument("simulate_strategy_mc: need at least one path");
    }
    if (n_steps < 1) {
        throw std::invalid_argument("simulate_strategy_mc: need at least one step");
    }
    const double beta = inputs.market.beta;
    if (!(beta > 0.0)) {
        throw std::invalid_argument("simulate_strategy_mc: requires beta > 0");
    }
    const auto& prefs = inputs.prefs;
    const auto& costs = inputs.costs;

    const double u_never_buy = utility(-prefs.R, prefs);
    if (strategy.buy.kind == BuyRule::Kind::Never) {
        // no randomness: the payoff is the inaction utility on every path
        return {u_never_buy, 0.0, n_paths, 0.0, 0.0, 0.0};
    }

    // Purchase always happens at a deterministic price: the start price for
    // an immediate buy, the crossing level otherwise. Only three outcome
    // utilities exist, so paths reduce to exact outcome counts.
    const bool immediate = strategy.buy.kind == BuyRule::Kind::Immediate;
    const bool buy_upward = strategy.buy.kind == BuyRule::Kind::UpCross;
    const double buy_price = immediate ? p : strategy.buy.level;
    if (!immediate) {
        if (buy_upward && !(strategy.buy.level >= p)) {
            throw std::invalid_argument("simulate_strategy_mc: up-cross level below p");
        }
        if (!buy_upward && (!(strategy.buy.level <= p) || !(strategy.buy.level > 0.0))) {
            throw std::invalid_argument("simulate_strategy_mc: down-cross level above p");
        }
    }
    const double excess = strategy.sale_excess.value_or(exit.c_minus_one);
    if (!(excess > 0.0)) {
        throw std::invalid_argument("simulate_strategy_mc: sale multiple must exceed 1");
    }
    const double H = costs.lambda * buy_price + costs.psi + prefs.R;
    const double sale_price = (1.0 + excess) * H / costs.gamma;
    const double u_bought_not_sold = utility(-H, prefs);
    const double u_round_trip = utility(excess * H, prefs);

    const double mu = inputs.market.mu;
    const double sigma = inputs.market.sigma;
    const double dt = horizon / n_steps;
    const double drift_dt = (mu - 0.5 * sigma * sigma) * dt;
    const double vol_dt = sigma * std::sqrt(dt);
    const double bridge_coeff = -2.0 / (sigma * sigma * dt);
    const double log_buy = std::log(buy_price);
    const double log_sale = std::log(sale_price);
    const double log_start = std::log(p);

    auto run_block = [&](std::uint64_t lo, std::uint64_t hi, OutcomeCounts& out) {
        for (std::uint64_t path = lo; path < hi; ++path) {
            double x = log_start;
            int phase = immediate ? 1 : 0;  // 0 awaiting buy, 1 awaiting sale, 2 done
            for (std::uint32_t step = 0; step < n_steps; ++step) {
                const auto draw = rng::step_draw(seed, path, step);
                const double xn = x + drift_dt + vol_dt * draw.normal;
                if (phase == 0) {
                    const double d0 = buy_upward ? log_buy - x : x - log_buy;
                    const double d1 = buy_upward ? log_buy - xn : xn - log_buy;
                    // d0 <= 0: the step starts at or past the level, so the
                    // crossing has already happened
                    bool crossed = d1 <= 0.0 || d0 <= 0.0;
                    if (!crossed) {
                        crossed = draw.uniform < std::exp(bridge_coeff * d0 * d1);
                    }
                    if (crossed) phase = 1;  // bought at the level; sale watched next
                } else {
                    const double d0 = log_sale - x;
                    const double d1 = log_sale - xn;
                    bool crossed = d1 <= 0.0 || d0 <= 0.0;
                    if (!crossed) {
                        crossed = draw.uniform < std::exp(bridge_coeff * d0 * d1);
                    }
                    if (crossed) {
                        phase = 2;
                        break;
                    }
                }
                x = xn;
            }
            if (phase == 2) {
                ++out.round_trips;
            } else if (phase == 1) {
                ++out.bought_not_sold;
            } else {
                ++out.never_bought;
            }
        }
    };

    if (n_workers == 0) n_workers = 4;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(n_workers, n_paths));
    std::vector<OutcomeCounts> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = n_paths / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = w * chunk;
        const std::uint64_t hi = (w + 1 == workers) ? n_paths : lo + chunk;
        pool.emplace_back(run_block, lo, hi, std::ref(partial[w]));
    }
    for (auto& t : pool) t.join();

    OutcomeCounts total;  // integer outcome counts: order-independent reduction
    for (const auto& c : partial) {
        total.never_bought += c.never_bought;
        total.bought_not_sold += c.bought_not_sold;
        total.round_trips += c.round_trips;
    }

    const double n = static_cast<double>(n_paths);
    const double mean = (static_cast<double>(total.never_bought) * u_never_buy +
                         static_cast<double>(total.bought_not_sold) * u_bought_not_sold +
                         static_cast<double>(total.round_trips) * u_round_trip) /
                        n;
    double var = 0.0;
    var += static_cast<double>(total.never_bought) *
           (u_never_buy - mean) * (u_never_buy - mean);
    var += static_cast<double>(total.bought_not_sold) *
           (u_bought_not_sold - mean) * (u_bought_not_sold - mean);
    var += static_cast<double>(total.round_trips) *
           (u_round_trip - mean) * (u_round_trip - mean);
    const double std_error = n_paths > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;

    // Truncation diagnostic: mass of rules that would complete eventually but
    // not by the horizon. Splitting the horizon between the two legs keeps
    // this an upper bound on the mis-scored probability.
    double residual = 0.0;
    double q_buy_ever = 1.0;
    const double half = 0.5 * horizon;
    if (!immediate) {
        if (buy_upward) {
            q_buy_ever = hitting_probability(p, buy_price, beta);
            residual += q_buy_ever -
                        first_passage_up_probability(p, buy_price, mu, sigma, half);
        } else {
            residual +=
                1.0 - first_passage_down_probability(p, buy_price, mu, sigma, half);
        }
    }
    residual += q_buy_ever *
                (hitting_probability(buy_price, sale_price, beta) -
                 first_passage_up_probability(buy_price, sale_price, mu, sigma, half));
    if (residual < 0.0) residual = 0.0;  // rounding of nearly equal tails

    return {mean,
            std_error,
            n_paths,
            static_cast<double>(total.bought_not_sold + total.round_trips) / n,
            static_cast<double>(total.round_trips) / n,
            residual};
}

}  // namespace prospect
