#pragma once

#include <cstdint>

#include "prospect/strategy.hpp"

namespace prospect {

struct McEstimate {
    double mean;
    double std_error;
    std::uint64_t n_paths;
    double fraction_bought;  // empirical outcome rates
    double fraction_sold;
    double residual_mass;    // first-passage bound on rule-unfinished-by-horizon mass
};

/// Monte Carlo value of a threshold strategy: exact Gaussian log-price
/// increments at step dt = horizon/n_steps, with the within-step barrier
/// crossing probability of the Brownian bridge sampled so crossings between
/// grid times are not missed. Paths whose rule has not completed by the
/// horizon score as the matching "never" outcome. Bit-reproducible for a
/// fixed seed: streams are keyed by (seed, path, step) and the reduction is
/// compensated block summation in path order.
McEstimate simulate_strategy_mc(double p, const TradingStrategy& strategy,
                                const ModelInputs& inputs, const ExitSolution& exit,
                                double horizon, std::uint64_t n_paths,
                                std::uint64_t seed, unsigned n_workers = 4,
                                std::uint32_t n_steps = 4096);

/// P(price reaches b from above-start p within time t), b >= p. Closed form
/// for drifted Brownian first passage in log scale.
double first_passage_up_probability(double p, double b, double mu, double sigma,
                                    double t);

/// Downward companion: P(price reaches b <= p within time t).
double first_passage_down_probability(double p, double b, double mu, double sigma,
                                      double t);

}  // namespace prospect
