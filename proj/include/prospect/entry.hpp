#pragma once

#include <optional>

#include "prospect/exit.hpp"
#include "prospect/model.hpp"

namespace prospect {

enum class RegimeTag { OneSided, Interval, NoTrade, IllPosed };

const char* to_string(RegimeTag tag);

/// Shape summary of the auxiliary function f: the entry payoff expressed in
/// price-free coordinates x = (gamma/(R+psi))^beta * theta. Below the
/// critical cost ratio f is increasing concave and unbounded; above it f
/// peaks at x2_star, inflects at x_tilde and falls to -inf. The two points
/// are absent both below the ratio and where the interior maximum vanishes
/// (f decreasing outright, which happens at or just below beta = 1 under
/// heavy proportional costs).
struct FProfile {
    double xi;
    double critical_xi;
    int limit_sign;  // sign of lim f(x), x -> inf: +1 / 0 / -1
    std::optional<double> x2_star;
    std::optional<double> x_tilde;
};

/// Purchase rule classification with its boundaries. p1_star is present for
/// OneSided and Interval, p2_star for Interval only. The no-trade constant C
/// is present whenever f has an interior maximum (the trade is abandoned
/// exactly when psi >= C*R); x1_star/x2_star are the boundaries in the
/// price-free coordinate of f.
struct EntryRegime {
    RegimeTag tag;
    std::optional<double> p1_star;
    std::optional<double> p2_star;
    std::optional<double> x1_star;
    std::optional<double> x2_star;
    std::optional<double> no_trade_constant;
};

struct EntrySolution {
    EntryRegime regime;
    ExitSolution exit;
    ModelInputs inputs;
};

/// f(x) = [ (alpha/beta) c^(1-beta) (c-1)^(alpha-1) x
///          - k (xi x^(1/beta) + 1)^beta ] / (xi x^(1/beta) + 1)^(beta-alpha)
/// for x >= 0; f(0) = -k.
double f_value(double x, const Preferences& prefs, double beta, double xi,
               const ExitSolution& exit);

/// Closed-form first derivative of f. Defined for x > 0 (the x -> 0+ limit
/// exists but the closed form is written in x^(-1/beta)); throws
/// std::domain_error at x <= 0.
double f_derivative(double x, const Preferences& prefs, double beta, double xi,
                    const ExitSolution& exit);

double f_second_derivative(double x, const Preferences& prefs, double beta,
                           double xi, const ExitSolution& exit);

/// Threshold [ alpha/(beta k) c^(1-beta) (c-1)^(alpha-1) ]^(1/beta) on the
/// cost ratio xi: at or below it the purchase region is one-sided. Reduces
/// to alpha (c-1)^(alpha-1) / k at beta = 1.
double critical_xi(const Preferences& prefs, double beta,
                   const ExitSolution& exit);

FProfile analyze_f(const ModelInputs& inputs, const ExitSolution& exit);

/// Maximizer of f (scaled upper purchase boundary). Exists only above the
/// critical cost ratio; throws std::invalid_argument otherwise.
double solve_x2(const ModelInputs& inputs, const ExitSolution& exit);

/// Inflexion point of f; satisfies x_tilde > x2_star. Same preconditions as
/// solve_x2.
double solve_x_tilde(const ModelInputs& inputs, const ExitSolution& exit);

/// C = (-k / f(x2_star))^(1/alpha) - 1, strictly positive; the trade is
/// abandoned altogether exactly when psi >= C*R. Independent of psi and R.
double no_trade_constant(const ModelInputs& inputs, const ExitSolution& exit);

/// Smallest x >= 0 where the chord-tangency condition
///   (1 + psi/R)^alpha [ x f'(x) - f(x) ] = k
/// is met (a down-crossing); exactly 0 when psi = 0. Requires a OneSided or
/// Interval regime; throws std::runtime_error if no down-crossing is found
/// on the scan range (signals a misclassified regime).
double solve_x1(const ModelInputs& inputs, const ExitSolution& exit);

/// Full regime classification, populating boundaries
/// p_i = (R+psi)/gamma * x_i^(1/beta). Ill-posed inputs yield the IllPosed
/// tag instead of an error so callers can route the divergent case.
EntryRegime classify_regime(const ModelInputs& inputs,
                            const ExitSolution& exit);

/// solve_c + classify_regime. Throws std::invalid_argument on ill-posed
/// inputs (use classify_wellposedness to pre-screen).
EntrySolution solve_entry(const ModelInputs& inputs);

/// v1(p): expected utility of buying now at p and selling optimally, i.e.
/// the exit value against the endogenous reference point lambda*p + psi + R.
double exit_conditional_value(double p, const ModelInputs& inputs,
                              const ExitSolution& exit);

/// Entry payoff G2(p) = max{ v1(p), U(-R) }: buy now or stay out forever.
double entry_payoff(double p, const EntrySolution& solution);

/// g2(theta) = G2(theta^(1/beta)) on the scaled axis; g2(0) = -k R^alpha.
double scaled_payoff_g2(double theta, const EntrySolution& solution);

/// Entry value function V2: chord below p1_star, v1 on the purchase region,
/// frozen at v1(p2_star) above it (Interval), constant -k R^alpha (NoTrade).
double entry_value(double p, const EntrySolution& solution);

}  // namespace prospect
