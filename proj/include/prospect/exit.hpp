#pragma once

#include "prospect/model.hpp"

namespace prospect {

/// Solution of the liquidation problem: the asset bought against reference
/// point H is sold on first passage to c*H/gamma.
struct ExitSolution {
    double c;            // gain-exit multiple, > 1
    double c_minus_one;  // c - 1 kept at full precision (c can sit close to 1)
    double residual;     // |equation residual| at c, <= 1e-12
};

/// Solves the gain-exit multiple equation
///   (alpha/beta) c (c-1)^(alpha-1) - (c-1)^alpha - k = 0
/// by bracketing and bisection in c - 1. The left side diverges to +inf as
/// c -> 1+ and is eventually negative, so a bracket always exists; the
/// smallest bracketed root is returned together with its residual.
/// Requires well-posed inputs (0 < alpha <= beta <= 1).
ExitSolution solve_c(const Preferences& prefs, double beta);

/// Sale trigger c*H/gamma for reference point H.
double sale_threshold(double c, double H, double gamma);

/// Value of holding the asset at price p against a fixed reference point H:
/// a chord in scaled coordinates below the sale trigger, the realized gain
/// utility (gamma*p - H)^alpha at or above it.
double exit_value(double p, double H, const ModelInputs& inputs,
                  const ExitSolution& exit);

/// The coefficient (alpha/beta) c^(1-beta) (c-1)^(alpha-1) shared by the
/// exit chord and every entry-problem formula.
double gain_exit_coefficient(const Preferences& prefs, double beta,
                             const ExitSolution& exit);

}  // namespace prospect
