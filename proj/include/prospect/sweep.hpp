#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prospect/entry.hpp"

namespace prospect {

enum class SweepParameter { Lambda, Gamma, Psi, AspirationR };

const char* to_string(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(const std::string& name);

/// One grid point of a comparative-statics sweep.
struct SweepRecord {
    double value;  // swept parameter value
    RegimeTag regime;
    std::optional<double> p1_star;
    std::optional<double> p2_star;
    std::optional<double> no_trade_constant;
    double c;
    double critical_xi;
};

/// A regime change between adjacent grid points, bisected to 1e-6 in the
/// swept parameter.
struct RegimeTransition {
    double location;
    RegimeTag below;
    RegimeTag above;
};

struct SweepResult {
    SweepParameter parameter;
    std::vector<SweepRecord> records;
    std::vector<RegimeTransition> transitions;
};

ModelInputs with_parameter(const ModelInputs& base, SweepParameter parameter,
                           double value);

/// Evaluates `steps` evenly spaced values of the parameter on [lo, hi].
/// Grid points are independent and run concurrently; records keep grid
/// order. Range endpoints must satisfy the parameter's invariants.
SweepResult run_sweep(SweepParameter parameter, double lo, double hi,
                      std::size_t steps, const ModelInputs& base,
                      unsigned n_workers = 0);  // 0: pick automatically

struct MonotonicityVerdict {
    SweepParameter parameter;
    std::string boundary;    // "p1_star" or "p2_star"
    int expected_direction;  // +1 nondecreasing, -1 nonincreasing
    bool holds;
    double max_violation;
};

/// Checks a boundary's expected monotone direction across consecutive
/// records where the boundary is defined. holds iff the worst step against
/// the direction is <= tol.
MonotonicityVerdict check_monotonicity(const SweepResult& sweep,
                                       const std::string& boundary,
                                       int expected_direction,
                                       double tol = 1e-9);

/// CSV emission of sweep records: header row, '.' decimal separator, empty
/// fields for absent values, 17 significant digits (round-trip exact).
std::string sweep_records_csv(const SweepResult& sweep);
std::vector<SweepRecord> parse_sweep_records_csv(const std::string& csv);

}  // namespace prospect
