#pragma once

#include <optional>
#include <string>

#include "prospect/model.hpp"

namespace prospect {

/// A partially specified scenario, from a config file and/or command-line
/// overrides. Market dynamics come either from beta alone or from the pair
/// (mu, sigma); mixing the two is rejected.
struct ScenarioConfig {
    std::optional<double> alpha;
    std::optional<double> k;
    std::optional<double> R;
    std::optional<double> mu;
    std::optional<double> sigma;
    std::optional<double> beta;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<double> psi;

    /// Fields set in `overrides` replace this config's fields.
    void merge(const ScenarioConfig& overrides);

    /// Validates completeness and invariants; throws std::invalid_argument
    /// naming the offending field.
    ModelInputs build() const;
};

/// Flat `key = value` file, one pair per line; '#' starts a comment.
/// Unknown keys are rejected.
ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text);

/// 17-significant-digit decimal formatting (round-trips through strtod).
std::string format_double(double v);

}  // namespace prospect
