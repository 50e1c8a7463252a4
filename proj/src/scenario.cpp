#include "prospect/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace prospect {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

void assign(ScenarioConfig& cfg, const std::string& key, double value,
            int line_no) {
    if (key == "alpha") cfg.alpha = value;
    else if (key == "k") cfg.k = value;
    else if (key == "R") cfg.R = value;
    else if (key == "mu") cfg.mu = value;
    else if (key == "sigma") cfg.sigma = value;
    else if (key == "beta") cfg.beta = value;
    else if (key == "lambda") cfg.lambda = value;
    else if (key == "gamma") cfg.gamma = value;
    else if (key == "psi") cfg.psi = value;
    else {
        throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                    ": unknown key '" + key + "'");
    }
}

}  // namespace

void ScenarioConfig::merge(const ScenarioConfig& overrides) {
    if (overrides.alpha) alpha = overrides.alpha;
    if (overrides.k) k = overrides.k;
    if (overrides.R) R = overrides.R;
    if (overrides.mu) mu = overrides.mu;
    if (overrides.sigma) sigma = overrides.sigma;
    if (overrides.beta) beta = overrides.beta;
    if (overrides.lambda) lambda = overrides.lambda;
    if (overrides.gamma) gamma = overrides.gamma;
    if (overrides.psi) psi = overrides.psi;
}

ModelInputs ScenarioConfig::build() const {
    auto require = [](const std::optional<double>& v, const char* name) {
        if (!v) {
            throw std::invalid_argument(std::string("scenario: missing field '") +
                                        name + "'");
        }
        return *v;
    };
    if (beta && (mu || sigma)) {
        throw std::invalid_argument(
            "scenario: beta is mutually exclusive with mu/sigma");
    }
    MarketDynamics market =
        beta ? MarketDynamics::from_beta(*beta)
             : MarketDynamics(require(mu, "mu"), require(sigma, "sigma"));
    return {Preferences(require(alpha, "alpha"), require(k, "k"), require(R, "R")),
            market,
            TransactionCosts(require(lambda, "lambda"), require(gamma, "gamma"),
                             require(psi, "psi"))};
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value_str = trim(line.substr(eq + 1));
        std::size_t consumed = 0;
        double value = 0.0;
        try {
            value = std::stod(value_str, &consumed);
        } catch (const std::exception&) {
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": bad number for '" + key + "'");
        }
        if (consumed != value_str.size()) {
            throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                        ": trailing text after value for '" + key +
                                        "'");
        }
        assign(cfg, key, value, line_no);
    }
    return cfg;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("scenario: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace prospect
