#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prospect/majorant.hpp"
#include "prospect/scenario.hpp"
#include "prospect/simulate.hpp"
#include "prospect/strategy.hpp"
#include "prospect/sweep.hpp"

using json = nlohmann::ordered_json;
using namespace prospect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitVerificationFailed = 2;
constexpr int kExitNumericalFailure = 3;

struct ScenarioOptions {
    std::string config_path;
    ScenarioConfig overrides;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& opts) {
    cmd->add_option("--config", opts.config_path,
                    "scenario file, one `key = value` per line");
    auto bind = [cmd](const char* name, std::optional<double>& slot,
                      const char* desc) {
        cmd->add_option_function<double>(
            name, [&slot](double v) { slot = v; }, desc);
    };
    bind("--alpha", opts.overrides.alpha, "utility curvature exponent, in (0,1)");
    bind("--k", opts.overrides.k, "loss-aversion coefficient, > 1");
    bind("--R", opts.overrides.R, "aspiration level, > 0");
    bind("--mu", opts.overrides.mu, "drift rate, >= 0 (needs --sigma)");
    bind("--sigma", opts.overrides.sigma, "volatility, > 0 (needs --mu)");
    bind("--beta", opts.overrides.beta,
         "exponent 1 - 2*mu/sigma^2 directly (exclusive with --mu/--sigma)");
    bind("--lambda", opts.overrides.lambda, "proportional purchase cost, >= 1");
    bind("--gamma", opts.overrides.gamma, "proportional sale multiplier, in (0,1]");
    bind("--psi", opts.overrides.psi, "fixed entry fee, >= 0");
}

ModelInputs build_inputs(const ScenarioOptions& opts) {
    ScenarioConfig cfg;
    if (!opts.config_path.empty()) cfg = parse_scenario_file(opts.config_path);
    cfg.merge(opts.overrides);
    return cfg.build();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file " + out_path);
    out << text;
}

json inputs_json(const ModelInputs& in) {
    return {{"alpha", in.prefs.alpha}, {"k", in.prefs.k},       {"R", in.prefs.R},
            {"mu", in.market.mu},      {"sigma", in.market.sigma},
            {"beta", in.market.beta},  {"lambda", in.costs.lambda},
            {"gamma", in.costs.gamma}, {"psi", in.costs.psi},
            {"xi", in.costs.xi}};
}

json optional_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

ExitSolution maybe_corrupt(ExitSolution exit, double corrupt_factor) {
    if (corrupt_factor <= 0.0 || corrupt_factor == 1.0) return exit;
    // test hook: desynchronize the gain-exit multiple from its equation
    exit.c *= corrupt_factor;
    exit.c_minus_one = exit.c - 1.0;
    return exit;
}

// --- solve / classify ------------------------------------------------------

json solve_report(const ModelInputs& inputs, double demo_price) {
    json report;
    report["inputs"] = inputs_json(inputs);
    const double inaction = utility(-inputs.prefs.R, inputs.prefs);
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        report["well_posedness"] = "ill_posed";
        report["regime"] = "ill_posed";
        report["inaction_value"] = inaction;
        // the divergent buy-and-hold scheme, demonstrated at growing targets
        json ns = json::array();
        json values = json::array();
        const double scale_up = std::max(1.0, demo_price / 10.0);
        for (double n : {1e2, 1e4, 1e6}) {
            ns.push_back(n * scale_up);
            values.push_back(buy_and_hold_value(demo_price, n * scale_up, inputs));
        }
        report["divergence_demo"] = {{"start_price", demo_price},
                                     {"sale_targets", ns},
                                     {"values", values}};
        return report;
    }
    report["well_posedness"] =
        classify_wellposedness(inputs) == WellPosedness::WellPosedBoundary
            ? "well_posed_boundary"
            : "well_posed_interior";
    EntrySolution sol = solve_entry(inputs);
    report["c"] = sol.exit.c;
    report["residual"] = sol.exit.residual;
    report["critical_xi"] = critical_xi(inputs.prefs, inputs.market.beta, sol.exit);
    report["regime"] = to_string(sol.regime.tag);
    report["p1_star"] = optional_json(sol.regime.p1_star);
    report["p2_star"] = optional_json(sol.regime.p2_star);
    report["x1_star"] = optional_json(sol.regime.x1_star);
    report["x2_star"] = optional_json(sol.regime.x2_star);
    report["no_trade_constant"] = optional_json(sol.regime.no_trade_constant);
    report["inaction_value"] = inaction;
    if (sol.regime.p1_star) {
        const double H = inputs.costs.lambda * *sol.regime.p1_star +
                         inputs.costs.psi + inputs.prefs.R;
        report["sale_threshold_at_p1"] =
            sale_threshold(sol.exit.c, H, inputs.costs.gamma);
    } else {
        report["sale_threshold_at_p1"] = nullptr;
    }
    return report;
}

int cmd_solve(const ScenarioOptions& opts, double demo_price,
              const std::string& out_path) {
    const ModelInputs inputs = build_inputs(opts);
    write_output(solve_report(inputs, demo_price).dump(2) + "\n", out_path);
    return kExitOk;
}

int cmd_classify(const ScenarioOptions& opts, const std::string& out_path) {
    const ModelInputs inputs = build_inputs(opts);
    json report;
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        report["regime"] = "ill_posed";
    } else {
        EntrySolution sol = solve_entry(inputs);
        report["regime"] = to_string(sol.regime.tag);
        report["p1_star"] = optional_json(sol.regime.p1_star);
        report["p2_star"] = optional_json(sol.regime.p2_star);
        report["no_trade_constant"] = optional_json(sol.regime.no_trade_constant);
    }
    write_output(report.dump(2) + "\n", out_path);
    return kExitOk;
}

// --- value ------------------------------------------------------------------

std::vector<double> parse_price_list(const std::string& list) {
    std::vector<double> prices;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double p = std::stod(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad price '" + item + "'");
        }
        if (!(p > 0.0)) throw std::invalid_argument("prices must be positive");
        prices.push_back(p);
    }
    if (prices.empty()) throw std::invalid_argument("empty price list");
    return prices;
}

bool in_purchase_region(double p, const EntryRegime& regime) {
    switch (regime.tag) {
        case RegimeTag::OneSided: return p >= *regime.p1_star;
        case RegimeTag::Interval:
            return p >= *regime.p1_star && p <= *regime.p2_star;
        default: return false;
    }
}

int cmd_value(const ScenarioOptions& opts, const std::string& price_list,
              const std::string& format, const std::string& out_path) {
    const ModelInputs inputs = build_inputs(opts);
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        throw std::invalid_argument("value: scenario is ill-posed");
    }
    EntrySolution sol = solve_entry(inputs);
    const std::vector<double> prices = parse_price_list(price_list);
    if (format == "json") {
        json rows = json::array();
        for (double p : prices) {
            rows.push_back({{"price", p},
                            {"v1", exit_conditional_value(p, inputs, sol.exit)},
                            {"g2", entry_payoff(p, sol)},
                            {"v2", entry_value(p, sol)},
                            {"region",
                             in_purchase_region(p, sol.regime) ? "buy" : "wait"}});
        }
        write_output(rows.dump(2) + "\n", out_path);
    } else {
        std::ostringstream os;
        os << "price,v1,g2,v2,region\n";
        for (double p : prices) {
            os << format_double(p) << ','
               << format_double(exit_conditional_value(p, inputs, sol.exit)) << ','
               << format_double(entry_payoff(p, sol)) << ','
               << format_double(entry_value(p, sol)) << ','
               << (in_purchase_region(p, sol.regime) ? "buy" : "wait") << '\n';
        }
        write_output(os.str(), out_path);
    }
    return kExitOk;
}

// --- sweep -------------------------------------------------------------------

int cmd_sweep(const ScenarioOptions& opts, const std::string& param_name,
              double from, double to, std::size_t steps, const std::string& format,
              const std::string& out_path) {
    const ModelInputs base = build_inputs(opts);
    const auto param = parse_sweep_parameter(param_name);
    if (!param) {
        throw std::invalid_argument("unknown sweep parameter '" + param_name +
                                    "' (use lambda, gamma, psi or R)");
    }
    SweepResult sweep = run_sweep(*param, from, to, steps, base);
    if (format == "json") {
        json report;
        report["parameter"] = to_string(*param);
        json records = json::array();
        for (const auto& r : sweep.records) {
            records.push_back({{"value", r.value},
                               {"regime", to_string(r.regime)},
                               {"p1_star", optional_json(r.p1_star)},
                               {"p2_star", optional_json(r.p2_star)},
                               {"no_trade_constant", optional_json(r.no_trade_constant)},
                               {"c", r.c},
                               {"critical_xi", r.critical_xi}});
        }
        report["records"] = records;
        json transitions = json::array();
        for (const auto& t : sweep.transitions) {
            transitions.push_back({{"location", t.location},
                                   {"below", to_string(t.below)},
                                   {"above", to_string(t.above)}});
        }
        report["transitions"] = transitions;
        write_output(report.dump(2) + "\n", out_path);
    } else {
        write_output(sweep_records_csv(sweep), out_path);
        // keep the CSV stream clean: transition markers go to stderr
        for (const auto& t : sweep.transitions) {
            std::cerr << "transition " << to_string(*param) << " = "
                      << format_double(t.location) << " " << to_string(t.below)
                      << " -> " << to_string(t.above) << "\n";
        }
    }
    return kExitOk;
}

// --- verify / oracle-check ----------------------------------------------------

std::vector<double> verification_prices(const EntrySolution& sol, int n) {
    const auto& regime = sol.regime;
    const double anchor =
        (sol.inputs.prefs.R + sol.inputs.costs.psi) / sol.inputs.costs.gamma;
    double lo = anchor / 20.0;
    double hi = anchor * 20.0;
    if (regime.p1_star && *regime.p1_star > 0.0) lo = *regime.p1_star / 20.0;
    if (regime.p2_star) {
        hi = *regime.p2_star * 20.0;
    } else if (regime.p1_star && *regime.p1_star > 0.0) {
        hi = *regime.p1_star * 20.0;
    }
    std::vector<double> prices(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) prices[i] = lo * std::exp(step * i);
    return prices;
}

json check_json(const char* name, double tolerance, double observed, bool pass) {
    return {{"check", name},
            {"tolerance", tolerance},
            {"observed", observed},
            {"pass", pass}};
}

int run_checks(const ScenarioOptions& opts, int samples, std::size_t grid_n,
               double corrupt_factor, bool include_strategy_checks,
               const std::string& out_path) {
    const ModelInputs inputs = build_inputs(opts);
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        throw std::invalid_argument("verify: scenario is ill-posed");
    }
    ExitSolution exit =
        maybe_corrupt(solve_c(inputs.prefs, inputs.market.beta), corrupt_factor);
    EntrySolution sol{classify_regime(inputs, exit), exit, inputs};

    json checks = json::array();
    bool all_pass = true;
    auto add = [&](json j) {
        all_pass = all_pass && j["pass"].get<bool>();
        checks.push_back(std::move(j));
    };
    const std::vector<double> prices = verification_prices(sol, samples);

    if (include_strategy_checks) {
        double worst_rel = 0.0;
        double worst_price = prices.front();
        for (double p : prices) {
            const double v2 = entry_value(p, sol);
            const double attained =
                evaluate_strategy_exact(p, optimal_strategy(p, sol), inputs, exit)
                    .expected_utility;
            const double rel =
                std::fabs(attained - v2) / std::max(std::fabs(v2), 1e-300);
            if (rel > worst_rel) {
                worst_rel = rel;
                worst_price = p;
            }
        }
        json c1 = check_json("exact_valuation_equality", 1e-9, worst_rel,
                             worst_rel <= 1e-9);
        c1["worst_price"] = worst_price;
        add(std::move(c1));

        double worst_violation = -1e300;
        double worst_price2 = prices.front();
        for (double p : prices) {
            DominanceReport rep = perturbation_dominance_check(p, sol, 21);
            if (rep.max_violation > worst_violation) {
                worst_violation = rep.max_violation;
                worst_price2 = p;
            }
        }
        json c2 = check_json("perturbation_dominance", 1e-12, worst_violation,
                             worst_violation <= 1e-12);
        c2["worst_price"] = worst_price2;
        add(std::move(c2));
    }

    OracleGrid grid;
    grid.n = grid_n;
    {
        // exit oracle against the closed form, around a mid-scale reference point
        const double H = inputs.prefs.R + inputs.costs.psi + inputs.costs.lambda;
        const double trigger = sale_threshold(exit.c, H, inputs.costs.gamma);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double p =
                trigger * std::exp(-4.0 + 6.0 * static_cast<double>(i) /
                                              std::max(1, samples - 1));
            const double closed = exit_value(p, H, inputs, exit);
            const double rel = std::fabs(oracle_exit_value(p, H, inputs, exit, grid) -
                                         closed) /
                               std::max(std::fabs(closed), 1e-300);
            worst = std::max(worst, rel);
        }
        add(check_json("oracle_exit_value", 1e-3, worst, worst <= 1e-3));
    }
    {
        // entry oracle inside its comparison window
        double hi_window;
        if (sol.regime.tag == RegimeTag::Interval) {
            hi_window = *sol.regime.p2_star * std::pow(2.0, 1.0 / inputs.market.beta);
        } else if (sol.regime.p1_star && *sol.regime.p1_star > 0.0) {
            hi_window = *sol.regime.p1_star *
                        std::pow(100.0, 1.0 / inputs.market.beta);
        } else {
            hi_window = 100.0 * (inputs.prefs.R + inputs.costs.psi) /
                        inputs.costs.gamma;
        }
        const double lo_window = hi_window * 1e-3;
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double p =
                lo_window * std::exp(std::log(hi_window / lo_window) *
                                     static_cast<double>(i) /
                                     std::max(1, samples - 1));
            const double closed = entry_value(p, sol);
            const double rel =
                std::fabs(oracle_entry_value(p, sol, grid) - closed) /
                std::max(std::fabs(closed), 1e-300);
            worst = std::max(worst, rel);
        }
        add(check_json("oracle_entry_value", 1e-3, worst, worst <= 1e-3));
    }
    {
        OracleGrid bgrid = grid;
        bgrid.theta_max_multiplier = 1e4;
        OracleBoundaries ob = oracle_boundaries(sol, bgrid);
        bool pass = true;
        double worst = 0.0;
        if (sol.regime.tag == RegimeTag::NoTrade) {
            pass = ob.no_trade;
        } else {
            pass = !ob.no_trade && ob.p1.has_value();
            if (pass && *sol.regime.p1_star > 0.0) {
                const double err = std::fabs(*ob.p1 - *sol.regime.p1_star);
                worst = std::max(worst, err / std::max(ob.grid_cell_at_p1, 1e-300));
                pass = err <= ob.grid_cell_at_p1;
            }
            if (pass && sol.regime.tag == RegimeTag::Interval) {
                pass = ob.p2.has_value();
                if (pass) {
                    const double err = std::fabs(*ob.p2 - *sol.regime.p2_star);
                    worst =
                        std::max(worst, err / std::max(ob.grid_cell_at_p2, 1e-300));
                    pass = err <= ob.grid_cell_at_p2;
                }
            }
            if (sol.regime.tag == RegimeTag::OneSided && ob.p2.has_value()) {
                pass = false;  // the contact ray must reach the grid edge
            }
        }
        json c = check_json("oracle_boundaries_within_one_cell", 1.0, worst, pass);
        c["oracle_p1"] = ob.p1 ? json(*ob.p1) : json(nullptr);
        c["oracle_p2"] = ob.p2 ? json(*ob.p2) : json(nullptr);
        add(std::move(c));
    }

    json report;
    report["inputs"] = inputs_json(inputs);
    report["regime"] = to_string(sol.regime.tag);
    if (corrupt_factor > 0.0 && corrupt_factor != 1.0) {
        report["corrupt_c_factor"] = corrupt_factor;
    }
    report["checks"] = checks;
    report["pass"] = all_pass;
    write_output(report.dump(2) + "\n", out_path);
    return all_pass ? kExitOk : kExitVerificationFailed;
}

// --- simulate -------------------------------------------------------------------

int cmd_simulate(const ScenarioOptions& opts, double price, std::uint64_t n_paths,
                 double horizon, std::uint64_t seed, unsigned workers,
                 std::uint32_t n_steps, const std::string& out_path) {
    const ModelInputs inputs = build_inputs(opts);
    if (classify_wellposedness(inputs) == WellPosedness::IllPosed) {
        throw std::invalid_argument("simulate: scenario is ill-posed");
    }
    EntrySolution sol = solve_entry(inputs);
    TradingStrategy strategy = optimal_strategy(price, sol);
    const double exact =
        evaluate_strategy_exact(price, strategy, inputs, sol.exit).expected_utility;
    McEstimate est = simulate_strategy_mc(price, strategy, inputs, sol.exit, horizon,
                                          n_paths, seed, workers, n_steps);
    json report;
    report["inputs"] = inputs_json(inputs);
    report["price"] = price;
    report["regime"] = to_string(sol.regime.tag);
    const char* kind = "never";
    switch (strategy.buy.kind) {
        case BuyRule::Kind::Immediate: kind = "immediate"; break;
        case BuyRule::Kind::UpCross: kind = "buy_at_upcross"; break;
        case BuyRule::Kind::DownCross: kind = "buy_at_downcross"; break;
        case BuyRule::Kind::Never: kind = "never"; break;
    }
    report["strategy"] = {{"buy_rule", kind},
                          {"buy_level", strategy.buy.level},
                          {"sale_multiple", sol.exit.c}};
    report["n_paths"] = n_paths;
    report["horizon"] = horizon;
    report["seed"] = seed;
    report["estimate"] = est.mean;
    report["std_error"] = est.std_error;
    report["exact_value"] = exact;
    report["z_score"] =
        est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0;
    report["fraction_bought"] = est.fraction_bought;
    report["fraction_sold"] = est.fraction_sold;
    report["residual_mass"] = est.residual_mass;
    write_output(report.dump(2) + "\n", out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "prospect: entry/exit strategy solver for a loss-averse speculative "
        "trader facing proportional and fixed transaction costs"};
    app.require_subcommand(1);

    ScenarioOptions scenario;
    std::string out_path;
    std::string format = "csv";
    double price = 1.0;
    std::string price_list;
    std::string sweep_param;
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    std::size_t sweep_steps = 200;
    int samples = 20;
    std::size_t grid_n = 100000;
    double corrupt_c = 0.0;
    std::uint64_t n_paths = 100000;
    double horizon = 150.0;
    std::uint64_t seed = 42;
    unsigned workers = 4;
    std::uint32_t n_steps = 4096;

    auto* solve = app.add_subcommand("solve", "solve a scenario and report the rule");
    add_scenario_options(solve, scenario);
    solve->add_option("--price", price, "start price for the ill-posed demo");
    solve->add_option("--out", out_path, "write the report here instead of stdout");

    auto* classify = app.add_subcommand("classify", "regime classification only");
    add_scenario_options(classify, scenario);
    classify->add_option("--out", out_path);

    auto* value = app.add_subcommand("value", "tabulate v1, g2, v2 at given prices");
    add_scenario_options(value, scenario);
    value->add_option("--prices", price_list, "comma-separated positive prices")
        ->required();
    value->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    value->add_option("--out", out_path);

    auto* sweep = app.add_subcommand("sweep", "comparative statics along one parameter");
    add_scenario_options(sweep, scenario);
    sweep->add_option("--param", sweep_param, "one of lambda, gamma, psi, R")
        ->required();
    sweep->add_option("--from", sweep_from)->required();
    sweep->add_option("--to", sweep_to)->required();
    sweep->add_option("--steps", sweep_steps);
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", out_path);

    auto* verify = app.add_subcommand(
        "verify", "exact valuation, dominance and oracle checks; exit 2 on failure");
    add_scenario_options(verify, scenario);
    verify->add_option("--samples", samples, "prices sampled per check");
    verify->add_option("--grid", grid_n, "oracle grid points");
    verify->add_option("--corrupt-c", corrupt_c)->group("");  // test hook, hidden
    verify->add_option("--out", out_path);

    auto* oracle = app.add_subcommand(
        "oracle-check", "grid concave-majorant reconstruction checks only");
    add_scenario_options(oracle, scenario);
    oracle->add_option("--samples", samples);
    oracle->add_option("--grid", grid_n);
    oracle->add_option("--out", out_path);

    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo the optimal rule and compare to the exact value");
    add_scenario_options(simulate, scenario);
    simulate->add_option("--price", price, "start price");
    simulate->add_option("--paths", n_paths);
    simulate->add_option("--horizon", horizon);
    simulate->add_option("--seed", seed);
    simulate->add_option("--workers", workers)->group("");
    simulate->add_option("--steps", n_steps)->group("");
    simulate->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(scenario, price, out_path);
        if (classify->parsed()) return cmd_classify(scenario, out_path);
        if (value->parsed()) return cmd_value(scenario, price_list, format, out_path);
        if (sweep->parsed()) {
            return cmd_sweep(scenario, sweep_param, sweep_from, sweep_to, sweep_steps,
                             format, out_path);
        }
        if (verify->parsed()) {
            return run_checks(scenario, samples, grid_n, corrupt_c, true, out_path);
        }
        if (oracle->parsed()) {
            return run_checks(scenario, samples, grid_n, 0.0, false, out_path);
        }
        if (simulate->parsed()) {
            return cmd_simulate(scenario, price, n_paths, horizon, seed, workers,
                                n_steps, out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
    return kExitInvalidInput;
}
