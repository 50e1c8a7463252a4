#include "prospect/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "prospect/scenario.hpp"

namespace prospect {

const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Lambda: return "lambda";
        case SweepParameter::Gamma: return "gamma";
        case SweepParameter::Psi: return "psi";
        case SweepParameter::AspirationR: return "R";
    }
    return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(const std::string& name) {
    if (name == "lambda") return SweepParameter::Lambda;
    if (name == "gamma") return SweepParameter::Gamma;
    if (name == "psi") return SweepParameter::Psi;
    if (name == "R") return SweepParameter::AspirationR;
    return std::nullopt;
}

ModelInputs with_parameter(const ModelInputs& base, SweepParameter parameter,
                           double value) {
    double lambda = base.costs.lambda;
    double gamma = base.costs.gamma;
    double psi = base.costs.psi;
    double R = base.prefs.R;
    switch (parameter) {
        case SweepParameter::Lambda: lambda = value; break;
        case SweepParameter::Gamma: gamma = value; break;
        case SweepParameter::Psi: psi = value; break;
        case SweepParameter::AspirationR: R = value; break;
    }
    return {Preferences(base.prefs.alpha, base.prefs.k, R), base.market,
            TransactionCosts(lambda, gamma, psi)};
}

namespace {

SweepRecord evaluate_point(SweepParameter parameter, double value,
                           const ModelInputs& base, const ExitSolution& exit) {
    const ModelInputs inputs = with_parameter(base, parameter, value);
    const EntryRegime regime = classify_regime(inputs, exit);
    SweepRecord rec{};
    rec.value = value;
    rec.regime = regime.tag;
    rec.p1_star = regime.p1_star;
    rec.p2_star = regime.p2_star;
    rec.no_trade_constant = regime.no_trade_constant;
    rec.c = exit.c;
    rec.critical_xi = critical_xi(inputs.prefs, inputs.market.beta, exit);
    return rec;
}

}  // namespace

SweepResult run_sweep(SweepParameter parameter, double lo, double hi,
                      std::size_t steps, const ModelInputs& base,
                      unsigned n_workers) {
    if (steps < 1) throw std::invalid_argument("run_sweep: need at least one step");
    if (!(lo <= hi)) throw std::invalid_argument("run_sweep: empty range");
    // Validate the endpoints early so a bad range fails before any work.
    (void)with_parameter(base, parameter, lo);
    (void)with_parameter(base, parameter, hi);

    // The gain-exit multiple depends only on (alpha, beta, k); none of the
    // sweepable parameters touch it.
    const ExitSolution exit = solve_c(base.prefs, base.market.beta);

    SweepResult result{parameter, std::vector<SweepRecord>(steps), {}};
    auto grid_value = [&](std::size_t i) {
        if (steps == 1) return lo;
        return lo + (hi - lo) * static_cast<double>(i) /
                   static_cast<double>(steps - 1);
    };

    if (n_workers == 0) {
        n_workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(n_workers, steps));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = steps / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = (w + 1 == workers) ? steps : begin + chunk;
        pool.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                result.records[i] = evaluate_point(parameter, grid_value(i), base, exit);
            }
        });
    }
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i + 1 < steps; ++i) {
        if (result.records[i].regime == result.records[i + 1].regime) continue;
        const RegimeTag below = result.records[i].regime;
        const RegimeTag above = result.records[i + 1].regime;
        double a = grid_value(i);
        double b = grid_value(i + 1);
        while (b - a > 1e-6) {
            const double mid = 0.5 * (a + b);
            if (classify_regime(with_parameter(base, parameter, mid), exit).tag ==
                below) {
                a = mid;
            } else {
                b = mid;
            }
        }
        result.transitions.push_back({0.5 * (a + b), below, above});
    }
    return result;
}

MonotonicityVerdict check_monotonicity(const SweepResult& sweep,
                                       const std::string& boundary,
                                       int expected_direction, double tol) {
    if (boundary != "p1_star" && boundary != "p2_star") {
        throw std::invalid_argument("check_monotonicity: unknown boundary " + boundary);
    }
    const bool first = boundary == "p1_star";
    MonotonicityVerdict verdict{sweep.parameter, boundary, expected_direction,
                                true, 0.0};
    const auto& recs = sweep.records;
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const auto& lo = first ? recs[i].p1_star : recs[i].p2_star;
        const auto& hi = first ? recs[i + 1].p1_star : recs[i + 1].p2_star;
        if (!lo || !hi) continue;
        const double step = *hi - *lo;
        const double violation = expected_direction > 0 ? -step : step;
        verdict.max_violation = std::max(verdict.max_violation, violation);
    }
    verdict.holds = verdict.max_violation <= tol;
    return verdict;
}

namespace {

std::string field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::optional<RegimeTag> parse_regime(const std::string& s) {
    if (s == "one_sided") return RegimeTag::OneSided;
    if (s == "interval") return RegimeTag::Interval;
    if (s == "no_trade") return RegimeTag::NoTrade;
    if (s == "ill_posed") return RegimeTag::IllPosed;
    return std::nullopt;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string sweep_records_csv(const SweepResult& sweep) {
    std::ostringstream os;
    os << "parameter,value,regime,p1_star,p2_star,no_trade_constant,c,critical_xi\n";
    for (const auto& r : sweep.records) {
        os << to_string(sweep.parameter) << ',' << format_double(r.value) << ','
           << to_string(r.regime) << ',' << field(r.p1_star) << ','
           << field(r.p2_star) << ',' << field(r.no_trade_constant) << ','
           << format_double(r.c) << ',' << format_double(r.critical_xi) << '\n';
    }
    return os.str();
}

std::vector<SweepRecord> parse_sweep_records_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line)) {
        throw std::invalid_argument("parse_sweep_records_csv: empty input");
    }
    std::vector<SweepRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 8) {
            throw std::invalid_argument("parse_sweep_records_csv: bad row");
        }
        SweepRecord rec{};
        rec.value = std::stod(cells[1]);
        const auto regime = parse_regime(cells[2]);
        if (!regime) throw std::invalid_argument("parse_sweep_records_csv: bad regime");
        rec.regime = *regime;
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        rec.p1_star = opt(cells[3]);
        rec.p2_star = opt(cells[4]);
        rec.no_trade_constant = opt(cells[5]);
        rec.c = std::stod(cells[6]);
        rec.critical_xi = std::stod(cells[7]);
        records.push_back(rec);
    }
    return records;
}

}  // namespace prospect
