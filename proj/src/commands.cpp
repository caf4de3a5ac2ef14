#include "regrowth/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "regrowth/euler.hpp"
#include "regrowth/io.hpp"
#include "regrowth/markov.hpp"
#include "regrowth/plot.hpp"
#include "regrowth/stationary.hpp"

namespace regrowth {

namespace fs = std::filesystem;

namespace {

const char* const kRegimeColors[] = {"red", "green", "blue", "orange", "purple", "brown", "teal", "magenta"};

std::string num(double v) { return format_number(v); }

double parse_num(const std::string& s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw Error(ErrorCode::MissingArtifact, "malformed number '" + s + "'");
    }
    return v;
}

std::string idx(std::size_t i) { return std::to_string(i); }

ArtifactMeta meta_for(const RunConfig& config) {
    return {config_hash(config), solve_hash(config), config.simulation.seed, {}};
}

std::string value_csv(const RunConfig& config, const GriddedFunction& v) {
    std::vector<CsvRow> rows;
    for (std::size_t t = 0; t < v.n_regimes(); ++t) {
        for (std::size_t i = 0; i < v.grid.count(); ++i) rows.push_back({num(v.grid[i]), idx(t + 1), num(v.at(i, t))});
    }
    return render_csv(meta_for(config), {"x", "regime", "V"}, rows);
}

std::string policy_csv(const RunConfig& config, const GriddedFunction& phi) {
    std::vector<CsvRow> rows;
    for (std::size_t t = 0; t < phi.n_regimes(); ++t) {
        for (std::size_t i = 0; i < phi.grid.count(); ++i) {
            const double x = phi.grid[i];
            const double y = phi.at(i, t);
            rows.push_back({num(x), idx(t + 1), num(y), x > 0.0 ? num(y / x) : "", num(x - y)});
        }
    }
    return render_csv(meta_for(config), {"x", "regime", "phi_star", "invest_ratio", "c_star"}, rows);
}

std::string report_csv(const RunConfig& config, const SolveReport& report) {
    ArtifactMeta meta = meta_for(config);
    meta.extra = {{"iterations", idx(static_cast<std::size_t>(report.iterations))},
                  {"converged", report.converged ? "true" : "false"}};
    std::vector<CsvRow> rows;
    for (std::size_t k = 0; k < report.sup_w_deltas.size(); ++k) {
        rows.push_back({idx(k + 1), num(report.sup_w_deltas[k]), k == 0 ? "" : num(report.ratios[k - 1])});
    }
    return render_csv(meta, {"iteration", "sup_w_delta", "ratio"}, rows);
}

bool has_baseline(const RunConfig& config) {
    return config.model.baseline_regime > 0 && config.model.omega.size() > 1;
}

/// Returns false after printing the violations when the run must stop.
bool assumptions_ok(const ModelSpec& spec, const CommandOptions& options, std::ostream& log) {
    const AssumptionReport report = check_assumptions(spec);
    if (report.f2_holds() && report.d1_holds() && report.d2_holds()) return true;
    log << (options.force ? "warning" : "error") << ": model assumptions fail (run `check` for details)\n";
    return options.force;
}

Solution obtain_solution(const fs::path& dir, const RunConfig& config, const ModelSpec& spec, std::ostream& log) {
    if (auto loaded = load_solution(dir, config, spec)) {
        log << "using solve outputs in " << dir.string() << "\n";
        return *std::move(loaded);
    }
    log << "solving (no matching solve outputs in " << dir.string() << ")\n";
    return solve_value_function(spec, config.grid(), config.search(), config.rule(), config.stop());
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(v.size() - 1)));
    return v[k];
}

std::vector<Series> regime_series(const CsvFile& file, const std::string& column, bool skip_zero,
                                  const std::string& label_prefix) {
    const auto cx = file.column("x");
    const auto cr = file.column("regime");
    const auto cv = file.column(column);
    std::vector<Series> out;
    for (const auto& row : file.rows) {
        if (row.size() <= std::max({cx, cr, cv})) throw Error(ErrorCode::MissingArtifact, "truncated row");
        const auto r = static_cast<std::size_t>(parse_num(row[cr]));
        if (r == 0) throw Error(ErrorCode::MissingArtifact, "regimes are numbered from 1");
        const double x = parse_num(row[cx]);
        if (skip_zero && x == 0.0) continue;
        if (out.size() < r) out.resize(r);
        out[r - 1].x.push_back(x);
        out[r - 1].y.push_back(row[cv].empty() ? std::nan("") : parse_num(row[cv]));
    }
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r].label = label_prefix + std::to_string(r + 1);
        out[r].color = kRegimeColors[r % std::size(kRegimeColors)];
    }
    return out;
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigError:
        case ErrorCode::MissingArtifact:
            return kExitConfig;
        case ErrorCode::InfiniteMoment:
            return kExitAssumption;
        default:
            return kExitNumeric;
    }
}

std::optional<Solution> load_solution(const fs::path& directory, const RunConfig& config, const ModelSpec& spec,
                                      const std::string& prefix) {
    const fs::path value_path = directory / (prefix + "value.csv");
    const fs::path policy_path = directory / (prefix + "policy.csv");
    if (!fs::exists(value_path) || !fs::exists(policy_path)) return std::nullopt;
    const CsvFile value_file = read_csv(value_path);
    const CsvFile policy_file = read_csv(policy_path);
    const std::string expected = solve_hash(config);
    if (value_file.meta.count("solve_hash") == 0 || value_file.meta.at("solve_hash") != expected) return std::nullopt;
    if (policy_file.meta.count("solve_hash") == 0 || policy_file.meta.at("solve_hash") != expected) {
        return std::nullopt;
    }

    const IncomeGrid grid = config.grid();
    const std::size_t n = grid.count();
    const std::size_t m = spec.n_regimes();
    if (value_file.rows.size() != n * m || policy_file.rows.size() != n * m) return std::nullopt;
    Solution s{GriddedFunction(grid, m), GriddedFunction(grid, m), {}};
    const auto fill = [&](const CsvFile& file, const std::string& column, GriddedFunction& out) {
        const auto cx = file.column("x");
        const auto cv = file.column(column);
        for (std::size_t k = 0; k < file.rows.size(); ++k) {
            const std::size_t t = k / n;
            const std::size_t i = k % n;
            if (parse_num(file.rows[k][cx]) != grid[i]) return false;
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = parse_num(file.rows[k][cv]);
        }
        return true;
    };
    if (!fill(value_file, "V", s.value) || !fill(policy_file, "phi_star", s.policy)) return std::nullopt;
    s.report.converged = true;
    return s;
}

int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    const AssumptionReport a = check_assumptions(spec);
    const auto yes = [](bool b) { return b ? "yes" : "no"; };
    log << "d             " << num(a.d) << "\n";
    log << "x_bar         " << num(a.x_bar) << "\n";
    log << "alpha         " << num(a.alpha) << "\n";
    log << "alpha*beta    " << num(a.alpha_beta) << "   growth condition holds: " << yes(a.f2_holds()) << "\n";
    log << "D1 witness    " << num(a.d1_value) << "   holds: " << yes(a.d1_holds()) << "\n";
    log << "lambda2       " << num(a.lambda2) << "\n";
    log << "kappa2        " << num(a.kappa2) << "   D2 holds: " << yes(a.d2_holds()) << "\n";
    log << "irreducible   " << yes(a.d3_irreducible) << "\n";
    log << "minimal r     " << num(minimal_weight_offset(spec)) << "\n";

    const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    std::vector<CsvRow> rows{
        {"d", num(a.d), ""},
        {"x_bar", num(a.x_bar), ""},
        {"alpha", num(a.alpha), ""},
        {"alpha_beta", num(a.alpha_beta), flag(a.f2_holds())},
        {"d1_witness", num(a.d1_value), flag(a.d1_holds())},
        {"lambda2", num(a.lambda2), flag(a.d2_holds())},
        {"kappa2", num(a.kappa2), flag(a.d2_holds())},
        {"d3_irreducible", a.d3_irreducible ? "1" : "0", flag(a.d3_irreducible)},
        {"minimal_r", num(minimal_weight_offset(spec)), ""},
    };
    ArtifactSet files(options.out_dir);
    files.add("assumptions.csv", render_csv(meta_for(config), {"quantity", "value", "holds"}, rows));
    files.commit();

    bool ok = true;
    if (!a.f2_holds()) {
        log << "violation: growth condition alpha*beta < 1 fails; raise r to at least "
            << num(minimal_weight_offset(spec)) << "\n";
        ok = false;
    }
    if (!a.d1_holds()) {
        log << "violation: D1 lower-tail condition fails\n";
        ok = false;
    }
    if (!a.d2_holds()) {
        log << "violation: D2 mean-growth bound fails\n";
        ok = false;
    }
    return ok ? kExitOk : kExitAssumption;
}

int cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    if (!assumptions_ok(spec, options, log)) return kExitAssumption;
    const IncomeGrid grid = config.grid();

    const Solution s = solve_value_function(spec, grid, config.search(), config.rule(), config.stop());
    log << "solved: " << s.report.iterations << " sweeps, converged=" << (s.report.converged ? "true" : "false");
    if (!s.report.sup_w_deltas.empty()) log << ", last w-norm step " << num(s.report.sup_w_deltas.back());
    log << "\n";

    ArtifactSet files(options.out_dir);
    files.add("value.csv", value_csv(config, s.value));
    files.add("policy.csv", policy_csv(config, s.policy));
    files.add("report.csv", report_csv(config, s.report));
    if (has_baseline(config)) {
        const Solution b =
            solve_value_function(config.baseline_spec(), grid, config.search(), config.rule(), config.stop());
        log << "baseline (regime " << config.model.baseline_regime << " alone): " << b.report.iterations
            << " sweeps\n";
        files.add("baseline_value.csv", value_csv(config, b.value));
        files.add("baseline_policy.csv", policy_csv(config, b.policy));
        files.add("baseline_report.csv", report_csv(config, b.report));
    }
    for (const auto& path : files.commit()) log << "wrote " << path.string() << "\n";
    if (config.output.wants("svg")) return cmd_plot(config, options, log);
    return kExitOk;
}

int cmd_euler(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    if (!assumptions_ok(spec, options, log)) return kExitAssumption;
    const Solution s = obtain_solution(options.out_dir, config, spec, log);
    const QuadratureRule rule = config.rule();
    const auto rows = euler_profile(s.value, s.policy, spec, config.numerics.y_count, rule);

    std::vector<CsvRow> table;
    std::vector<double> kept;
    for (const auto& r : rows) {
        table.push_back({num(r.x), idx(r.theta + 1), r.excluded ? "" : num(r.residual),
                         r.excluded ? "" : num(r.relative), r.excluded ? "1" : "0"});
        if (!r.excluded) kept.push_back(r.relative);
    }
    ArtifactSet files(options.out_dir);
    files.add("residuals.csv",
              render_csv(meta_for(config), {"x", "regime", "residual", "relative_residual", "excluded"}, table));
    for (const auto& path : files.commit()) log << "wrote " << path.string() << "\n";

    log << "interior nodes " << kept.size() << " of " << rows.size() << "\n";
    if (kept.empty()) throw Error(ErrorCode::EmptySample, "no interior Euler nodes");
    log << "relative residual: median " << num(median_relative_residual(rows)) << ", p90 " << num(quantile(kept, 0.9))
        << ", max " << num(quantile(kept, 1.0)) << "\n";
    const EnvelopeReport env = envelope_check(s.value, s.policy, spec);
    log << "envelope deviation (x >= 1): " << num(env.max()) << "\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    if (!assumptions_ok(spec, options, log)) return kExitAssumption;
    const Solution s = obtain_solution(options.out_dir, config, spec, log);
    const SimulationConfig sim = config.simulation_config();
    const SimulationPath path = simulate_chain(s.policy, spec, sim);
    const EmpiricalDistribution dist =
        empirical_distribution(path, sim.burn_in, config.simulation.bins, spec.n_regimes());
    const DriftReport drift = drift_check(s.value, s.policy, spec, config.numerics.y_count, config.rule());

    const auto [first, second] = weight_half_means(s.value, s.policy, spec, path, sim.burn_in);

    const ArtifactMeta meta = meta_for(config);
    ArtifactSet files(options.out_dir);
    std::vector<CsvRow> hist;
    for (Eigen::Index t = 0; t < dist.frequency.cols(); ++t) {
        for (Eigen::Index b = 0; b < dist.frequency.rows(); ++b) {
            hist.push_back({num(dist.edges[static_cast<std::size_t>(b)]), num(dist.edges[static_cast<std::size_t>(b) + 1]),
                            idx(static_cast<std::size_t>(t) + 1), num(dist.frequency(b, t))});
        }
    }
    files.add("histogram.csv", render_csv(meta, {"bin_lo", "bin_hi", "regime", "frequency"}, hist));

    std::vector<CsvRow> regimes;
    const Eigen::VectorXd pi = spec.chain.irreducible() ? stationary_distribution(spec.chain)
                                                        : Eigen::VectorXd::Constant(dist.regime_marginal.size(), NAN);
    for (Eigen::Index t = 0; t < dist.regime_marginal.size(); ++t) {
        regimes.push_back({idx(static_cast<std::size_t>(t) + 1), num(dist.regime_marginal(t)), num(pi(t))});
    }
    files.add("regimes.csv", render_csv(meta, {"regime", "empirical", "stationary"}, regimes));

    ArtifactMeta drift_meta = meta;
    drift_meta.extra = {{"satisfied", drift.satisfied ? "true" : "false"},
                        {"lambda_hat", num(drift.lambda_hat)},
                        {"kappa_hat", num(drift.kappa_hat)},
                        {"worst_x", num(drift.worst_x)},
                        {"worst_regime", idx(drift.worst_theta + 1)},
                        {"w_mean_first_half", num(first)},
                        {"w_mean_second_half", num(second)}};
    std::vector<CsvRow> drift_rows;
    for (const auto& r : drift.rows) {
        drift_rows.push_back({num(r.x), idx(r.theta + 1), num(r.w), r.excluded ? "" : num(r.expectation),
                              r.excluded ? "1" : "0"});
    }
    files.add("drift.csv", render_csv(drift_meta, {"x", "regime", "W", "expected_W_next", "excluded"}, drift_rows));

    if (config.simulation.write_path) {
        std::vector<CsvRow> rows;
        rows.reserve(path.size());
        for (std::size_t k = 0; k < path.size(); ++k) rows.push_back({idx(k), num(path.x[k]), idx(path.theta[k] + 1)});
        files.add("path.csv", render_csv(meta, {"k", "x", "regime"}, rows));
    }
    for (const auto& p : files.commit()) log << "wrote " << p.string() << "\n";

    log << "regime marginals:";
    for (Eigen::Index t = 0; t < dist.regime_marginal.size(); ++t) log << " " << num(dist.regime_marginal(t));
    log << "\ndrift: satisfied=" << (drift.satisfied ? "true" : "false") << " lambda_hat=" << num(drift.lambda_hat)
        << " kappa_hat=" << num(drift.kappa_hat) << "\n";
    log << "mean W over the two halves: " << num(first) << ", " << num(second) << "\n";
    return kExitOk;
}

int cmd_plot(const RunConfig& config, const CommandOptions& options, std::ostream& log) {
    const fs::path dir = options.out_dir;
    const CsvFile value = read_csv(dir / "value.csv");
    const CsvFile policy = read_csv(dir / "policy.csv");
    const std::string note = "config_hash=" + config_hash(config) + " regrowth " + version();

    LineChart vf{"Value function", "income x", "V(x, regime)", regime_series(value, "V", false, "regime "), note};
    LineChart ir{"Optimal investment ratio", "income x", "phi*(x, regime) / x",
                 regime_series(policy, "invest_ratio", true, "regime "), note};
    if (has_baseline(config)) {
        const CsvFile bv = read_csv(dir / "baseline_value.csv");
        const CsvFile bp = read_csv(dir / "baseline_policy.csv");
        const std::string label = "baseline " + std::to_string(config.model.baseline_regime);
        for (auto [chart, file, column, skip] : {std::tuple{&vf, &bv, "V", false},
                                                 std::tuple{&ir, &bp, "invest_ratio", true}}) {
            auto series = regime_series(*file, column, skip, "");
            if (series.empty()) throw Error(ErrorCode::MissingArtifact, "baseline file has no rows");
            series.front().label = label;
            series.front().color = "black";
            series.front().dashed = true;
            chart->series.push_back(series.front());
        }
    }
    ArtifactSet files(dir);
    files.add("value_function.svg", render_svg(vf));
    files.add("investment_ratio.svg", render_svg(ir));
    for (const auto& p : files.commit()) log << "wrote " << p.string() << "\n";
    return kExitOk;
}

}  // namespace regrowth
