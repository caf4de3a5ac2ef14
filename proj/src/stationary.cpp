#include "regrowth/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "regrowth/error.hpp"
#include "regrowth/euler.hpp"
#include "regrowth/parallel.hpp"

namespace regrowth {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream)};
    return std::mt19937_64(seq);
}

double open_uniform(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

Regime draw_regime(const RegimeChain& chain, Regime from, double u) {
    const std::size_t n = chain.n_states();
    double cumulative = 0.0;
    for (std::size_t to = 0; to + 1 < n; ++to) {
        cumulative += chain.probability(from, to);
        if (u < cumulative) return to;
    }
    // Rounding in the cumulative sum must not select a zero-probability tail.
    for (std::size_t to = n; to-- > 0;) {
        if (chain.probability(from, to) > 0.0) return to;
    }
    return from;
}

}  // namespace

void SimulationConfig::validate(std::size_t n_regimes) const {
    if (horizon == 0 || burn_in >= horizon) {
        throw Error(ErrorCode::ConfigError, "burn_in must be smaller than the horizon");
    }
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw Error(ErrorCode::ConfigError, "x0 must be positive");
    if (theta0 >= n_regimes) throw Error(ErrorCode::ConfigError, "theta0 is not a regime");
}

SimulationPath simulate_chain(const GriddedFunction& policy, const ModelSpec& spec, const SimulationConfig& config) {
    config.validate(spec.n_regimes());
    auto regimes = make_stream(config.seed, Stream::Regime);
    auto shocks = make_stream(config.seed, Stream::Shock);

    SimulationPath path;
    path.x.resize(config.horizon);
    path.theta.resize(config.horizon);
    double x = config.x0;
    Regime theta = config.theta0;
    for (std::size_t k = 0; k < config.horizon; ++k) {
        path.x[k] = x;
        path.theta[k] = theta;
        const double y = std::clamp(evaluate_value(policy, x, theta), 0.0, x);
        const double z = spec.shock.inverse_cdf(open_uniform(shocks));
        x = production(spec, theta, y, z);
        theta = draw_regime(spec.chain, theta, open_uniform(regimes));
    }
    return path;
}

EmpiricalDistribution tabulate(const SimulationPath& path, std::size_t first, std::size_t last,
                               std::vector<double> edges, std::size_t n_regimes) {
    last = std::min(last, path.size());
    if (first >= last) throw Error(ErrorCode::EmptySample, "no samples in the requested window");
    if (edges.size() < 2) throw Error(ErrorCode::DomainError, "a histogram needs at least one bin");
    const std::size_t n_bins = edges.size() - 1;

    EmpiricalDistribution out;
    out.frequency = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_bins), static_cast<Eigen::Index>(n_regimes));
    for (std::size_t k = first; k < last; ++k) {
        const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, path.x[k]);
        const auto bin = static_cast<Eigen::Index>(it - (edges.begin() + 1));
        out.frequency(bin, static_cast<Eigen::Index>(path.theta[k])) += 1.0;
    }
    out.samples = last - first;
    out.frequency /= static_cast<double>(out.samples);
    out.regime_marginal = out.frequency.colwise().sum().transpose();
    out.edges = std::move(edges);
    return out;
}

EmpiricalDistribution empirical_distribution(const SimulationPath& path, std::size_t burn_in, std::size_t n_bins,
                                             std::size_t n_regimes) {
    if (burn_in >= path.size()) throw Error(ErrorCode::EmptySample, "path is not longer than the burn-in");
    if (n_bins == 0) throw Error(ErrorCode::DomainError, "n_bins must be positive");
    const auto [lo, hi] = std::minmax_element(path.x.begin() + static_cast<std::ptrdiff_t>(burn_in), path.x.end());
    const double width = *hi > *lo ? (*hi - *lo) / static_cast<double>(n_bins) : 1.0;
    std::vector<double> edges(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b) edges[b] = *lo + width * static_cast<double>(b);
    if (*hi > *lo) edges.back() = *hi;
    return tabulate(path, burn_in, path.size(), std::move(edges), n_regimes);
}

double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.frequency.rows() != b.frequency.rows() || a.frequency.cols() != b.frequency.cols()) {
        throw Error(ErrorCode::GridMismatch, "histograms have different shapes");
    }
    return 0.5 * (a.frequency - b.frequency).cwiseAbs().sum();
}

double lyapunov_weight(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec, double x,
                       Regime theta) {
    const double c = optimal_consumption(policy, x, theta);
    if (!(c > 0.0)) return std::numeric_limits<double>::infinity();
    const double v = evaluate_value(value, x, theta);
    return std::sqrt(utility_derivative(spec, c) * std::exp(-spec.gamma * v)) + x;
}

std::pair<double, double> weight_half_means(const GriddedFunction& value, const GriddedFunction& policy,
                                            const ModelSpec& spec, const SimulationPath& path, std::size_t burn_in) {
    const std::size_t end = path.size();
    const std::size_t mid = burn_in + (end - std::min(burn_in, end)) / 2;
    if (burn_in >= mid || mid >= end) throw Error(ErrorCode::EmptySample, "path too short for two halves");
    double first = 0.0, second = 0.0;
    for (std::size_t k = burn_in; k < end; ++k) {
        (k < mid ? first : second) += lyapunov_weight(value, policy, spec, path.x[k], path.theta[k]);
    }
    return {first / static_cast<double>(mid - burn_in), second / static_cast<double>(end - mid)};
}

DriftReport drift_check(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                        std::size_t y_count, const QuadratureRule& rule) {
    const auto& grid = value.grid;
    const std::size_t n_x = grid.count() - 1;
    const std::size_t n_reg = spec.n_regimes();
    const QuadNodes nodes = quadrature_nodes(spec.shock, rule);

    DriftReport report;
    report.rows.resize(n_x * n_reg);
    parallel_for(report.rows.size(), [&](std::size_t task) {
        const Regime theta = task / n_x;
        const std::size_t i = task % n_x + 1;
        DriftRow& row = report.rows[task];
        row.x = grid[i];
        row.theta = theta;
        row.w = lyapunov_weight(value, policy, spec, row.x, theta);
        const double y = policy.at(i, theta);
        row.excluded = near_boundary(y, row.x, y_count);
        if (row.excluded) {
            row.expectation = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double expectation = 0.0;
        try {
            for (std::size_t r = 0; r < n_reg; ++r) {
                const double p = spec.chain.probability(theta, r);
                if (p == 0.0) continue;
                const auto w_next = [&](double z) {
                    return lyapunov_weight(value, policy, spec, production(spec, theta, y, z), r);
                };
                expectation += p * expect_shock(w_next, nodes);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NonFiniteIntegrand) throw;
            // Some next-period income has zero consumption, as in the Euler profile.
            row.excluded = true;
            expectation = std::numeric_limits<double>::infinity();
        }
        row.expectation = expectation;
    });

    for (double lambda : kDriftSlopes) {
        const DriftRow* worst = nullptr;
        double worst_gap = -std::numeric_limits<double>::infinity();
        bool bounded = true;
        for (const auto& row : report.rows) {
            if (row.excluded) continue;
            const double gap = row.expectation - lambda * row.w;
            if (std::isnan(gap) || gap == std::numeric_limits<double>::infinity()) {
                bounded = false;
                break;
            }
            if (!worst || gap > worst_gap) {
                worst_gap = gap;
                worst = &row;
            }
        }
        if (!bounded || !worst) continue;
        report.lambda_hat = lambda;
        report.kappa_hat = std::max(0.0, worst_gap);
        report.satisfied = true;
        report.worst_x = worst->x;
        report.worst_theta = worst->theta;
        break;
    }
    return report;
}

}  // namespace regrowth
