#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "regrowth/bellman.hpp"

namespace regrowth {

struct SimulationConfig {
    std::size_t horizon = 100000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 20240601;
    double x0 = 1.0;
    Regime theta0 = 0;

    /// Throws Error{ConfigError} unless burn_in < horizon and x0 > 0.
    void validate(std::size_t n_regimes) const;
};

/// Income and regime at k = 0, ..., horizon - 1.
struct SimulationPath {
    std::vector<double> x;
    std::vector<Regime> theta;

    std::size_t size() const noexcept { return x.size(); }
};

/// Seed mixing for the two random streams of a simulation. Regimes use
/// stream 0 and shocks stream 1, each an mt19937_64 seeded through
/// std::seed_seq{lo(seed), hi(seed), stream}.
enum class Stream : std::uint32_t { Regime = 0, Shock = 1 };

/**
 * Runs x_{k+1} = f(theta_k, phi(x_k, theta_k), xi_k) with theta_{k+1} drawn
 * from row theta_k of the transition matrix. Shocks come from the inverse
 * CDF of uniforms (j + 0.5) / 2^53 built from the top 53 bits of each draw,
 * so they never hit 0 or 1. The interpolated policy is clamped to [0, x].
 */
SimulationPath simulate_chain(const GriddedFunction& policy, const ModelSpec& spec, const SimulationConfig& config);

struct EmpiricalDistribution {
    std::vector<double> edges;       ///< n_bins + 1 increasing income edges
    Eigen::MatrixXd frequency;       ///< (bin, regime) share of the window; sums to 1
    Eigen::VectorXd regime_marginal; ///< column sums of frequency
    std::size_t samples = 0;
};

/// Histogram of the samples k >= burn_in over n_bins equal-width bins
/// spanning their income range. Throws Error{EmptySample}.
EmpiricalDistribution empirical_distribution(const SimulationPath& path, std::size_t burn_in, std::size_t n_bins,
                                             std::size_t n_regimes);

/// Histogram of samples first <= k < last on fixed edges; incomes outside
/// the edges fall into the nearest end bin. Throws Error{EmptySample}.
EmpiricalDistribution tabulate(const SimulationPath& path, std::size_t first, std::size_t last,
                               std::vector<double> edges, std::size_t n_regimes);

/// Half the L1 distance between two joint histograms on the same bins.
double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// W(x, theta) = sqrt(u'(c*) exp(-gamma V)) + x. Infinite when c* <= 0.
double lyapunov_weight(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec, double x,
                       Regime theta);

/// Mean of W along the path over [burn_in, mid) and [mid, end), with mid
/// halfway through the window. Throws Error{EmptySample} when a half is empty.
std::pair<double, double> weight_half_means(const GriddedFunction& value, const GriddedFunction& policy,
                                            const ModelSpec& spec, const SimulationPath& path, std::size_t burn_in);

struct DriftRow {
    double x = 0.0;
    Regime theta = 0;
    double w = 0.0;            ///< W(x, theta)
    double expectation = 0.0;  ///< one-step expectation of W
    bool excluded = false;
};

struct DriftReport {
    double lambda_hat = 1.0;
    double kappa_hat = 0.0;
    bool satisfied = false;
    double worst_x = 0.0;
    Regime worst_theta = 0;
    std::vector<DriftRow> rows;
};

/// Candidate slopes scanned by drift_check, in order.
inline constexpr double kDriftSlopes[] = {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};

/**
 * Checks E[W(x', theta') | x, theta] <= lambda * W(x, theta) + kappa over the
 * positive grid nodes whose policy is interior (see near_boundary) and whose
 * next-period incomes all have positive consumption. For each
 * slope in kDriftSlopes, kappa = max(0, max over nodes of E - lambda * W);
 * the first slope with a finite kappa is reported, and worst_x / worst_theta
 * name the node attaining it.
 */
DriftReport drift_check(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                        std::size_t y_count, const QuadratureRule& rule);

}  // namespace regrowth
