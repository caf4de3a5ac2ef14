#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "regrowth/bellman.hpp"
#include "regrowth/grid.hpp"
#include "regrowth/stationary.hpp"

namespace regrowth {

struct ModelBlock {
    double beta = 0.9;
    double gamma = 1.0;
    double sigma = 0.5;
    double r = 633.0;
    std::vector<double> omega{0.3, 0.5, 0.9};
    Eigen::MatrixXd transition;  ///< defaults to the three-regime example chain
    std::string shock = "lognormal";
    double shock_mu = 0.0;
    double shock_sigma = 1.0;
    std::vector<double> shock_points;
    std::vector<double> shock_weights;
    /// 1-based regime whose single-regime model is solved as the baseline; 0 disables it.
    std::size_t baseline_regime = 2;

    ModelBlock();
};

struct NumericsBlock {
    double x_max = 10.0;
    std::size_t x_count = 121;
    GridSpacing x_spacing = GridSpacing::Linear;
    double x_min = 1e-3;  ///< first positive node of a log-linear grid
    std::size_t y_count = 30;
    bool refine = false;
    std::size_t quad_intervals = 18;
    double quad_epsilon = 1e-6;
    int max_iters = 1000;
    double tol_w = 1e-10;
};

struct SimulationBlock {
    std::size_t T = 100000;
    std::size_t burn_in = 1000;
    std::uint64_t seed = 20240601;
    double x0 = 1.0;
    std::size_t theta0 = 1;  ///< 1-based
    std::size_t bins = 40;
    bool write_path = false;
};

struct OutputBlock {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};

    bool wants(std::string_view format) const;
};

struct RunConfig {
    ModelBlock model;
    NumericsBlock numerics;
    SimulationBlock simulation;
    OutputBlock output;

    ModelSpec model_spec() const;
    /// Single-regime model for model.baseline_regime.
    ModelSpec baseline_spec() const;
    IncomeGrid grid() const;
    InvestmentSearch search() const;
    QuadratureRule rule() const;
    StopRule stop() const;
    SimulationConfig simulation_config() const;

    /// Checks every derived object can be built. Throws Error{ConfigError}.
    void validate() const;
};

/**
 * Parses the block format
 *
 *   [model]            beta gamma sigma r omega transition shock shock_mu
 *                      shock_sigma shock_points shock_weights baseline_regime
 *   [numerics]         x_max x_count x_spacing x_min y_count refine
 *                      quad_intervals quad_epsilon max_iters tol_w
 *   [simulation]       T burn_in seed x0 theta0 bins write_path
 *   [output]           directory formats
 *
 * with one `key = value` per line, `#` comments, lists as `[a, b]` and
 * matrices as `[[a, b], [c, d]]`; a bracketed value may continue over
 * several lines. Keys not set keep their defaults. Unknown blocks or keys,
 * duplicates and malformed values throw Error{ConfigError} naming the line.
 */
RunConfig parse_config(std::string_view text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

/// The configuration written back in the block format with every key
/// present and numbers in shortest round-trip form.
std::string canonical_text(const RunConfig& config);

/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& config);
/// Hash over the model and numerics blocks only; identifies solve outputs.
std::string solve_hash(const RunConfig& config);

std::string format_number(double v);

}  // namespace regrowth
