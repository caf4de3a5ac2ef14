#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "regrowth/markov.hpp"

namespace regrowth {

struct ModelSpec;

enum class GridSpacing { Linear, LogLinear };

/// Strictly increasing income nodes starting at 0 and ending at x_max.
class IncomeGrid {
public:
    /// `count` nodes equi-spaced on [0, x_max].
    static IncomeGrid linear(double x_max, std::size_t count);
    /// Node 0 at zero followed by count-1 log-spaced nodes on [x_min, x_max].
    static IncomeGrid log_linear(double x_max, std::size_t count, double x_min);
    /// Arbitrary nodes; validated against the grid invariants.
    static IncomeGrid from_nodes(std::vector<double> nodes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t count() const noexcept { return nodes_.size(); }
    double x_max() const noexcept { return nodes_.back(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    GridSpacing spacing() const noexcept { return spacing_; }

    /// Index j of the segment [nodes[j], nodes[j+1]] used to evaluate at x >= 0;
    /// incomes beyond x_max map to the last segment.
    std::size_t segment(double x) const noexcept;

    friend bool operator==(const IncomeGrid& a, const IncomeGrid& b) { return a.nodes_ == b.nodes_; }

private:
    IncomeGrid(std::vector<double> nodes, GridSpacing spacing);

    std::vector<double> nodes_;
    GridSpacing spacing_;
    double step_ = 0.0;  // linear grids only
};

/**
 * Per-regime function of income stored at grid nodes: values(i, theta) is
 * the value at income grid[i]. Off-grid incomes are evaluated by linear
 * interpolation, and beyond x_max by continuing the last segment.
 */
struct GriddedFunction {
    IncomeGrid grid;
    Eigen::MatrixXd values;

    GriddedFunction(IncomeGrid g, std::size_t n_regimes)
        : grid(std::move(g)), values(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.count()),
                                                           static_cast<Eigen::Index>(n_regimes))) {}
    GriddedFunction(IncomeGrid g, Eigen::MatrixXd v);

    std::size_t n_regimes() const noexcept { return static_cast<std::size_t>(values.cols()); }
    double at(std::size_t node, Regime theta) const {
        return values(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(theta));
    }
    double& at(std::size_t node, Regime theta) {
        return values(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(theta));
    }
};

double evaluate_value(const GriddedFunction& f, double x, Regime theta);

/// max over nodes and regimes of |a - b| / w(x, theta). Throws GridMismatch.
double w_norm_distance(const GriddedFunction& a, const GriddedFunction& b, const ModelSpec& spec);

/// Replaces every regime column by its least concave majorant over the grid
/// nodes. Columns that are already concave are left untouched.
void make_concave(GriddedFunction& f);

inline constexpr double kValueTagTolerance = 1e-9;

/// Empty when `v` is finite, non-negative, non-decreasing and discretely
/// concave in every regime; otherwise describes the first violation found.
std::string value_field_violation(const GriddedFunction& v, double tolerance = kValueTagTolerance);

}  // namespace regrowth
