#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "regrowth/bellman.hpp"

namespace regrowth {

/// Value-tilted probabilities over (shock node, next regime): weights(i, r)
/// is proportional to w_i * p(theta, r) * exp(-gamma * V(f(theta, y, z_i), r)).
struct DistortedWeights {
    std::vector<double> z;
    Eigen::MatrixXd weights;
};

/// Throws Error{DegenerateMass} when the normalizer is not positive.
DistortedWeights distorted_measure(const GriddedFunction& value, const ModelSpec& spec, Regime theta,
                                   double investment, const QuadratureRule& rule);

/// c*(x) = x - phi*(x), with phi* read off the interpolated policy.
double optimal_consumption(const GriddedFunction& policy, double x, Regime theta);

struct EulerTerms {
    double marginal_utility = 0.0;  ///< u'(c*(x, theta))
    double discounted_return = 0.0; ///< beta * E'[u'(c*(x')) f'(theta, y, z)]

    double residual() const noexcept { return marginal_utility - discounted_return; }
    double relative() const noexcept;
};

/// Both sides of the Euler equation at income x > 0. Throws
/// Error{BoundaryPolicy} unless 0 < phi*(x, theta) < x.
EulerTerms euler_terms(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                       double x, Regime theta, const QuadratureRule& rule);

/// Same terms with today's investment fixed at y instead of phi*(x);
/// tomorrow still follows the policy.
EulerTerms euler_terms_at(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                          double x, Regime theta, double y, const QuadratureRule& rule);

double euler_residual(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                      double x, Regime theta, const QuadratureRule& rule);

/// True when the investment at x sits within one candidate step of 0 or x,
/// where the first-order condition need not hold on a finite search set.
bool near_boundary(double investment, double x, std::size_t y_count);

struct ResidualRow {
    double x = 0.0;
    Regime theta = 0;
    double residual = 0.0;
    double relative = 0.0;
    bool excluded = false;
};

/// Euler residuals at every positive grid node. Rows are flagged excluded,
/// with NaN residuals, when today's investment is near a boundary or when
/// the expectation reaches an income whose consumption is zero.
std::vector<ResidualRow> euler_profile(const GriddedFunction& value, const GriddedFunction& policy,
                                       const ModelSpec& spec, std::size_t y_count, const QuadratureRule& rule);

/// Median relative residual over the rows not excluded.
double median_relative_residual(const std::vector<ResidualRow>& rows);

struct EnvelopeReport {
    Eigen::VectorXd per_regime;  ///< max |V'_fd / u'(c*) - 1| per regime
    double max() const { return per_regime.size() ? per_regime.maxCoeff() : 0.0; }
};

/**
 * Compares centred differences of V along the grid with u'(c*) at interior
 * nodes with x >= x_floor. The lowest nodes are skipped by default because V
 * is not differentiable at zero and its slope there cannot be resolved by
 * any fixed grid spacing.
 */
EnvelopeReport envelope_check(const GriddedFunction& value, const GriddedFunction& policy, const ModelSpec& spec,
                              double x_floor = 1.0);

}  // namespace regrowth
